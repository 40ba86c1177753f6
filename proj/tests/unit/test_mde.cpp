#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nhminor/errors.hpp"
#include "nhminor/mde.hpp"
#include "oracles.hpp"

using namespace nhminor;

TEST(Mde, QuadraticBranchAtOrigin) {
  const auto p = SpectralPoint::on_axis(1.0, 0.0, 1.0);
  const auto s = solve_m(p);
  EXPECT_LT(std::abs(s.m - oracle::m_at_origin(1.0, kI)), 1e-14);
  EXPECT_NEAR(s.m.imag(), (std::sqrt(5.0) - 1.0) / 2.0, 1e-14);
  EXPECT_LE(s.residual, 1e-12);
  EXPECT_NEAR(s.rho, s.m.imag() / kPi, 1e-15);
  EXPECT_LT(std::abs(s.u - s.m / (p.w() + p.x() * s.m)), 1e-15);
}

TEST(Mde, OriginOracleOverLevelsAndEtas) {
  for (double x : {0.1, 0.3, 0.7, 1.0})
    for (double eta : {1e-4, 0.01, 0.5, 3.0, 100.0}) {
      const cplx w(0.0, eta);
      const auto s = solve_m(SpectralPoint(x, 0.0, w));
      EXPECT_LT(std::abs(s.m - oracle::m_at_origin(x, w)), 1e-12 * (1.0 + std::abs(s.m)))
          << x << ' ' << eta;
    }
}

TEST(Mde, BulkLimit) {
  const auto s = solve_m(SpectralPoint::on_axis(0.5, 0.3, 1e-8));
  EXPECT_NEAR(s.m.imag(), std::sqrt(0.5 - 0.09) / 0.5, 1e-3);
  EXPECT_NEAR(s.m.imag(), 1.2806, 1e-4);
  EXPECT_NEAR(s.m.real(), 0.0, 1e-10);
}

TEST(Mde, OutsideLimit) {
  const auto s = solve_m(SpectralPoint::on_axis(1.0, 2.0, 1e-8));
  EXPECT_NEAR(s.u.real(), 0.25, 1e-3);
  EXPECT_NEAR(s.rho, 0.0, 1e-6);
}

TEST(Mde, EtaDerivativeAtOrigin) {
  const auto p = SpectralPoint::on_axis(1.0, 0.0, 1e-12);
  const auto s = solve_m(p);
  EXPECT_LT(std::abs(m_eta_derivative(p, s) - cplx(0.0, -0.5)), 1e-9);
}

TEST(Mde, EtaDerivativeMatchesFiniteDifference) {
  const double x = 1.0, eta = 0.8;
  const cplx z = 0.5;
  const auto p = SpectralPoint::on_axis(x, z, eta);
  const cplx d = m_eta_derivative(p, solve_m(p));
  const cplx fd = oracle::central_difference(
      [&](double e) { return solve_m(SpectralPoint::on_axis(x, z, e)).m; }, eta, 1e-5);
  EXPECT_LE(std::abs(d - fd), 1e-7);
}

TEST(Mde, EtaDerivativeLargeEta) {
  const double eta = 100.0;
  const auto p = SpectralPoint::on_axis(1.0, 0.0, eta);
  const cplx d = m_eta_derivative(p, solve_m(p));
  const cplx expect(0.0, -1.0 / (eta * eta));  // m ~ -1/w = i/eta
  EXPECT_LE(std::abs(d - expect), 0.01 * std::abs(expect));
}

TEST(Mde, UDerivativeMatchesFiniteDifference) {
  const double x = 0.6, eta = 0.3;
  const cplx z(0.2, -0.3);
  const auto p = SpectralPoint::on_axis(x, z, eta);
  const cplx d = u_eta_derivative(p, solve_m(p));
  const cplx fd = oracle::central_difference(
      [&](double e) { return solve_m(SpectralPoint::on_axis(x, z, e)).u; }, eta, 1e-5);
  EXPECT_LE(std::abs(d - fd), 1e-7);
}

TEST(Mde, Rescaling) {
  EXPECT_LE(rescale_check(SpectralPoint::on_axis(0.25, 0.2, 0.5)), 1e-10);
  EXPECT_EQ(rescale_check(SpectralPoint::on_axis(1.0, cplx(0.3, 0.4), 0.2)), 0.0);
  EXPECT_LE(rescale_check(SpectralPoint::on_axis(0.5, 0.9, 0.01)), 1e-8);
}

TEST(Mde, InvalidPointsRejected) {
  EXPECT_THROW(SpectralPoint(0.0, 0.0, kI), std::invalid_argument);
  EXPECT_THROW(SpectralPoint(1.5, 0.0, kI), std::invalid_argument);
  EXPECT_THROW(SpectralPoint(0.5, 0.0, 1.0), std::invalid_argument);
}

TEST(Mde, OffAxisSpectralParameter) {
  for (cplx w : {cplx(0.3, 0.2), cplx(-0.5, 0.01), cplx(0.2, -0.4)}) {
    const SpectralPoint p(0.7, cplx(0.1, 0.2), w);
    const auto s = solve_m(p);
    EXPECT_GT(s.m.imag() * w.imag(), 0.0);
    EXPECT_LE(s.residual, 1e-12);
  }
}

// Properties over a random sweep.

TEST(MdeProperty, BranchAndResidualSweep) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0.1, 1.0), ur(0.0, 2.0), uth(0.0, 2 * kPi),
      ulog(-6.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = ux(rng), eta = std::pow(10.0, ulog(rng));
    const cplx z = std::polar(ur(rng), uth(rng));
    const auto s = solve_m(SpectralPoint::on_axis(x, z, eta));
    ASSERT_GT(s.m.imag(), 0.0) << x << ' ' << z << ' ' << eta;
    ASSERT_LE(s.residual, 1e-12) << x << ' ' << z << ' ' << eta;
    ASSERT_LE(std::abs(cubic_residual(SpectralPoint::on_axis(x, z, eta), s.m)), 1e-12);
  }
}

TEST(MdeProperty, LimitsAwayFromTheEdge) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0.1, 1.0), u01(0.0, 1.0), uth(0.0, 2 * kPi);
  for (int i = 0; i < 300; ++i) {
    const double x = ux(rng);
    const double r2_in = (x - 0.01) * u01(rng);
    const cplx z_in = std::polar(std::sqrt(r2_in), uth(rng));
    const auto si = solve_m(SpectralPoint::on_axis(x, z_in, 1e-8));
    EXPECT_LE(std::abs(si.m - kI * std::sqrt(x - r2_in) / x), 1e-3);
    const double r2_out = x + 0.01 + 3.0 * u01(rng);
    const cplx z_out = std::polar(std::sqrt(r2_out), uth(rng));
    const auto so = solve_m(SpectralPoint::on_axis(x, z_out, 1e-8));
    EXPECT_LE(std::abs(so.u - 1.0 / r2_out), 1e-3);
  }
}

TEST(MdeProperty, EdgeDensityExponent) {
  // least-squares slope of log rho against log eta at |z|^2 = x
  for (double x : {0.5, 1.0}) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double le = -6.0; le <= -1.0 + 1e-9; le += 0.25) {
      const double eta = std::pow(10.0, le);
      const double rho = solve_m(SpectralPoint::on_axis(x, std::sqrt(x), eta)).rho;
      const double a = std::log(eta), b = std::log(rho);
      sx += a, sy += b, sxx += a * a, sxy += a * b, ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    EXPECT_NEAR(slope, 1.0 / 3.0, 0.05) << "x = " << x;
  }
}

TEST(MdeProperty, DependsOnModulusOfZOnly) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0), uth(0.0, 2 * kPi);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng), eta = u(rng);
    const cplx z = std::polar(u(rng), uth(rng));
    const cplx m = solve_m(SpectralPoint::on_axis(x, z, eta)).m;
    EXPECT_LT(std::abs(m - solve_m(SpectralPoint::on_axis(x, std::conj(z), eta)).m), 1e-14);
    EXPECT_LT(std::abs(m - solve_m(SpectralPoint::on_axis(x, z * std::polar(1.0, uth(rng)), eta)).m),
              1e-13);
  }
}

TEST(MdeProperty, RescalingInTheBulk) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ux(0.1, 1.0), u01(0.0, 1.0), uth(0.0, 2 * kPi);
  for (int i = 0; i < 300; ++i) {
    const double x = ux(rng);
    const cplx z = std::polar(std::sqrt(0.9 * x * u01(rng)), uth(rng));
    const double eta = std::pow(10.0, -4.0 + 5.0 * u01(rng));
    EXPECT_LE(rescale_check(SpectralPoint::on_axis(x, z, eta)), 1e-10);
  }
}

TEST(MdeProperty, MatrixNormBound) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ux(0.1, 1.0), ur(0.0, 2.0), uth(0.0, 2 * kPi),
      ulog(-6.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double x = ux(rng);
    const auto p = SpectralPoint::on_axis(x, std::polar(ur(rng), uth(rng)), std::pow(10.0, ulog(rng)));
    const auto s = solve_m(p);
    const double norm = oracle::operator_norm(mde_matrix(p, s));
    EXPECT_LE(norm + std::abs(s.m) + std::abs(s.u), 10.0 / x);
  }
}

TEST(MdeProperty, MatrixDerivativeMatchesFiniteDifference) {
  const double x = 0.4, eta = 0.25;
  const cplx z(0.1, 0.3);
  const auto p = SpectralPoint::on_axis(x, z, eta);
  const ReducedMatrix d = mde_matrix_eta_derivative(p, solve_m(p));
  auto M = [&](double e) {
    const auto q = SpectralPoint::on_axis(x, z, e);
    return ReducedMatrix(mde_matrix(q, solve_m(q)));
  };
  const ReducedMatrix fd = (M(eta + 1e-5) - M(eta - 1e-5)) / 2e-5;
  EXPECT_LE((d - fd).cwiseAbs().maxCoeff(), 1e-7);
}
