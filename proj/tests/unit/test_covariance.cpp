#include <gtest/gtest.h>

#include <cmath>

#include "nhminor/covariance.hpp"
#include "nhminor/simulator.hpp"

using namespace nhminor;

namespace {

// ||grad f||^2 for the real radial bump of the given radius, by 1D Gauss-Legendre in r.
double bump_dirichlet(double radius) {
  const auto rule = gauss_legendre(400, 0.0, radius);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i], s = (r / radius) * (r / radius);
    const double q = 1.0 / (1.0 - s);
    const double df = -std::exp(1.0 - q) * q * q * 2.0 * r / (radius * radius);
    acc += rule.weights[i] * df * df * r;
  }
  return 2.0 * kPi * acc;
}

// |z|^2 on a disk of radius 0.9 around the origin.
TestFunction modulus_squared() {
  return TestFunction([](cplx z) { return cplx(abs2(z)); }, 0.0, 0.9, "polynomial");
}

}  // namespace

TEST(Covariance, ZeroFunction) {
  const auto f = bump(0.1, 0.2);
  EXPECT_EQ(C_gauss(0.5, f, 1.0, zero_function()).value, 0.0);
  EXPECT_EQ(C_gauss_equal_level(0.5, zero_function(), f).value, 0.0);
  EXPECT_EQ(C_four(0.5, f, 1.0, zero_function()).value, 0.0);
}

TEST(Covariance, EqualLevelInteriorIsDirichletEnergy) {
  const double r = 0.3;
  const auto f = bump(cplx(0.1, -0.1), r);
  const auto v = C_gauss_equal_level(0.8, f, f);
  EXPECT_NEAR(v.value.real(), bump_dirichlet(r) / (4.0 * kPi), 1e-6);
  EXPECT_NEAR(v.value.imag(), 0.0, 1e-12);
  EXPECT_FALSE(v.fourier_truncated);
  EXPECT_FALSE(v.finite_differences);
}

TEST(Covariance, EqualLevelAmplitudeIsSesquilinear) {
  const auto f = bump(0.1, 0.2), g = bump(cplx(0.1, 0.05), 0.3);
  const auto base = C_gauss_equal_level(0.6, f, g).value;
  const auto fa = bump(0.1, 0.2, cplx(0.0, 2.0));
  const auto ga = bump(cplx(0.1, 0.05), 0.3, cplx(1.0, 1.0));
  EXPECT_LT(std::abs(C_gauss_equal_level(0.6, fa, ga).value - std::conj(cplx(0.0, 2.0)) * cplx(1.0, 1.0) * base),
            1e-10);
}

TEST(Covariance, SwapConjugates) {
  const auto f1 = bump(cplx(0.1, 0.1), 0.3), f2 = bump(cplx(0.5, 0.2), 0.4, cplx(1.0, 0.5));
  const cplx a = C_gauss(0.5, f1, 0.9, f2).value, b = C_gauss(0.9, f2, 0.5, f1).value;
  EXPECT_LT(std::abs(a - std::conj(b)), 1e-8);
}

TEST(Covariance, ThetaFormMatchesContourForm) {
  const auto f = bump(0.0, 0.25);
  const auto a = C_gauss(0.5, f, 1.0, f), b = C_gauss_contour_form(0.5, f, 1.0, f);
  EXPECT_GT(a.value.real(), 0.0);
  EXPECT_NEAR(a.value.imag(), 0.0, 1e-10);
  EXPECT_LE(std::abs(a.value - b.value), 1e-3 * std::abs(a.value));
}

TEST(Covariance, ThetaFormMatchesContourFormAcrossTheEdge) {
  const auto f1 = bump(cplx(0.5, 0.1), 0.3), f2 = bump(cplx(0.6, -0.2), 0.4, cplx(0.3, 1.0));
  const auto a = C_gauss(0.4, f1, 0.9, f2), b = C_gauss_contour_form(0.4, f1, 0.9, f2);
  EXPECT_LE(std::abs(a.value - b.value), 1e-3 * std::abs(a.value));
}

TEST(Covariance, DiagonalIsPositive) {
  for (double x : {0.3, 0.6, 1.0})
    for (cplx c : {cplx(0.0), cplx(0.4, 0.3), cplx(0.9, 0.0)}) {
      const auto f = bump(c, 0.3, cplx(1.0, 2.0));
      const auto v = C_gauss(x, f, x, f).value;
      // a support outside the disk carries no fluctuation
      if (std::abs(c) - 0.3 < std::sqrt(x)) EXPECT_GT(v.real(), 0.0) << x << ' ' << c;
      else EXPECT_EQ(v.real(), 0.0) << x << ' ' << c;
      EXPECT_NEAR(v.imag(), 0.0, 1e-10 * v.real());
    }
}

TEST(Covariance, MeanDefectOfModulusSquared) {
  for (double x : {0.25, 0.5, 0.64}) {
    double err = 0.0;
    EXPECT_NEAR(mean_defect(x, modulus_squared(), {}, &err).real(), -x / 2.0, 1e-10);
    EXPECT_LE(err, 1e-4);
  }
}

TEST(Covariance, MeanDefectOfFlatFunctionVanishes) {
  const TestFunction flat([](cplx) { return cplx(3.0, -1.0); }, 0.0, 0.95, "flat");
  EXPECT_LT(std::abs(mean_defect(0.7, flat)), 1e-12);
  EXPECT_LT(std::abs(C_four(0.7, flat, 1.0, bump(0.2, 0.3)).value), 1e-12);
}

TEST(Covariance, FourthCumulantPrefactor) {
  const auto f = modulus_squared();
  const cplx v = C_four(0.5, f, 0.64, f).value;
  EXPECT_NEAR(v.real(), (0.5 / 0.64) * 0.25 * 0.32, 1e-10);
  const auto g = bump(cplx(0.2, 0.1), 0.4, cplx(0.0, 1.0));
  const cplx d1 = mean_defect(0.5, g), d2 = mean_defect(1.0, g);
  EXPECT_LT(std::abs(C_four(0.5, g, 1.0, g).value - 0.5 * std::conj(d1) * d2), 1e-12);
  EXPECT_LT(std::abs(C_four(1.0, g, 0.5, g).value - 0.5 * std::conj(d2) * d1), 1e-12);
}

TEST(Covariance, BetaTwoCombination) {
  const auto f1 = bump(0.2, 0.3), f2 = bump(cplx(0.1, 0.3), 0.3);
  const auto g = C_beta(2, 0.0, 0.5, f1, 1.0, f2);
  EXPECT_EQ(g.total, g.gaussian_part);
  const double k4 = EntryLaw::make("four_phase", 2).kappa4();
  EXPECT_EQ(k4, -1.0);
  const auto c = C_beta(2, k4, 0.5, f1, 1.0, f2);
  EXPECT_LT(std::abs(c.total - (c.gaussian_part - c.kappa4_part)), 1e-15);
  EXPECT_LT(std::abs(c.gaussian_part - C_gauss(0.5, f1, 1.0, f2).value), 1e-15);
}

TEST(Covariance, BetaOneSymmetricFunctions) {
  const auto f1 = bump(0.2, 0.3), f2 = bump(0.1, 0.4);
  const auto c = C_beta(1, -2.0, 0.5, f1, 1.0, f2);
  EXPECT_LT(std::abs(c.gaussian_part - C_gauss(0.5, f1, 1.0, f2).value), 1e-8);
  EXPECT_LT(std::abs(c.total - (2.0 * c.gaussian_part - 2.0 * c.kappa4_part)), 1e-15);
}

TEST(Covariance, BetaOneUsesSymmetrizedFunctions) {
  const auto f1 = bump(cplx(0.2, 0.3), 0.25), f2 = bump(cplx(0.1, -0.2), 0.3);
  const auto c = C_beta(1, 0.0, 0.6, f1, 0.9, f2);
  const auto f1c = conjugate_argument(f1), f2c = conjugate_argument(f2);
  const cplx direct = 0.25 * (C_gauss(0.6, f1, 0.9, f2).value + C_gauss(0.6, f1, 0.9, f2c).value +
                              C_gauss(0.6, f1c, 0.9, f2).value + C_gauss(0.6, f1c, 0.9, f2c).value);
  EXPECT_LT(std::abs(c.gaussian_part - direct), 1e-6 * (1.0 + std::abs(direct)));
}

TEST(Covariance, MesoDiagonalIsPositive) {
  const MesoContext mc{0.75, cplx(0.2, 0.1), 0.25};
  const auto f = bump(0.0, 1.0);
  for (double y : {-1.0, 0.0, 2.0}) {
    const cplx v = C_meso(mc, 2, y, f, y, f).value;
    EXPECT_GT(v.real(), 0.0);
    EXPECT_NEAR(v.imag(), 0.0, 1e-10 * v.real());
  }
}

TEST(Covariance, MesoFormsAgree) {
  const MesoContext mc{1.0, 0.0, 0.25};
  const auto f1 = bump(0.0, 1.0), f2 = bump(cplx(0.3, 0.2), 1.2, cplx(0.5, 1.0));
  const cplx a = C_meso(mc, 2, 0.0, f1, 1.5, f2).value;
  const cplx b = C_meso_gradient_form(mc, 0.0, f1, 1.5, f2).value;
  EXPECT_LE(std::abs(a - b), 1e-3 * std::abs(a));
}

TEST(Covariance, MesoDecaysWithSeparation) {
  const MesoContext mc{0.8, 0.1, 0.25};
  const auto f = bump(0.0, 1.0);
  const double near = std::abs(C_meso(mc, 2, 0.0, f, 1.0, f).value);
  const double far = std::abs(C_meso(mc, 2, 0.0, f, 8.0, f).value);
  EXPECT_LT(far, near);
}

TEST(Covariance, MesoBetaOneDoubles) {
  const MesoContext mc{0.8, 0.0, 0.25};
  const auto f = bump(0.0, 1.0);
  EXPECT_LT(std::abs(C_meso(mc, 1, 0.0, f, 0.5, f).value - 2.0 * C_meso(mc, 2, 0.0, f, 0.5, f).value),
            1e-8);
}
