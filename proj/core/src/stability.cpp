#include "nhminor/stability.hpp"

#include <cmath>

#include "nhminor/errors.hpp"

namespace nhminor {

ReducedMatrix self_energy(double x, const ReducedMatrix& R) {
  const ReducedMatrix ep = e_plus(), em = e_minus();
  return x * (reduced_trace(R * ep) * ep - reduced_trace(R * em) * em);
}

PairPoint PairPoint::make(const SpectralPoint& p1, const SpectralPoint& p2,
                          const MdeTolerances& tol) {
  return PairPoint{p1, p2, solve_m(p1, tol), solve_m(p2, tol), p1.x() <= p2.x()};
}

StabilityEigs beta_pm(const PairPoint& pp) {
  const double x = pp.x_lo();
  const cplx zz = pp.p1.z() * std::conj(pp.p2.z());
  const cplx uu = pp.s1.u * pp.s2.u;
  const cplx mm = pp.s1.m * pp.s2.m;
  const cplx b = zz.imag() * uu;
  cplx s = std::sqrt(mm * mm - b * b);
  if ((s * std::conj(mm)).real() < 0.0) s = -s;
  const cplx base = 1.0 - x * zz.real() * uu;
  StabilityEigs e{base + x * s, base - x * s, 0.0};
  e.beta_star = std::min(std::abs(e.beta_plus), std::abs(e.beta_minus));
  return e;
}

std::array<cplx, 4> beta_product_terms(const PairPoint& pp) {
  const double x = pp.x_lo();
  const cplx u1 = pp.s1.u, u2 = pp.s2.u;
  const double i1 = pp.s1.m.imag(), i2 = pp.s2.m.imag();
  return {x * u1 * u2 * abs2(pp.p1.z() - pp.p2.z()), (1.0 - x * u1) * (1.0 - x * u2),
          x * i1 * i1 * u2 * (1.0 - x * u1) / u1, x * i2 * i2 * u1 * (1.0 - x * u2) / u2};
}

cplx beta_product(const PairPoint& pp) {
  const auto t = beta_product_terms(pp);
  return t[0] + t[1] + t[2] + t[3];
}

Eigen::Matrix2cd stability_system(const PairPoint& pp) {
  const double x = pp.x_lo();
  const ReducedMatrix M1 = mde_matrix(pp.p1, pp.s1);
  const ReducedMatrix M2 = mde_matrix(pp.p2, pp.s2);
  const ReducedMatrix em = e_minus();
  const ReducedMatrix vp = M2 * M1;
  const ReducedMatrix vm = M2 * em * M1;
  Eigen::Matrix2cd P;
  P << 1.0 - x * reduced_trace(vp), x * reduced_trace(vp * em), -x * reduced_trace(vm),
      1.0 + x * reduced_trace(vm * em);
  return P;
}

ReducedMatrix apply_stability(const PairPoint& pp, const ReducedMatrix& R) {
  const ReducedMatrix M1 = mde_matrix(pp.p1, pp.s1);
  const ReducedMatrix M2 = mde_matrix(pp.p2, pp.s2);
  return R - M1 * self_energy(pp.x_lo(), R) * M2;
}

ReducedMatrix invert_reduced_stability(const PairPoint& pp, const ReducedMatrix& R,
                                       double singular_tol) {
  const double x = pp.x_lo();
  const Eigen::Matrix2cd P = stability_system(pp);
  const cplx det = P(0, 0) * P(1, 1) - P(0, 1) * P(1, 0);
  if (std::abs(det) <= singular_tol)
    throw SingularStability("two-body stability system is singular");
  const ReducedMatrix ep = e_plus(), em = e_minus();
  const cplx rp = reduced_trace(R * ep);
  const cplx rm = reduced_trace(R * em);
  const cplx ap = (P(1, 1) * rp - P(0, 1) * rm) / det;
  const cplx am = (-P(1, 0) * rp + P(0, 0) * rm) / det;
  const ReducedMatrix M1 = mde_matrix(pp.p1, pp.s1);
  const ReducedMatrix M2 = mde_matrix(pp.p2, pp.s2);
  return R + x * (ap * (M1 * ep * M2) - am * (M1 * em * M2));
}

ReducedMatrix two_resolvent_approx(const PairPoint& pp, const ReducedMatrix& B,
                                   double singular_tol) {
  const ReducedMatrix M1 = mde_matrix(pp.p1, pp.s1);
  const ReducedMatrix M2 = mde_matrix(pp.p2, pp.s2);
  return invert_reduced_stability(pp, M1 * B * M2, singular_tol);
}

ReducedMatrix matrix_A(const SpectralPoint& p, double singular_tol, const MdeTolerances& tol) {
  const MdeSolution s = solve_m(p, tol);
  const ReducedMatrix M = mde_matrix(p, s);
  const cplx norm = 1.0 - p.x() * reduced_trace(M * M);
  if (std::abs(norm) <= singular_tol)
    throw SingularNormalization("1 - x<M^2> vanishes");
  return M / norm;
}

}  // namespace nhminor
