#pragma once

#include <array>

#include "nhminor/mde.hpp"

namespace nhminor {

inline ReducedMatrix e_plus() { return ReducedMatrix::Identity(); }
inline ReducedMatrix e_minus() {
  ReducedMatrix e = ReducedMatrix::Identity();
  e(1, 1) = -1.0;
  return e;
}

// Normalized trace of the block-constant matrix represented by R.
inline cplx reduced_trace(const ReducedMatrix& R) { return 0.5 * R.trace(); }

// S_x[R] = x (<R E+> E+ - <R E-> E-).
ReducedMatrix self_energy(double x, const ReducedMatrix& R);

struct PairPoint {
  SpectralPoint p1;
  SpectralPoint p2;
  MdeSolution s1;
  MdeSolution s2;
  bool ordered;  // x1 <= x2

  static PairPoint make(const SpectralPoint& p1, const SpectralPoint& p2,
                        const MdeTolerances& tol = {});
  // Prefactor of the self-energy in the two-body operator: min(x1, x2).
  double x_lo() const { return ordered ? p1.x() : p2.x(); }
};

struct StabilityEigs {
  cplx beta_plus;
  cplx beta_minus;
  double beta_star;
};

StabilityEigs beta_pm(const PairPoint& pp);

// The four-term nonnegative decomposition of beta_+ beta_- on the imaginary axis.
cplx beta_product(const PairPoint& pp);

// Each of the four terms of beta_product, in order.
std::array<cplx, 4> beta_product_terms(const PairPoint& pp);

// The 2x2 system matrix acting on the (<R E+>, <R E->) coordinates of B^{-1}.
Eigen::Matrix2cd stability_system(const PairPoint& pp);

// B[R] = R - M1 S[R] M2 with S at the lower level.
ReducedMatrix apply_stability(const PairPoint& pp, const ReducedMatrix& R);

// B^{-1}[R]; throws SingularStability if |det P| <= singular_tol.
ReducedMatrix invert_reduced_stability(const PairPoint& pp, const ReducedMatrix& R,
                                       double singular_tol = 1e-13);

// Deterministic approximation of G1 B G2: B^{-1}[M1 B M2].
ReducedMatrix two_resolvent_approx(const PairPoint& pp, const ReducedMatrix& B,
                                   double singular_tol = 1e-13);

// A = (1 - x <M^2>)^{-1} M; throws SingularNormalization if the prefactor vanishes.
ReducedMatrix matrix_A(const SpectralPoint& p, double singular_tol = 1e-13,
                       const MdeTolerances& tol = {});

}  // namespace nhminor
