#pragma once

#include <Eigen/Core>

#include "nhminor/types.hpp"

namespace nhminor {

// Block-constant 2k x 2k matrices are carried as the 2x2 matrix of their block constants.
using ReducedMatrix = Eigen::Matrix2cd;

// (x, z, w): level fraction, Hermitization parameter, spectral parameter.
class SpectralPoint {
 public:
  // Throws std::invalid_argument unless 0 < x <= 1 and Im w != 0.
  SpectralPoint(double x, cplx z, cplx w);
  static SpectralPoint on_axis(double x, cplx z, double eta) { return {x, z, cplx(0.0, eta)}; }

  double x() const { return x_; }
  cplx z() const { return z_; }
  cplx w() const { return w_; }
  double eta() const { return eta_; }

 private:
  double x_;
  cplx z_;
  cplx w_;
  double eta_;
};

struct MdeTolerances {
  double residual = 1e-12;    // expected bound on the relative cubic residual
  double tie = 1e-14;         // residuals closer than this count as tied
  double degenerate = 1e-14;  // smallest admissible linearized coefficient
};

struct MdeSolution {
  cplx m;
  cplx u;
  double rho = 0.0;
  // NaN when the linearization at this point is degenerate; m_eta_derivative throws there.
  cplx m_eta_deriv;
  // Normwise backward error of m as a root of the cleared cubic.
  double residual = 0.0;
};

MdeSolution solve_m(const SpectralPoint& p, const MdeTolerances& tol = {});

// d m / d eta along w = E + i eta, by implicit differentiation of the cubic.
cplx m_eta_derivative(const SpectralPoint& p, const MdeSolution& sol,
                      const MdeTolerances& tol = {});

// d u / d eta, from u = m / (w + x m).
cplx u_eta_derivative(const SpectralPoint& p, const MdeSolution& sol);

// |m_x^z(w) - x^{-1/2} m_1^{z/sqrt x}(w/sqrt x)|.
double rescale_check(const SpectralPoint& p, const MdeTolerances& tol = {});

// Relative residual of the cleared cubic x^2 m^3 + 2xw m^2 + (w^2 + x - |z|^2) m + w.
double cubic_residual(const SpectralPoint& p, cplx m);

// Reduced M = [[m, -z u], [-conj(z) u, m]].
ReducedMatrix mde_matrix(const SpectralPoint& p, const MdeSolution& sol);

// Reduced d M / d eta.
ReducedMatrix mde_matrix_eta_derivative(const SpectralPoint& p, const MdeSolution& sol);

}  // namespace nhminor
