#include "nhminor/mde.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nhminor/errors.hpp"

namespace nhminor {

SpectralPoint::SpectralPoint(double x, cplx z, cplx w) : x_(x), z_(z), w_(w), eta_(std::abs(w.imag())) {
  if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("level fraction x must lie in (0, 1]");
  if (!(w.imag() != 0.0)) throw std::invalid_argument("spectral parameter needs Im w != 0");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !std::isfinite(w.real()))
    throw std::invalid_argument("non-finite spectral point");
}

namespace {

struct Cubic {
  std::array<cplx, 4> c;  // c[i] multiplies m^i

  explicit Cubic(const SpectralPoint& p) {
    const double x = p.x();
    const cplx w = p.w();
    c[3] = x * x;
    c[2] = 2.0 * x * w;
    c[1] = w * w + x - abs2(p.z());
    c[0] = w;
  }
  cplx value(cplx m) const { return ((c[3] * m + c[2]) * m + c[1]) * m + c[0]; }
  cplx slope(cplx m) const { return (3.0 * c[3] * m + 2.0 * c[2]) * m + c[1]; }
  double scale(cplx m) const {
    double a = std::abs(m);
    return ((std::abs(c[3]) * a + std::abs(c[2])) * a + std::abs(c[1])) * a + std::abs(c[0]);
  }
  double residual(cplx m) const { return std::abs(value(m)) / scale(m); }
};

// Residual of -1/m = w + x m - |z|^2 / (w + x m) before clearing denominators.
double original_residual(const SpectralPoint& p, cplx m) {
  const cplx a = p.w() + p.x() * m;
  const double zz = abs2(p.z());
  const double denom = 1.0 / std::abs(m) + std::abs(a) + zz / std::abs(a);
  return std::abs(1.0 / m + a - zz / a) / denom;
}

cplx polish(const Cubic& cubic, cplx m) {
  double r = cubic.residual(m);
  for (int it = 0; it < 6; ++it) {
    const cplx d = cubic.slope(m);
    if (d == 0.0) break;
    const cplx next = m - cubic.value(m) / d;
    const double rn = cubic.residual(next);
    if (!(rn < r)) break;
    m = next;
    r = rn;
  }
  return m;
}

}  // namespace

double cubic_residual(const SpectralPoint& p, cplx m) { return Cubic(p).residual(m); }

MdeSolution solve_m(const SpectralPoint& p, const MdeTolerances& tol) {
  const Cubic cubic(p);
  Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
  companion(0, 0) = -cubic.c[2] / cubic.c[3];
  companion(0, 1) = -cubic.c[1] / cubic.c[3];
  companion(0, 2) = -cubic.c[0] / cubic.c[3];
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(companion, false);
  if (es.info() != Eigen::Success) throw NoBranchRoot("companion eigen-solve failed");

  const double sign = p.w().imag() > 0.0 ? 1.0 : -1.0;
  int best = -1;
  std::array<cplx, 3> roots;
  std::array<double, 3> res;
  for (int i = 0; i < 3; ++i) {
    roots[i] = polish(cubic, es.eigenvalues()[i]);
    res[i] = original_residual(p, roots[i]);
  }
  for (int i = 0; i < 3; ++i) {
    if (!(sign * roots[i].imag() > 0.0) || !std::isfinite(res[i])) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    if (std::abs(res[i] - res[best]) <= tol.tie) {
      if (std::abs(roots[i].imag()) > std::abs(roots[best].imag())) best = i;
    } else if (res[i] < res[best]) {
      best = i;
    }
  }
  if (best < 0) throw NoBranchRoot("no root of the cubic has Im m of the sign of Im w");

  MdeSolution sol;
  sol.m = roots[best];
  sol.u = sol.m / (p.w() + p.x() * sol.m);
  sol.rho = std::abs(sol.m.imag()) / kPi;
  sol.residual = cubic.residual(sol.m);
  const cplx lin = cubic.slope(sol.m);
  if (std::abs(lin) < tol.degenerate) {
    sol.m_eta_deriv = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
  } else {
    sol.m_eta_deriv = m_eta_derivative(p, sol, tol);
  }
  return sol;
}

cplx m_eta_derivative(const SpectralPoint& p, const MdeSolution& sol, const MdeTolerances& tol) {
  const Cubic cubic(p);
  const cplx m = sol.m;
  const cplx lin = cubic.slope(m);
  if (std::abs(lin) < tol.degenerate)
    throw DegenerateLinearization("linearized cubic coefficient vanishes");
  // dP/dw = 2 x m^2 + 2 w m + 1 and dw/deta = i (for Im w > 0; -i otherwise)
  const cplx dw = p.w().imag() > 0.0 ? kI : -kI;
  const cplx pw = 2.0 * p.x() * m * m + 2.0 * p.w() * m + 1.0;
  return -dw * pw / lin;
}

cplx u_eta_derivative(const SpectralPoint& p, const MdeSolution& sol) {
  const cplx a = p.w() + p.x() * sol.m;
  const cplx dw = p.w().imag() > 0.0 ? kI : -kI;
  return (p.w() * sol.m_eta_deriv - dw * sol.m) / (a * a);
}

double rescale_check(const SpectralPoint& p, const MdeTolerances& tol) {
  const double s = std::sqrt(p.x());
  const MdeSolution mx = solve_m(p, tol);
  const MdeSolution m1 = solve_m(SpectralPoint(1.0, p.z() / s, p.w() / s), tol);
  return std::abs(mx.m - m1.m / s);
}

ReducedMatrix mde_matrix(const SpectralPoint& p, const MdeSolution& sol) {
  ReducedMatrix M;
  M << sol.m, -p.z() * sol.u, -std::conj(p.z()) * sol.u, sol.m;
  return M;
}

ReducedMatrix mde_matrix_eta_derivative(const SpectralPoint& p, const MdeSolution& sol) {
  const cplx du = u_eta_derivative(p, sol);
  ReducedMatrix D;
  D << sol.m_eta_deriv, -p.z() * du, -std::conj(p.z()) * du, sol.m_eta_deriv;
  return D;
}

}  // namespace nhminor
