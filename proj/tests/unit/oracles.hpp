#pragma once

#include <cmath>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "nhminor/types.hpp"

namespace oracle {

using nhminor::cplx;

// At z = 0 the cubic factors as (x m + w)(x m^2 + w m + 1); the physical root of the
// quadratic factor has Im m with the sign of Im w.
inline cplx m_at_origin(double x, cplx w) {
  const cplx d = std::sqrt(w * w - 4.0 * x);
  const cplx a = (-w + d) / (2.0 * x), b = (-w - d) / (2.0 * x);
  return (a.imag() * w.imag() > 0.0) ? a : b;
}

template <class F>
auto central_difference(F&& f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

template <class M>
double operator_norm(const M& a) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(Eigen::MatrixXcd(a)).singularValues()(0);
}

}  // namespace oracle
