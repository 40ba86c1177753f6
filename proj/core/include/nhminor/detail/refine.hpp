#pragma once

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <string>

#include "nhminor/errors.hpp"

namespace nhminor {

namespace detail {
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }
template <class D>
double magnitude(const Eigen::MatrixBase<D>& v) {
  return v.cwiseAbs().maxCoeff();
}
}  // namespace detail

template <class T, class Eval>
QuadResult<T> refine(Eval&& eval, const QuadratureSpec& spec, const std::string& what) {
  spec.validate();
  QuadResult<T> out;
  T prev = eval(0);
  out.value = prev;
  for (int level = 1; level <= spec.max_refinements; ++level) {
    T next = eval(level);
    out.error = detail::magnitude(next - prev);
    out.value = next;
    out.refinements = level;
    if (out.error <= spec.tolerance) return out;
    prev = next;
  }
  if (spec.max_refinements == 0) return out;
  throw QuadratureNotConverged(what, detail::magnitude(out.value), out.error);
}

}  // namespace nhminor
