#pragma once

#include <complex>
#include <numbers>

namespace nhminor {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

inline double abs2(cplx z) { return std::norm(z); }

}  // namespace nhminor
