#pragma once

#include "nhminor/mde.hpp"
#include "nhminor/quadrature.hpp"
#include "nhminor/stability.hpp"

namespace nhminor {

struct LevelPair {
  double x1;
  cplx z1;
  double x2;
  cplx z2;
};

struct MesoContext {
  double x0;
  cplx z0;
  double a;  // mesoscopic exponent in (0, 1/2)

  // Throws std::invalid_argument unless |z0| < sqrt(x0) and 0 < a < 1/2.
  void validate() const;
  double factor() const { return 1.0 - abs2(z0) / x0; }
};

// |z1 - z2|^2 + |x1 - x2| (1 - |z|^2/x) with z, x taken on the larger-level side.
double kernel_K(const LevelPair& lp);

// Four-case log kernel. The closed disk |z|^2 <= x counts as inside.
double kernel_Theta(const LevelPair& lp);

// Argument of the log in V12: 1 + x^2 u1^2 u2^2 |z1 z2|^2 - x^2 m1^2 m2^2 - 2 x u1 u2 Re(z1 conj z2).
cplx log_argument(const PairPoint& pp);

// Everything V12 needs from one point on the imaginary axis.
struct EtaSample {
  double x;
  cplx z;
  double eta;
  cplx m, dm, u, du;

  static EtaSample at(double x, cplx z, double eta, const MdeTolerances& tol = {});
};

// 1/2 d_eta1 d_eta2 log D by the analytic chain rule. x is the lower level.
double V12_from_samples(const EtaSample& a, const EtaSample& b, double x_lo);

double V12(const PairPoint& pp);

// V12 with z2 replaced by its conjugate.
double V12_conj(const PairPoint& pp);

// (i / sqrt 2) d_eta (m^2).
cplx U(const SpectralPoint& p, const MdeTolerances& tol = {});

double kernel_K_meso(const MesoContext& mc, double y1, double y2, cplx z1, cplx z2);

// int_0^inf int_0^inf V12 d eta1 d eta2 on the tensor eta rule, with doubling check.
QuadResult<double> integrate_V12(const LevelPair& lp, const QuadratureSpec& spec,
                                 bool conjugate = false);

}  // namespace nhminor
