#pragma once

#include <vector>

#include "nhminor/kernels.hpp"
#include "nhminor/quadrature.hpp"
#include "nhminor/test_function.hpp"

namespace nhminor {

struct CovarianceSettings {
  // Node counts per test-function support; tolerance is absolute on the form value.
  QuadratureSpec spec{32, 64, 128, 1e-4, 1};
  int kmax = 256;             // Fourier modes kept in the boundary term
  int fourier_nodes = 2048;   // equispaced samples on the circle
  double fourier_tail = 1e-10;  // flag if sum_{kmax/2 < |k| <= kmax} |k| |a_k|^2 exceeds this
};

struct FormValue {
  cplx value;
  double error = 0.0;
  bool finite_differences = false;  // some Laplacian or gradient came from finite differences
  bool fourier_truncated = false;   // boundary series tail above settings.fourier_tail
};

struct CovarianceValue {
  cplx gaussian_part;  // C^(G), of the symmetrized functions when beta == 1
  cplx kappa4_part;    // C^(4)
  cplx total;
  int beta = 2;
  double kappa4 = 0.0;
  double error = 0.0;
  bool finite_differences = false;
  bool fourier_truncated = false;
};

// Quadrature nodes covering supp f, split at |z| = sqrt(x). With inside_only the nodes
// stop at the circle.
std::vector<PolarNode> support_nodes(const TestFunction& f, double x, int radial_nodes,
                                     int angular_nodes, bool inside_only = false);

// (1/8pi^2) int int conj(Lap f1) Lap f2 Theta; dispatches to the equal-level form when x1 == x2.
FormValue C_gauss(double x1, const TestFunction& f1, double x2, const TestFunction& f2,
                  const CovarianceSettings& s = {});

// (1/4pi) <grad f1, grad f2>_{L2(D_x)} + (1/2) sum |k| conj(a1_k) a2_k.
FormValue C_gauss_equal_level(double x, const TestFunction& f1, const TestFunction& f2,
                              const CovarianceSettings& s = {});

// Gradient-kernel plus boundary-contour representation of C^(G) for x1 != x2. Slower; kept
// as an independent check of C_gauss.
FormValue C_gauss_contour_form(double x1, const TestFunction& f1, double x2,
                               const TestFunction& f2, const CovarianceSettings& s = {});

// (min x / max x) conj(d1) d2 with d = disk mean - circle mean.
FormValue C_four(double x1, const TestFunction& f1, double x2, const TestFunction& f2,
                 const CovarianceSettings& s = {});

// Disk mean minus circle mean of f at level x.
cplx mean_defect(double x, const TestFunction& f, const CovarianceSettings& s = {},
                 double* error = nullptr);

CovarianceValue C_beta(int beta, double kappa4, double x1, const TestFunction& f1, double x2,
                       const TestFunction& f2, const CovarianceSettings& s = {});

// Mesoscopic covariance of unscaled test functions at level offsets y1, y2.
FormValue C_meso(const MesoContext& mc, int beta, double y1, const TestFunction& f1, double y2,
                 const TestFunction& f2, const CovarianceSettings& s = {});

// Gradient-kernel representation of the mesoscopic form for y1 != y2.
FormValue C_meso_gradient_form(const MesoContext& mc, double y1, const TestFunction& f1,
                               double y2, const TestFunction& f2,
                               const CovarianceSettings& s = {});

}  // namespace nhminor
