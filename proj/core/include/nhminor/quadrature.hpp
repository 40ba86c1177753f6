#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nhminor/types.hpp"

namespace nhminor {

struct QuadratureSpec {
  int radial_nodes = 128;
  int angular_nodes = 256;
  int eta_nodes = 128;
  double tolerance = 1e-10;  // absolute bound on |last - previous|
  int max_refinements = 1;   // number of node doublings allowed

  void validate() const;
  // Same spec with every node count multiplied by 2^times.
  QuadratureSpec doubled(int times) const;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;  // |last - previous| of the doubling sequence
  int refinements = 0;
};

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule with n points on [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

struct PolarNode {
  cplx z;
  double weight;
};

// Product rule on the annulus r_in <= |z - center| <= r_out. Each radial
// sub-interval between consecutive breakpoints gets its own Gauss-Legendre rule.
std::vector<PolarNode> polar_rule(cplx center, double r_in, double r_out,
                                  std::span<const double> breakpoints, int radial_nodes,
                                  int angular_nodes);

// Gauss-Legendre in both radius and angle on the origin-centered sector
// r_lo <= |z| <= r_hi, th_lo <= arg z <= th_hi, split radially at the breakpoints.
std::vector<PolarNode> sector_rule(double r_lo, double r_hi, std::span<const double> breakpoints,
                                   double th_lo, double th_hi, int radial_nodes,
                                   int angular_nodes);

QuadResult<cplx> integrate_disk(const std::function<cplx(cplx)>& f, cplx center, double radius,
                                const QuadratureSpec& spec);

// Arc-length integral over the circle of the given radius: f receives the angle,
// so f == 1 gives 2*pi*radius.
QuadResult<cplx> integrate_circle(const std::function<cplx(double)>& f, double radius,
                                  const QuadratureSpec& spec);

// a_k = (1/2pi) sum over equispaced angles of f(theta) e^{-ik theta}, k = -kmax..kmax,
// stored at index k + kmax.
std::vector<cplx> fourier_coefficients(const std::function<cplx(double)>& f, int kmax,
                                       int nodes);

struct EtaRule {
  std::vector<double> eta;
  std::vector<double> weight;
};

// Nodes and weights for integrals over (0, inf) after eta = t / (1 - t).
EtaRule eta_rule(int n);

QuadResult<double> integrate_eta_axis(const std::function<double(double)>& f,
                                      const QuadratureSpec& spec);

// Runs eval(level) for level = 0, 1, ... until two successive levels differ by at
// most tolerance or max_refinements doublings are spent.
template <class T, class Eval>
QuadResult<T> refine(Eval&& eval, const QuadratureSpec& spec, const std::string& what);

}  // namespace nhminor

#include "nhminor/detail/refine.hpp"
