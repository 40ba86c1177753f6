#include "nhminor/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nhminor {

void QuadratureSpec::validate() const {
  if (radial_nodes < 8 || angular_nodes < 8 || eta_nodes < 8)
    throw std::invalid_argument("quadrature node counts must be at least 8");
  if (!(tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (max_refinements < 0) throw std::invalid_argument("max_refinements must be nonnegative");
}

QuadratureSpec QuadratureSpec::doubled(int times) const {
  QuadratureSpec s = *this;
  s.radial_nodes <<= times;
  s.angular_nodes <<= times;
  s.eta_nodes <<= times;
  return s;
}

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

std::vector<PolarNode> polar_rule(cplx center, double r_in, double r_out,
                                  std::span<const double> breakpoints, int radial_nodes,
                                  int angular_nodes) {
  std::vector<double> edges{r_in};
  for (double b : breakpoints)
    if (b > r_in && b < r_out) edges.push_back(b);
  edges.push_back(r_out);
  std::sort(edges.begin(), edges.end());

  std::vector<double> cs(angular_nodes), sn(angular_nodes);
  for (int j = 0; j < angular_nodes; ++j) {
    double th = 2.0 * kPi * j / angular_nodes;
    cs[j] = std::cos(th);
    sn[j] = std::sin(th);
  }
  const double dth = 2.0 * kPi / angular_nodes;

  std::vector<PolarNode> out;
  out.reserve((edges.size() - 1) * radial_nodes * angular_nodes);
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    if (edges[e + 1] - edges[e] <= 0.0) continue;
    GaussRule g = gauss_legendre(radial_nodes, edges[e], edges[e + 1]);
    for (int i = 0; i < radial_nodes; ++i) {
      double r = g.nodes[i];
      double wr = g.weights[i] * r * dth;
      for (int j = 0; j < angular_nodes; ++j)
        out.push_back({center + cplx(r * cs[j], r * sn[j]), wr});
    }
  }
  return out;
}

std::vector<PolarNode> sector_rule(double r_lo, double r_hi, std::span<const double> breakpoints,
                                   double th_lo, double th_hi, int radial_nodes,
                                   int angular_nodes) {
  std::vector<double> edges{r_lo};
  for (double b : breakpoints)
    if (b > r_lo && b < r_hi) edges.push_back(b);
  edges.push_back(r_hi);
  std::sort(edges.begin(), edges.end());

  const GaussRule ang = gauss_legendre(angular_nodes, th_lo, th_hi);
  std::vector<PolarNode> out;
  out.reserve((edges.size() - 1) * radial_nodes * angular_nodes);
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    if (edges[e + 1] - edges[e] <= 0.0) continue;
    const GaussRule g = gauss_legendre(radial_nodes, edges[e], edges[e + 1]);
    for (int i = 0; i < radial_nodes; ++i) {
      const double r = g.nodes[i];
      for (int j = 0; j < angular_nodes; ++j)
        out.push_back({std::polar(r, ang.nodes[j]), g.weights[i] * r * ang.weights[j]});
    }
  }
  return out;
}

QuadResult<cplx> integrate_disk(const std::function<cplx(cplx)>& f, cplx center, double radius,
                                const QuadratureSpec& spec) {
  auto eval = [&](int level) {
    QuadratureSpec s = spec.doubled(level);
    auto nodes = polar_rule(center, 0.0, radius, {}, s.radial_nodes, s.angular_nodes);
    cplx acc = 0.0;
    for (const auto& nd : nodes) acc += nd.weight * f(nd.z);
    return acc;
  };
  return refine<cplx>(eval, spec, "integrate_disk");
}

QuadResult<cplx> integrate_circle(const std::function<cplx(double)>& f, double radius,
                                  const QuadratureSpec& spec) {
  auto eval = [&](int level) {
    int n = spec.angular_nodes << level;
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) acc += f(2.0 * kPi * j / n);
    return acc * (2.0 * kPi * radius / n);
  };
  return refine<cplx>(eval, spec, "integrate_circle");
}

std::vector<cplx> fourier_coefficients(const std::function<cplx(double)>& f, int kmax,
                                       int nodes) {
  if (kmax < 0 || nodes < 1) throw std::invalid_argument("fourier_coefficients: bad sizes");
  std::vector<cplx> samples(nodes);
  for (int j = 0; j < nodes; ++j) samples[j] = f(2.0 * kPi * j / nodes);
  std::vector<cplx> out(2 * kmax + 1);
  for (int k = -kmax; k <= kmax; ++k) {
    cplx acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
      // reduce k*j mod nodes so the phase stays accurate for large k
      long long kj = (static_cast<long long>(k) * j) % nodes;
      double th = -2.0 * kPi * static_cast<double>(kj) / nodes;
      acc += samples[j] * cplx(std::cos(th), std::sin(th));
    }
    out[k + kmax] = acc / static_cast<double>(nodes);
  }
  return out;
}

EtaRule eta_rule(int n) {
  GaussRule g = gauss_legendre(n, 0.0, 1.0);
  EtaRule r;
  r.eta.resize(n);
  r.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = g.nodes[i];
    double s = 1.0 - t;
    r.eta[i] = t / s;
    r.weight[i] = g.weights[i] / (s * s);
  }
  return r;
}

QuadResult<double> integrate_eta_axis(const std::function<double(double)>& f,
                                      const QuadratureSpec& spec) {
  auto eval = [&](int level) {
    EtaRule r = eta_rule(spec.eta_nodes << level);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.eta.size(); ++i) acc += r.weight[i] * f(r.eta[i]);
    return acc;
  };
  return refine<double>(eval, spec, "integrate_eta_axis");
}

}  // namespace nhminor
