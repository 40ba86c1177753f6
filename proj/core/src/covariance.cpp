#include "nhminor/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nhminor {

namespace {

struct WeightedField {
  std::vector<cplx> z;
  std::vector<cplx> w;
};

template <class Weight>
WeightedField weighted(const std::vector<PolarNode>& nodes, Weight&& weight) {
  WeightedField out;
  out.z.reserve(nodes.size());
  out.w.reserve(nodes.size());
  for (const auto& nd : nodes) {
    const cplx v = weight(nd.z);
    if (v == 0.0) continue;
    out.z.push_back(nd.z);
    out.w.push_back(nd.weight * v);
  }
  return out;
}

template <class Kernel>
cplx pair_sum(const WeightedField& a, const WeightedField& b, Kernel&& kernel) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.z.size(); ++i) {
    cplx row = 0.0;
    for (std::size_t j = 0; j < b.z.size(); ++j) row += b.w[j] * kernel(a.z[i], b.z[j]);
    acc += a.w[i] * row;
  }
  return acc;
}

void check_level(double x) {
  if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("level fraction must lie in (0, 1]");
}

void check_beta(int beta) {
  if (beta != 1 && beta != 2) throw std::invalid_argument("beta must be 1 or 2");
}

bool any_fd(const TestFunction& f1, const TestFunction& f2) {
  return f1.uses_finite_differences() || f2.uses_finite_differences();
}

// 2 (conj(df1) df2 + conj(dbar f1) dbar f2), the Euclidean gradient pairing.
cplx gradient_pairing(const TestFunction& f1, const TestFunction& f2, cplx z) {
  const Wirtinger a = f1.gradient(z), b = f2.gradient(z);
  return 2.0 * (std::conj(a.dz) * b.dz + std::conj(a.dzbar) * b.dzbar);
}

QuadResult<cplx> dirichlet_pairing(const TestFunction& f1, const TestFunction& f2, double x,
                                   bool inside_only, const QuadratureSpec& spec) {
  if (f1.is_zero() || f2.is_zero()) return {};
  auto eval = [&](int level) {
    const auto nodes = inside_only ? support_nodes(f1, x, spec.radial_nodes << level,
                                                   spec.angular_nodes << level, true)
                                   : polar_rule(f1.support_center(), 0.0, f1.support_radius(),
                                                {}, spec.radial_nodes << level,
                                                spec.angular_nodes << level);
    cplx acc = 0.0;
    for (const auto& nd : nodes) acc += nd.weight * gradient_pairing(f1, f2, nd.z);
    return acc / (4.0 * kPi);
  };
  return refine<cplx>(eval, spec, "gradient pairing");
}

}  // namespace

std::vector<PolarNode> support_nodes(const TestFunction& f, double x, int radial_nodes,
                                     int angular_nodes, bool inside_only) {
  if (f.is_zero()) return {};
  const cplx c = f.support_center();
  const double r = f.support_radius();
  const double R = std::sqrt(x);
  const double d = std::abs(c);
  if (d + r <= R) return polar_rule(c, 0.0, r, {}, radial_nodes, angular_nodes);
  if (d - r >= R) {
    if (inside_only) return {};
    return polar_rule(c, 0.0, r, {}, radial_nodes, angular_nodes);
  }
  const double r_lo = std::max(0.0, d - r);
  const double r_hi = inside_only ? R : d + r;
  const double br[1] = {R};
  if (d <= r) return polar_rule(0.0, r_lo, r_hi, br, radial_nodes, angular_nodes);
  const double half = std::asin(r / d);
  const double th = std::arg(c);
  return sector_rule(r_lo, r_hi, br, th - half, th + half, radial_nodes, angular_nodes);
}

FormValue C_gauss(double x1, const TestFunction& f1, double x2, const TestFunction& f2,
                  const CovarianceSettings& s) {
  check_level(x1);
  check_level(x2);
  if (x1 == x2) return C_gauss_equal_level(x1, f1, f2, s);
  FormValue out;
  out.finite_differences = any_fd(f1, f2);
  if (f1.is_zero() || f2.is_zero()) return out;
  auto eval = [&](int level) {
    const int nr = s.spec.radial_nodes << level, na = s.spec.angular_nodes << level;
    const auto a = weighted(support_nodes(f1, x1, nr, na),
                            [&](cplx z) { return std::conj(f1.laplacian(z)); });
    const auto b = weighted(support_nodes(f2, x2, nr, na), [&](cplx z) { return f2.laplacian(z); });
    const cplx v = pair_sum(a, b, [&](cplx z1, cplx z2) {
      return kernel_Theta(LevelPair{x1, z1, x2, z2});
    });
    return v / (8.0 * kPi * kPi);
  };
  const auto r = refine<cplx>(eval, s.spec, "C_gauss");
  out.value = r.value;
  out.error = r.error;
  return out;
}

FormValue C_gauss_equal_level(double x, const TestFunction& f1, const TestFunction& f2,
                              const CovarianceSettings& s) {
  check_level(x);
  FormValue out;
  out.finite_differences = any_fd(f1, f2);
  if (f1.is_zero() || f2.is_zero()) return out;
  const auto interior = dirichlet_pairing(f1, f2, x, true, s.spec);

  const double R = std::sqrt(x);
  auto boundary = [&](int nodes, bool& truncated) {
    const auto a1 = fourier_coefficients([&](double t) { return f1.value(std::polar(R, t)); },
                                         s.kmax, nodes);
    const auto a2 = fourier_coefficients([&](double t) { return f2.value(std::polar(R, t)); },
                                         s.kmax, nodes);
    cplx acc = 0.0;
    double tail = 0.0;
    for (int k = -s.kmax; k <= s.kmax; ++k) {
      const cplx c1 = a1[k + s.kmax], c2 = a2[k + s.kmax];
      acc += static_cast<double>(std::abs(k)) * std::conj(c1) * c2;
      if (2 * std::abs(k) > s.kmax) tail += std::abs(k) * (std::norm(c1) + std::norm(c2));
    }
    truncated = tail > s.fourier_tail;
    return 0.5 * acc;
  };
  bool trunc_coarse = false, trunc_fine = false;
  const cplx b0 = boundary(s.fourier_nodes, trunc_coarse);
  const cplx b1 = boundary(2 * s.fourier_nodes, trunc_fine);
  out.fourier_truncated = trunc_fine;
  out.value = interior.value + b1;
  out.error = interior.error + std::abs(b1 - b0);
  return out;
}

FormValue C_gauss_contour_form(double x1, const TestFunction& f1, double x2,
                               const TestFunction& f2, const CovarianceSettings& s) {
  check_level(x1);
  check_level(x2);
  if (x1 == x2) throw std::invalid_argument("contour form needs distinct levels");
  FormValue out;
  out.finite_differences = any_fd(f1, f2);
  if (f1.is_zero() || f2.is_zero()) return out;
  const double dx = std::abs(x1 - x2);
  const double xm = std::min(x1, x2);
  const double R1 = std::sqrt(x1), R2 = std::sqrt(x2);

  // d_{z1} d_{zbar2} log K
  auto kernel = [&](cplx z1, cplx z2) -> cplx {
    const double K = kernel_K(LevelPair{x1, z1, x2, z2});
    cplx d1K, d2K;
    if (x1 < x2) {
      d1K = std::conj(z1 - z2);
      d2K = -(z1 - z2) - dx * z2 / x2;
    } else {
      d1K = std::conj(z1 - z2) - dx * std::conj(z1) / x1;
      d2K = -(z1 - z2);
    }
    return -1.0 / K - d1K * d2K / (K * K);
  };

  auto eval = [&](int level) {
    const int nr = s.spec.radial_nodes << level, na = s.spec.angular_nodes << level;
    const auto a = weighted(support_nodes(f1, x1, nr, na, true),
                            [&](cplx z) { return std::conj(f1.gradient(z).dz); });
    const auto b = weighted(support_nodes(f2, x2, nr, na, true),
                            [&](cplx z) { return f2.gradient(z).dz; });
    const cplx area = -pair_sum(a, b, kernel) / (kPi * kPi);

    // circles parametrized counterclockwise: dz1 ^ dzbar2 = z1 conj(z2) dtheta1 dtheta2
    const int nc = 4 * na;
    std::vector<cplx> c1(nc), c2(nc), p1(nc), p2(nc);
    for (int j = 0; j < nc; ++j) {
      const double t = 2.0 * kPi * j / nc;
      p1[j] = std::polar(R1, t);
      p2[j] = std::polar(R2, t);
      c1[j] = std::conj(f1.value(p1[j])) * p1[j];
      c2[j] = f2.value(p2[j]) * std::conj(p2[j]);
    }
    cplx ring = 0.0;
    for (int i = 0; i < nc; ++i) {
      if (c1[i] == 0.0) continue;
      cplx row = 0.0;
      for (int j = 0; j < nc; ++j) {
        if (c2[j] == 0.0) continue;
        const cplx den = xm - p1[i] * std::conj(p2[j]);
        row += c2[j] / (den * den);
      }
      ring += c1[i] * row;
    }
    const double dth = 2.0 * kPi / nc;
    ring *= dth * dth * xm / (4.0 * kPi * kPi);
    return area + ring;
  };
  const auto r = refine<cplx>(eval, s.spec, "C_gauss_contour_form");
  out.value = r.value;
  out.error = r.error;
  return out;
}

cplx mean_defect(double x, const TestFunction& f, const CovarianceSettings& s, double* error) {
  check_level(x);
  if (f.is_zero()) {
    if (error) *error = 0.0;
    return 0.0;
  }
  const double R = std::sqrt(x);
  auto disk = refine<cplx>(
      [&](int level) {
        cplx acc = 0.0;
        for (const auto& nd : support_nodes(f, x, s.spec.radial_nodes << level,
                                            s.spec.angular_nodes << level, true))
          acc += nd.weight * f.value(nd.z);
        return acc / (kPi * x);
      },
      s.spec, "disk mean");
  QuadratureSpec cs = s.spec;
  cs.angular_nodes = s.fourier_nodes;
  auto circle = integrate_circle([&](double t) { return f.value(std::polar(R, t)); }, R, cs);
  if (error) *error = disk.error + circle.error / (2.0 * kPi * R);
  return disk.value - circle.value / (2.0 * kPi * R);
}

namespace {

FormValue half_sum(const FormValue& a, const FormValue& b) {
  FormValue out;
  out.value = 0.5 * (a.value + b.value);
  out.error = 0.5 * (a.error + b.error);
  out.finite_differences = a.finite_differences || b.finite_differences;
  out.fourier_truncated = a.fourier_truncated || b.fourier_truncated;
  return out;
}

}  // namespace

FormValue C_four(double x1, const TestFunction& f1, double x2, const TestFunction& f2,
                 const CovarianceSettings& s) {
  FormValue out;
  out.finite_differences = any_fd(f1, f2);
  double e1 = 0.0, e2 = 0.0;
  const cplx d1 = mean_defect(x1, f1, s, &e1);
  const cplx d2 = mean_defect(x2, f2, s, &e2);
  const double ratio = std::min(x1, x2) / std::max(x1, x2);
  out.value = ratio * std::conj(d1) * d2;
  out.error = ratio * (e1 * std::abs(d2) + e2 * std::abs(d1) + e1 * e2);
  return out;
}

CovarianceValue C_beta(int beta, double kappa4, double x1, const TestFunction& f1, double x2,
                       const TestFunction& f2, const CovarianceSettings& s) {
  check_beta(beta);
  CovarianceValue out;
  out.beta = beta;
  out.kappa4 = kappa4;
  FormValue g = C_gauss(x1, f1, x2, f2, s);
  if (beta == 1) {
    // the form is invariant under conjugating both arguments, so the symmetrized pairing
    // needs only one extra term
    const FormValue h = C_gauss(x1, f1, x2, conjugate_argument(f2), s);
    g = half_sum(g, h);
  }
  const FormValue c4 = C_four(x1, f1, x2, f2, s);
  out.gaussian_part = g.value;
  out.kappa4_part = c4.value;
  const double mult = beta == 2 ? 1.0 : 2.0;
  out.total = mult * g.value + kappa4 * c4.value;
  out.error = mult * g.error + std::abs(kappa4) * c4.error;
  out.finite_differences = g.finite_differences || c4.finite_differences;
  out.fourier_truncated = g.fourier_truncated;
  return out;
}

FormValue C_meso(const MesoContext& mc, int beta, double y1, const TestFunction& f1, double y2,
                 const TestFunction& f2, const CovarianceSettings& s) {
  mc.validate();
  check_beta(beta);
  if (beta == 1) {
    FormValue v = half_sum(C_meso(mc, 2, y1, f1, y2, f2, s),
                           C_meso(mc, 2, y1, f1, y2, conjugate_argument(f2), s));
    v.value *= 2.0;
    v.error *= 2.0;
    return v;
  }
  FormValue out;
  out.finite_differences = any_fd(f1, f2);
  if (f1.is_zero() || f2.is_zero()) return out;
  if (y1 == y2) {
    const auto r = dirichlet_pairing(f1, f2, 1.0, false, s.spec);
    out.value = r.value;
    out.error = r.error;
    return out;
  }
  const double c = std::abs(y1 - y2) * mc.factor();
  auto eval = [&](int level) {
    const int nr = s.spec.radial_nodes << level, na = s.spec.angular_nodes << level;
    const auto a = weighted(polar_rule(f1.support_center(), 0.0, f1.support_radius(), {}, nr, na),
                            [&](cplx z) { return std::conj(f1.laplacian(z)); });
    const auto b = weighted(polar_rule(f2.support_center(), 0.0, f2.support_radius(), {}, nr, na),
                            [&](cplx z) { return f2.laplacian(z); });
    const cplx v = pair_sum(a, b, [&](cplx z1, cplx z2) {
      return -0.5 * std::log(abs2(z1 - z2) + c);
    });
    return v / (8.0 * kPi * kPi);
  };
  const auto r = refine<cplx>(eval, s.spec, "C_meso");
  out.value = r.value;
  out.error = r.error;
  return out;
}

FormValue C_meso_gradient_form(const MesoContext& mc, double y1, const TestFunction& f1,
                               double y2, const TestFunction& f2, const CovarianceSettings& s) {
  mc.validate();
  if (y1 == y2) throw std::invalid_argument("gradient form needs distinct level offsets");
  FormValue out;
  out.finite_differences = any_fd(f1, f2);
  if (f1.is_zero() || f2.is_zero()) return out;
  const double c = std::abs(y1 - y2) * mc.factor();
  auto eval = [&](int level) {
    const int nr = s.spec.radial_nodes << level, na = s.spec.angular_nodes << level;
    const auto a = weighted(polar_rule(f1.support_center(), 0.0, f1.support_radius(), {}, nr, na),
                            [&](cplx z) { return std::conj(f1.gradient(z).dz); });
    const auto b = weighted(polar_rule(f2.support_center(), 0.0, f2.support_radius(), {}, nr, na),
                            [&](cplx z) { return f2.gradient(z).dz; });
    const cplx v = pair_sum(a, b, [&](cplx z1, cplx z2) {
      const double K = abs2(z1 - z2) + c;
      return c / (K * K);
    });
    return v / (kPi * kPi);
  };
  const auto r = refine<cplx>(eval, s.spec, "C_meso_gradient_form");
  out.value = r.value;
  out.error = r.error;
  return out;
}

}  // namespace nhminor
