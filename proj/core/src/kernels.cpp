#include "nhminor/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace nhminor {

void MesoContext::validate() const {
  if (!(x0 > 0.0 && x0 <= 1.0)) throw std::invalid_argument("meso x0 must lie in (0, 1]");
  if (!(abs2(z0) < x0)) throw std::invalid_argument("meso z0 must lie inside the disk of radius sqrt(x0)");
  if (!(a > 0.0 && a < 0.5)) throw std::invalid_argument("meso exponent must lie in (0, 1/2)");
}

double kernel_K(const LevelPair& lp) {
  const double dx = std::abs(lp.x1 - lp.x2);
  const double b = lp.x1 >= lp.x2 ? 1.0 - abs2(lp.z1) / lp.x1 : 1.0 - abs2(lp.z2) / lp.x2;
  return abs2(lp.z1 - lp.z2) + dx * b;
}

double kernel_Theta(const LevelPair& in) {
  LevelPair lp = in;
  if (lp.x1 > lp.x2) {
    std::swap(lp.x1, lp.x2);
    std::swap(lp.z1, lp.z2);
  }
  const double x1 = lp.x1, x2 = lp.x2;
  const cplx z1 = lp.z1, z2 = lp.z2;
  const bool in1 = abs2(z1) <= x1;
  const bool in2 = abs2(z2) <= x2;
  if (in1 && in2) return 0.5 * std::log(x2 / kernel_K(lp));
  if (!in1 && in2) return 0.5 * std::log(abs2(z1) * x2 * x2 / abs2(x2 * z1 - x1 * z2));
  if (in1 && !in2) return 0.5 * std::log(abs2(z2) / abs2(z1 - z2));
  return 0.5 * std::log(abs2(z1 * z2) / abs2(x1 - z1 * std::conj(z2)));
}

cplx log_argument(const PairPoint& pp) {
  const double x = pp.x_lo();
  const cplx zz = pp.p1.z() * std::conj(pp.p2.z());
  const cplx uu = pp.s1.u * pp.s2.u;
  const cplx mm = pp.s1.m * pp.s2.m;
  return 1.0 + x * x * uu * uu * abs2(zz) - x * x * mm * mm - 2.0 * x * uu * zz.real();
}

EtaSample EtaSample::at(double x, cplx z, double eta, const MdeTolerances& tol) {
  const SpectralPoint p = SpectralPoint::on_axis(x, z, eta);
  const MdeSolution s = solve_m(p, tol);
  return EtaSample{x, z, eta, s.m, m_eta_derivative(p, s, tol), s.u, u_eta_derivative(p, s)};
}

double V12_from_samples(const EtaSample& a, const EtaSample& b, double x) {
  const cplx zz = a.z * std::conj(b.z);
  const double c = abs2(zz);
  const double r = zz.real();
  const cplx U = a.u * b.u;
  const cplx P = a.m * b.m;
  const double x2 = x * x;
  const cplx D = 1.0 + x2 * c * U * U - x2 * P * P - 2.0 * x * r * U;
  const cplx D1 = 2.0 * x2 * c * U * a.du * b.u - 2.0 * x2 * P * a.dm * b.m - 2.0 * x * r * a.du * b.u;
  const cplx D2 = 2.0 * x2 * c * U * a.u * b.du - 2.0 * x2 * P * a.m * b.dm - 2.0 * x * r * a.u * b.du;
  const cplx D12 = 4.0 * x2 * c * a.u * a.du * b.u * b.du - 4.0 * x2 * a.m * a.dm * b.m * b.dm -
                   2.0 * x * r * a.du * b.du;
  return (0.5 * (D12 * D - D1 * D2) / (D * D)).real();
}

namespace {
double v12_at(const PairPoint& pp, bool conjugate) {
  const cplx z2 = conjugate ? std::conj(pp.p2.z()) : pp.p2.z();
  const EtaSample a{pp.p1.x(), pp.p1.z(), pp.p1.eta(), pp.s1.m,
                    m_eta_derivative(pp.p1, pp.s1), pp.s1.u, u_eta_derivative(pp.p1, pp.s1)};
  // the MDE solution depends on |z| only, so s2 is valid for conj(z2) as well
  const EtaSample b{pp.p2.x(), z2, pp.p2.eta(), pp.s2.m,
                    m_eta_derivative(pp.p2, pp.s2), pp.s2.u, u_eta_derivative(pp.p2, pp.s2)};
  return V12_from_samples(a, b, pp.x_lo());
}

void require_axis(const PairPoint& pp) {
  if (pp.p1.w().real() != 0.0 || pp.p2.w().real() != 0.0 || pp.p1.w().imag() <= 0.0 ||
      pp.p2.w().imag() <= 0.0)
    throw std::invalid_argument("V12 needs w on the positive imaginary axis");
}
}  // namespace

double V12(const PairPoint& pp) {
  require_axis(pp);
  return v12_at(pp, false);
}

double V12_conj(const PairPoint& pp) {
  require_axis(pp);
  return v12_at(pp, true);
}

cplx U(const SpectralPoint& p, const MdeTolerances& tol) {
  if (p.w().real() != 0.0 || p.w().imag() <= 0.0)
    throw std::invalid_argument("U needs w on the positive imaginary axis");
  const MdeSolution s = solve_m(p, tol);
  const cplx dm = m_eta_derivative(p, s, tol);
  return kI / std::sqrt(2.0) * 2.0 * s.m * dm;
}

double kernel_K_meso(const MesoContext& mc, double y1, double y2, cplx z1, cplx z2) {
  mc.validate();
  return abs2(z1 - z2) + std::abs(y1 - y2) * mc.factor();
}

QuadResult<double> integrate_V12(const LevelPair& lp, const QuadratureSpec& spec, bool conjugate) {
  const double x_lo = std::min(lp.x1, lp.x2);
  const cplx z2 = conjugate ? std::conj(lp.z2) : lp.z2;
  auto eval = [&](int level) {
    const EtaRule rule = eta_rule(spec.eta_nodes << level);
    const std::size_t n = rule.eta.size();
    std::vector<EtaSample> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = EtaSample::at(lp.x1, lp.z1, rule.eta[i]);
      b[i] = EtaSample::at(lp.x2, lp.z2, rule.eta[i]);
      b[i].z = z2;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += rule.weight[j] * V12_from_samples(a[i], b[j], x_lo);
      acc += rule.weight[i] * row;
    }
    return acc;
  };
  return refine<double>(eval, spec, "integrate_V12");
}

}  // namespace nhminor
