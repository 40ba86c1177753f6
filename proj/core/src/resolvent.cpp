#include "nhminor/resolvent.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nhminor/errors.hpp"
#include "nhminor/mde.hpp"

namespace nhminor {

Hermitization::Hermitization(const Matrix& X, int k, cplx z, bool with_vectors)
    : k_(k), z_(z), with_vectors_(with_vectors) {
  if (X.rows() != X.cols()) throw std::invalid_argument("Hermitization needs a square matrix");
  if (k < 1 || k > X.rows()) throw std::invalid_argument("minor size must lie in [1, n]");
  Y_ = X.bottomRightCorner(k, k);
  Y_.diagonal().array() -= z;
  Matrix a = Y_;
  s_.resize(k);
  auto* pa = reinterpret_cast<lapack_complex_double*>(a.data());
  lapack_int info = 0;
  if (with_vectors) {
    U_.resize(k, k);
    Matrix vt(k, k);
    info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', k, k, pa, k, s_.data(),
                          reinterpret_cast<lapack_complex_double*>(U_.data()), k,
                          reinterpret_cast<lapack_complex_double*>(vt.data()), k);
    V_ = vt.adjoint();
  } else {
    info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', k, k, pa, k, s_.data(), nullptr, 1, nullptr, 1);
  }
  if (info != 0) throw EigenSolverFailure("zgesdd failed with info " + std::to_string(info));
}

Matrix Hermitization::matrix() const {
  Matrix H = Matrix::Zero(2 * k_, 2 * k_);
  H.topRightCorner(k_, k_) = Y_;
  H.bottomLeftCorner(k_, k_) = Y_.adjoint();
  return H;
}

Eigen::VectorXd Hermitization::spectrum() const {
  Eigen::VectorXd ev(2 * k_);
  ev << s_, -s_;
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

Observable parse_observable(const std::string& tag) {
  if (tag == "E+" || tag == "e_plus") return Observable::e_plus;
  if (tag == "E-" || tag == "e_minus") return Observable::e_minus;
  throw std::invalid_argument("unknown observable tag: " + tag);
}

std::string observable_tag(Observable b) { return b == Observable::e_plus ? "E+" : "E-"; }

ReducedMatrix observable_matrix(Observable b) {
  return b == Observable::e_plus ? e_plus() : e_minus();
}

cplx resolvent_trace(const Hermitization& h, cplx w) {
  if (w.imag() == 0.0) throw std::invalid_argument("resolvent needs Im w != 0");
  cplx acc = 0.0;
  for (int i = 0; i < h.k(); ++i) {
    const double s = h.singular_values()[i];
    acc += 2.0 * w / (s * s - w * w);
  }
  return acc / (2.0 * h.k());
}

cplx resolvent_trace(const Hermitization& h, cplx w, Observable b) {
  // both diagonal blocks have trace sum_i w / (s_i^2 - w^2), so <G E-> vanishes identically
  if (b == Observable::e_minus) return 0.0;
  return resolvent_trace(h, w);
}

namespace {

struct BlockFactors {
  Eigen::VectorXcd dw;  // w / (s^2 - w^2)
  Eigen::VectorXcd ds;  // s / (s^2 - w^2)
};

BlockFactors factors(const Eigen::VectorXd& s, cplx w) {
  BlockFactors f{Eigen::VectorXcd(s.size()), Eigen::VectorXcd(s.size())};
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const cplx den = s[i] * s[i] - w * w;
    f.dw[i] = w / den;
    f.ds[i] = s[i] / den;
  }
  return f;
}

// Resolvent blocks restricted to the given rows of U and V.
Matrix assemble(const Matrix& Ur, const Matrix& Vr, const BlockFactors& f) {
  const Eigen::Index m = Ur.rows();
  Matrix G(2 * m, 2 * m);
  G.topLeftCorner(m, m) = Ur * f.dw.asDiagonal() * Ur.adjoint();
  G.topRightCorner(m, m) = Ur * f.ds.asDiagonal() * Vr.adjoint();
  G.bottomLeftCorner(m, m) = Vr * f.ds.asDiagonal() * Ur.adjoint();
  G.bottomRightCorner(m, m) = Vr * f.dw.asDiagonal() * Vr.adjoint();
  return G;
}

void apply_observable(Matrix& G, Observable b) {
  if (b == Observable::e_plus) return;
  const Eigen::Index m = G.cols() / 2;
  G.rightCols(m) *= -1.0;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty sample");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
  return 0.5 * (upper + v[mid - 1]);
}

int common_size(const std::vector<Matrix>& samples) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  const int n = static_cast<int>(samples.front().rows());
  for (const auto& X : samples)
    if (X.rows() != n || X.cols() != n) throw std::invalid_argument("samples differ in size");
  return n;
}

}  // namespace

Matrix resolvent(const Hermitization& h, cplx w) {
  if (!h.has_vectors()) throw std::invalid_argument("resolvent needs singular vectors");
  if (w.imag() == 0.0) throw std::invalid_argument("resolvent needs Im w != 0");
  return assemble(h.U(), h.V(), factors(h.singular_values(), w));
}

std::vector<GirkoResult> girko_check(const Matrix& X, int k, const TestFunction& f,
                                     std::span<const double> T, const QuadratureSpec& grid) {
  if (T.empty()) throw std::invalid_argument("no cutoff T given");
  for (double t : T)
    if (!(t > 0.0)) throw std::invalid_argument("cutoff T must be positive");
  if (k < 1 || k > X.rows()) throw std::invalid_argument("minor size must lie in [1, n]");
  std::vector<GirkoResult> out(T.size());
  if (f.is_zero()) return out;
  cplx lhs = 0.0;
  for (const cplx& s : eigenvalues(X.bottomRightCorner(k, k))) lhs += f.value(s);

  const Eigen::Index nt = static_cast<Eigen::Index>(T.size());
  auto eval = [&](int level) {
    const auto nodes = polar_rule(f.support_center(), 0.0, f.support_radius(), {},
                                  grid.radial_nodes << level, grid.angular_nodes << level);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(nt);
    for (const auto& nd : nodes) {
      const cplx lap = f.laplacian(nd.z);
      if (lap == 0.0) continue;
      const Hermitization h(X, k, nd.z, false);
      for (Eigen::Index t = 0; t < nt; ++t) {
        const double T2 = T[t] * T[t];
        double logdet = 0.0, eta_integral = 0.0;
        for (Eigen::Index i = 0; i < h.singular_values().size(); ++i) {
          const double s2 = h.singular_values()[i] * h.singular_values()[i];
          logdet += std::log(s2 + T2);
          eta_integral += std::log((s2 + T2) / s2);
        }
        acc[t] += nd.weight * lap * (logdet - eta_integral);
      }
    }
    return Eigen::VectorXcd(acc / (4.0 * kPi));
  };
  const auto r = refine<Eigen::VectorXcd>(eval, grid, "girko_check");
  for (Eigen::Index t = 0; t < nt; ++t) {
    out[t].lhs = lhs;
    out[t].rhs = r.value[t];
    out[t].quadrature_error = r.error;
    out[t].gap = std::abs(lhs - r.value[t]);
  }
  return out;
}

GirkoResult girko_check(const Matrix& X, int k, const TestFunction& f, double T,
                        const QuadratureSpec& grid) {
  const double t[1] = {T};
  return girko_check(X, k, f, t, grid).front();
}

LocalLawRecord single_law_error(const std::vector<Matrix>& samples, int k, cplx z, double eta,
                                Observable B) {
  const int n = common_size(samples);
  if (!(eta >= 1.0 / n)) throw std::invalid_argument("eta must be at least 1/n");
  const cplx w(0.0, eta);
  const SpectralPoint p(static_cast<double>(k) / n, z, w);
  const MdeSolution sol = solve_m(p);
  const cplx det = reduced_trace(mde_matrix(p, sol) * observable_matrix(B));
  std::vector<double> err;
  err.reserve(samples.size());
  for (const auto& X : samples) {
    const Hermitization h(X, k, z, false);
    err.push_back(std::abs(resolvent_trace(h, w, B) - det));
  }
  LocalLawRecord rec;
  rec.n = n;
  rec.k1 = rec.k2 = k;
  rec.z1 = rec.z2 = z;
  rec.eta1 = rec.eta2 = eta;
  rec.B1 = rec.B2 = B;
  rec.lhs_error = median(std::move(err));
  rec.bound_reference = 1.0 / (n * eta);
  return rec;
}

cplx two_resolvent_trace(const Matrix& X, int k1, cplx z1, cplx w1, int k2, cplx z2, cplx w2,
                         Observable B1, Observable B2) {
  if (k1 > k2) throw std::invalid_argument("two-resolvent trace needs k1 <= k2");
  const Hermitization h1(X, k1, z1, true);
  const Hermitization h2(X, k2, z2, true);
  Matrix G1 = resolvent(h1, w1);
  Matrix G2 = assemble(h2.U().bottomRows(k1), h2.V().bottomRows(k1),
                       factors(h2.singular_values(), w2));
  apply_observable(G1, B1);
  apply_observable(G2, B2);
  return G1.cwiseProduct(G2.transpose()).sum() / (2.0 * k1);
}

LocalLawRecord two_law_error(const std::vector<Matrix>& samples, int k1, cplx z1, double eta1,
                             int k2, cplx z2, double eta2, Observable B1, Observable B2) {
  const int n = common_size(samples);
  if (k1 > k2) throw std::invalid_argument("two-resolvent law needs k1 <= k2");
  if (!(eta1 > 0.0 && eta2 > 0.0)) throw std::invalid_argument("etas must be positive");
  const cplx w1(0.0, eta1), w2(0.0, eta2);
  const PairPoint pp = PairPoint::make(SpectralPoint(static_cast<double>(k1) / n, z1, w1),
                                       SpectralPoint(static_cast<double>(k2) / n, z2, w2));
  const ReducedMatrix MB = two_resolvent_approx(pp, observable_matrix(B1));
  const cplx det = reduced_trace(MB * observable_matrix(B2));
  std::vector<double> err;
  err.reserve(samples.size());
  for (const auto& X : samples)
    err.push_back(std::abs(two_resolvent_trace(X, k1, z1, w1, k2, z2, w2, B1, B2) - det));
  LocalLawRecord rec;
  rec.n = n;
  rec.k1 = k1;
  rec.k2 = k2;
  rec.z1 = z1;
  rec.z2 = z2;
  rec.eta1 = eta1;
  rec.eta2 = eta2;
  rec.B1 = B1;
  rec.B2 = B2;
  rec.lhs_error = median(std::move(err));
  rec.bound_reference = 1.0 / (n * eta1 * eta2);
  return rec;
}

double fit_log_slope(const std::vector<double>& n, const std::vector<double>& error) {
  if (n.size() != error.size() || n.size() < 2)
    throw std::invalid_argument("slope fit needs at least two matching points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0 && error[i] > 0.0)) throw std::invalid_argument("slope fit needs positive data");
    const double x = std::log(n[i]), y = std::log(error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace nhminor
