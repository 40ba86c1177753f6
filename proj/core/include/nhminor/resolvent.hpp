#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "nhminor/quadrature.hpp"
#include "nhminor/simulator.hpp"
#include "nhminor/stability.hpp"
#include "nhminor/test_function.hpp"

namespace nhminor {

// H = [[0, Y], [Y^*, 0]] with Y = X^(k) - z, the bottom-right k x k block of X shifted by z.
// The spectral data is the SVD Y = U diag(s) V^* (LAPACK zgesdd), which gives the eigenpairs of H as
// (+-s, (u, +-v)/sqrt 2).
class Hermitization {
 public:
  Hermitization(const Matrix& X, int k, cplx z, bool with_vectors = true);

  int k() const { return k_; }
  cplx z() const { return z_; }
  bool has_vectors() const { return with_vectors_; }
  const Eigen::VectorXd& singular_values() const { return s_; }
  const Matrix& U() const { return U_; }
  const Matrix& V() const { return V_; }

  // The dense 2k x 2k matrix.
  Matrix matrix() const;
  // Eigenvalues of H: +-s_i.
  Eigen::VectorXd spectrum() const;

 private:
  int k_;
  cplx z_;
  bool with_vectors_;
  Matrix Y_;
  Eigen::VectorXd s_;
  Matrix U_, V_;
};

enum class Observable { e_plus, e_minus };

Observable parse_observable(const std::string& tag);
std::string observable_tag(Observable b);
ReducedMatrix observable_matrix(Observable b);

// <G(w)> = (1/2k) sum_i 2w / (s_i^2 - w^2).
cplx resolvent_trace(const Hermitization& h, cplx w);

// <G(w) B> for a block-constant observable.
cplx resolvent_trace(const Hermitization& h, cplx w, Observable b);

// Dense G(w) = (H - w)^{-1} assembled from the SVD; needs vectors.
Matrix resolvent(const Hermitization& h, cplx w);

struct GirkoResult {
  cplx lhs;
  cplx rhs;
  double gap = 0.0;
  double quadrature_error = 0.0;
};

// Compares sum f(sigma_i) over the level-k eigenvalues with the log-determinant plus
// eta-integral of <G(i eta)> over (0, T), integrated against Lap f on supp f.
GirkoResult girko_check(const Matrix& X, int k, const TestFunction& f, double T,
                        const QuadratureSpec& grid);

// Several cutoffs sharing one singular value decomposition per quadrature node. The
// refinement criterion applies to all cutoffs at once.
std::vector<GirkoResult> girko_check(const Matrix& X, int k, const TestFunction& f,
                                     std::span<const double> T, const QuadratureSpec& grid);

struct LocalLawRecord {
  int n = 0;
  int k1 = 0;
  int k2 = 0;
  cplx z1;
  cplx z2;
  double eta1 = 0.0;
  double eta2 = 0.0;
  Observable B1 = Observable::e_plus;
  Observable B2 = Observable::e_plus;
  double lhs_error = 0.0;
  double bound_reference = 0.0;
};

// Median over samples of |<(G - M) B>| at w = i eta; all samples must share their size n.
LocalLawRecord single_law_error(const std::vector<Matrix>& samples, int k, cplx z, double eta,
                                Observable B);

// Median over samples of |<G1 B1 G2~ B2> - <M^{B1} B2>| with G2~ the restriction of
// the level-k2 resolvent to the indices of the level-k1 minor (k1 <= k2).
LocalLawRecord two_law_error(const std::vector<Matrix>& samples, int k1, cplx z1, double eta1,
                             int k2, cplx z2, double eta2, Observable B1, Observable B2);

// The single-sample value <G1 B1 G2~ B2>.
cplx two_resolvent_trace(const Matrix& X, int k1, cplx z1, cplx w1, int k2, cplx z2, cplx w2,
                         Observable B1, Observable B2);

// Least-squares slope of log(error) against log(n).
double fit_log_slope(const std::vector<double>& n, const std::vector<double>& error);

}  // namespace nhminor
