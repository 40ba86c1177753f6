#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nhminor/test_function.hpp"
#include "nhminor/types.hpp"

namespace nhminor {

enum class LawName { gaussian, four_phase, rademacher, uniform };

struct EntryLaw {
  int beta = 2;
  LawName name = LawName::gaussian;

  // Throws std::invalid_argument for unknown names and for combinations that break
  // E chi^2 = 0 when beta == 2 (rademacher) or are not real when beta == 1 (four_phase).
  static EntryLaw make(std::string_view name, int beta);

  // E|chi|^4 - 1 - 2/beta.
  double kappa4() const;
  std::string label() const;
};

using Matrix = Eigen::MatrixXcd;

// n x n matrix with i.i.d. entries chi / sqrt(n); real laws give zero imaginary parts.
Matrix sample_matrix(int n, const EntryLaw& law, std::uint64_t seed);

struct MinorSample {
  int n = 0;
  std::vector<int> levels;
  std::vector<std::vector<cplx>> eigenvalues;  // one list per level, in solver order
  std::uint64_t seed = 0;
};

// Eigenvalues of the bottom-right k x k blocks. Real input (all imaginary parts zero)
// goes through the real solver so complex eigenvalues come in exact conjugate pairs.
// Throws EigenSolverFailure if the QR iteration does not converge.
MinorSample minor_eigenvalues(const Matrix& X, const std::vector<int>& levels);

// Eigenvalues of a general square matrix.
std::vector<cplx> eigenvalues(const Matrix& A);

// sum_i f(sigma_i) over the level-k eigenvalues.
cplx linear_statistic(const MinorSample& ms, int k, const TestFunction& f);

struct StatisticRequest {
  int level;
  TestFunction f;
};

struct SimulationPlan {
  int n = 0;
  EntryLaw law;
  std::uint64_t master_seed = 0;
  int replicas = 0;
  std::vector<StatisticRequest> statistics;
  int workers = 1;
  int max_attempts = 8;  // resampling budget per replica after solver failures

  void validate() const;
};

struct SimulationResult {
  // values[s][r] is statistic s of replica r.
  std::vector<std::vector<cplx>> values;
  int resampled = 0;  // replicas that needed a fresh stream after a solver failure
};

// Runs plan.replicas independent replicas on plan.workers threads. Results depend only
// on the plan, never on the worker count.
SimulationResult run_replicas(const SimulationPlan& plan);

}  // namespace nhminor
