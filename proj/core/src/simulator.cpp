#include "nhminor/simulator.hpp"

#include <lapacke.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "nhminor/errors.hpp"
#include "nhminor/rng.hpp"

namespace nhminor {

EntryLaw EntryLaw::make(std::string_view name, int beta) {
  if (beta != 1 && beta != 2) throw std::invalid_argument("beta must be 1 or 2");
  EntryLaw law;
  law.beta = beta;
  if (name == "gaussian") {
    law.name = LawName::gaussian;
  } else if (name == "four_phase") {
    if (beta != 2) throw std::invalid_argument("four_phase entries are complex; use beta = 2");
    law.name = LawName::four_phase;
  } else if (name == "rademacher") {
    if (beta != 1) throw std::invalid_argument("rademacher entries have E chi^2 = 1; use beta = 1");
    law.name = LawName::rademacher;
  } else if (name == "uniform") {
    law.name = LawName::uniform;
  } else {
    throw std::invalid_argument("unknown entry law: " + std::string(name));
  }
  return law;
}

double EntryLaw::kappa4() const {
  // E|chi|^4 for each law
  double m4 = 0.0;
  switch (name) {
    case LawName::gaussian: m4 = beta == 2 ? 2.0 : 3.0; break;
    case LawName::four_phase: m4 = 1.0; break;
    case LawName::rademacher: m4 = 1.0; break;
    case LawName::uniform: m4 = beta == 2 ? 4.0 / 3.0 : 9.0 / 5.0; break;
  }
  return m4 - 1.0 - 2.0 / beta;
}

std::string EntryLaw::label() const {
  switch (name) {
    case LawName::gaussian: return "gaussian";
    case LawName::four_phase: return "four_phase";
    case LawName::rademacher: return "rademacher";
    case LawName::uniform: return "uniform";
  }
  return "unknown";
}

namespace {

// One normalized entry. "uniform" means the disk of radius sqrt 2 (beta = 2) or
// the interval [-sqrt 3, sqrt 3] (beta = 1).
template <class Rng>
cplx draw(const EntryLaw& law, Rng& rng, std::normal_distribution<double>& normal,
          std::uniform_real_distribution<double>& unit) {
  if (law.beta == 1) {
    switch (law.name) {
      case LawName::gaussian: return normal(rng);
      case LawName::rademacher: return unit(rng) < 0.5 ? 1.0 : -1.0;
      case LawName::uniform: return std::sqrt(3.0) * (2.0 * unit(rng) - 1.0);
      default: break;
    }
  } else {
    switch (law.name) {
      case LawName::gaussian: {
        const double a = normal(rng), b = normal(rng);
        return cplx(a, b) / std::sqrt(2.0);
      }
      case LawName::four_phase: {
        static const cplx phases[4] = {1.0, kI, -1.0, -kI};
        return phases[std::min(3, static_cast<int>(4.0 * unit(rng)))];
      }
      case LawName::uniform: {
        const double r = std::sqrt(2.0 * unit(rng));
        return std::polar(r, 2.0 * kPi * unit(rng));
      }
      default: break;
    }
  }
  throw std::invalid_argument("entry law not available for this beta");
}

}  // namespace

Matrix sample_matrix(int n, const EntryLaw& law, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("matrix dimension must be at least 2");
  Engine rng = engine_from_seed(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix X(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = scale * draw(law, rng, normal, unit);
  return X;
}

std::vector<cplx> eigenvalues(const Matrix& A) {
  const int k = static_cast<int>(A.rows());
  if (A.cols() != k) throw std::invalid_argument("eigenvalues needs a square matrix");
  std::vector<cplx> out(k);
  if (k == 0) return out;
  if (A.imag().isZero(0.0)) {
    Eigen::MatrixXd a = A.real();
    std::vector<double> wr(k), wi(k);
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', k, a.data(), k, wr.data(),
                                          wi.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw EigenSolverFailure("dgeev failed with info " + std::to_string(info));
    for (int i = 0; i < k; ++i) out[i] = cplx(wr[i], wi[i]);
  } else {
    Matrix a = A;
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', k, reinterpret_cast<lapack_complex_double*>(a.data()),
                      k, reinterpret_cast<lapack_complex_double*>(out.data()), nullptr, 1, nullptr, 1);
    if (info != 0) throw EigenSolverFailure("zgeev failed with info " + std::to_string(info));
  }
  return out;
}

MinorSample minor_eigenvalues(const Matrix& X, const std::vector<int>& levels) {
  const int n = static_cast<int>(X.rows());
  if (X.cols() != n) throw std::invalid_argument("minor_eigenvalues needs a square matrix");
  MinorSample ms;
  ms.n = n;
  ms.levels = levels;
  for (int k : levels) {
    if (k < 1 || k > n) throw std::invalid_argument("minor level must lie in [1, n]");
    ms.eigenvalues.push_back(eigenvalues(X.bottomRightCorner(k, k)));
  }
  return ms;
}

cplx linear_statistic(const MinorSample& ms, int k, const TestFunction& f) {
  const auto it = std::find(ms.levels.begin(), ms.levels.end(), k);
  if (it == ms.levels.end()) throw std::invalid_argument("level not present in the sample");
  const auto& ev = ms.eigenvalues[it - ms.levels.begin()];
  cplx acc = 0.0;
  for (const cplx& s : ev) acc += f.value(s);
  return acc;
}

void SimulationPlan::validate() const {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (replicas < 1) throw std::invalid_argument("replica count must be positive");
  if (workers < 1) throw std::invalid_argument("worker count must be positive");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be positive");
  if (statistics.empty()) throw std::invalid_argument("no statistics requested");
  for (const auto& s : statistics)
    if (s.level < 1 || s.level > n) throw std::invalid_argument("statistic level must lie in [1, n]");
  EntryLaw::make(law.label(), law.beta);
}

SimulationResult run_replicas(const SimulationPlan& plan) {
  plan.validate();
  std::vector<int> levels;
  for (const auto& s : plan.statistics)
    if (std::find(levels.begin(), levels.end(), s.level) == levels.end()) levels.push_back(s.level);

  SimulationResult result;
  result.values.assign(plan.statistics.size(), std::vector<cplx>(plan.replicas));
  std::vector<char> resampled(plan.replicas, 0);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto work = [&]() {
    try {
      for (int r = next++; r < plan.replicas && !failed; r = next++) {
        for (int attempt = 0;; ++attempt) {
          const std::uint64_t seed = replica_seed(plan.master_seed, r, attempt);
          try {
            const Matrix X = sample_matrix(plan.n, plan.law, seed);
            const MinorSample ms = minor_eigenvalues(X, levels);
            for (std::size_t s = 0; s < plan.statistics.size(); ++s)
              result.values[s][r] = linear_statistic(ms, plan.statistics[s].level, plan.statistics[s].f);
            if (attempt > 0) resampled[r] = 1;
            break;
          } catch (const EigenSolverFailure&) {
            if (attempt + 1 >= plan.max_attempts) throw;
          }
        }
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };

  if (plan.workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < plan.workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  result.resampled = static_cast<int>(std::count(resampled.begin(), resampled.end(), 1));
  return result;
}

}  // namespace nhminor
