#pragma once

#include <cstddef>
#include <span>

#include "nhminor/types.hpp"

namespace nhminor {

struct CovarianceEstimate {
  cplx mean1;
  cplx mean2;
  cplx cov;  // E[conj(a - Ea) (b - Eb)], (R - 1)-normalized
  double std_error = 0.0;
  std::size_t replicas = 0;
  int batch_count = 0;
};

// Throws InsufficientReplicas below min_replicas and std::invalid_argument if batches < 16
// or the spans differ in length. Batches are contiguous blocks in replica order; the last
// batch absorbs the remainder.
CovarianceEstimate covariance_estimate(std::span<const cplx> a, std::span<const cplx> b,
                                       int batches = 16, std::size_t min_replicas = 256);

struct CumulantEstimate {
  int order = 0;
  cplx value;             // unbiased k-statistic of the given order
  double std_error = 0.0; // batch-means error of value
  double variance = 0.0;  // k-statistic of E|s - Es|^2
  double standardized = 0.0;  // |value| / variance^(order/2)
  std::size_t replicas = 0;
  int batch_count = 0;
};

// Third or fourth cumulant of one complex statistic, computed from powers of the
// centered values without conjugation. Order 4 needs at least 4096 replicas, order 3
// at least 256.
CumulantEstimate cumulant_estimate(std::span<const cplx> s, int order, int batches = 16);

}  // namespace nhminor
