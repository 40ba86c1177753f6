#include "nhminor/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nhminor/errors.hpp"

namespace nhminor {

namespace {

template <class Stat>
double batch_error(std::size_t n, int batches, Stat&& stat) {
  const std::size_t size = n / batches;
  std::vector<cplx> vals(batches);
  cplx mean = 0.0;
  for (int b = 0; b < batches; ++b) {
    const std::size_t lo = b * size;
    const std::size_t hi = b + 1 == batches ? n : lo + size;
    vals[b] = stat(lo, hi);
    mean += vals[b];
  }
  mean /= static_cast<double>(batches);
  double ss = 0.0;
  for (const cplx& v : vals) ss += std::norm(v - mean);
  return std::sqrt(ss / (batches - 1.0) / batches);
}

cplx mean_of(std::span<const cplx> s, std::size_t lo, std::size_t hi) {
  cplx acc = 0.0;
  for (std::size_t i = lo; i < hi; ++i) acc += s[i];
  return acc / static_cast<double>(hi - lo);
}

cplx covariance(std::span<const cplx> a, std::span<const cplx> b, std::size_t lo, std::size_t hi) {
  const cplx ma = mean_of(a, lo, hi), mb = mean_of(b, lo, hi);
  cplx acc = 0.0;
  for (std::size_t i = lo; i < hi; ++i) acc += std::conj(a[i] - ma) * (b[i] - mb);
  return acc / static_cast<double>(hi - lo - 1);
}

struct Kstats {
  double variance;
  cplx k;
};

Kstats kstat(std::span<const cplx> s, std::size_t lo, std::size_t hi, int order) {
  const double n = static_cast<double>(hi - lo);
  const cplx m = mean_of(s, lo, hi);
  cplx m2 = 0.0, m3 = 0.0, m4 = 0.0;
  double v = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const cplx d = s[i] - m;
    const cplx d2 = d * d;
    v += std::norm(d);
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  Kstats out{v / (n - 1.0), 0.0};
  if (order == 3) {
    out.k = n * n / ((n - 1.0) * (n - 2.0)) * m3;
  } else {
    out.k = n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) /
            ((n - 1.0) * (n - 2.0) * (n - 3.0));
  }
  return out;
}

}  // namespace

CovarianceEstimate covariance_estimate(std::span<const cplx> a, std::span<const cplx> b,
                                       int batches, std::size_t min_replicas) {
  if (a.size() != b.size()) throw std::invalid_argument("statistic streams differ in length");
  if (batches < 16) throw std::invalid_argument("batch means need at least 16 batches");
  if (a.size() < min_replicas || a.size() < static_cast<std::size_t>(2 * batches))
    throw InsufficientReplicas(a.size(), std::max<std::size_t>(min_replicas, 2 * batches));
  CovarianceEstimate out;
  out.replicas = a.size();
  out.batch_count = batches;
  out.mean1 = mean_of(a, 0, a.size());
  out.mean2 = mean_of(b, 0, b.size());
  out.cov = covariance(a, b, 0, a.size());
  out.std_error = batch_error(a.size(), batches,
                              [&](std::size_t lo, std::size_t hi) { return covariance(a, b, lo, hi); });
  return out;
}

CumulantEstimate cumulant_estimate(std::span<const cplx> s, int order, int batches) {
  if (order != 3 && order != 4) throw std::invalid_argument("cumulant order must be 3 or 4");
  if (batches < 16) throw std::invalid_argument("batch means need at least 16 batches");
  const std::size_t need = order == 4 ? 4096 : 256;
  if (s.size() < need) throw InsufficientReplicas(s.size(), need);
  CumulantEstimate out;
  out.order = order;
  out.replicas = s.size();
  out.batch_count = batches;
  const Kstats all = kstat(s, 0, s.size(), order);
  out.value = all.k;
  out.variance = all.variance;
  out.standardized = std::abs(all.k) / std::pow(all.variance, 0.5 * order);
  out.std_error = batch_error(s.size(), batches, [&](std::size_t lo, std::size_t hi) {
    return kstat(s, lo, hi, order).k;
  });
  return out;
}

}  // namespace nhminor
