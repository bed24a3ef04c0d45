#include "kminit/kmeans.hpp"

#include <stdexcept>

#include "kminit/detail/neumaier.hpp"

namespace kminit {

namespace {

void check_centers(const Dataset& data, const Centers& centers, const char* where) {
  if (centers.count() == 0)
    throw std::invalid_argument(std::string(where) + ": no centers");
  if (centers.dims != data.dims())
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

inline double sqdist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

std::uint32_t nearest_center(const double* p, const Centers& centers) {
  const std::size_t k = centers.count();
  const std::size_t d = centers.dims;
  std::uint32_t best = 0;
  double best_dist = sqdist(p, centers.values.data(), d);
  for (std::size_t i = 1; i < k; ++i) {
    const double dist = sqdist(p, centers.values.data() + i * d, d);
    if (dist < best_dist) {  // ties keep the lowest center index
      best_dist = dist;
      best = static_cast<std::uint32_t>(i);
    }
  }
  return best;
}

}  // namespace

Assignment assign_points(const Dataset& data, const Centers& centers) {
  check_centers(data, centers, "assign_points");
  Assignment a;
  a.labels.resize(data.size());
  a.counts.assign(centers.count(), 0);
  const double* values = data.values().data();
  const std::size_t d = data.dims();
  for (std::size_t j = 0; j < data.size(); ++j) {
    const std::uint32_t c = nearest_center(values + j * d, centers);
    a.labels[j] = c;
    ++a.counts[c];
  }
  return a;
}

Centers update_centers(const Dataset& data, const Assignment& assignment,
                       const Centers& previous) {
  check_centers(data, previous, "update_centers");
  const std::size_t k = previous.count();
  const std::size_t d = data.dims();
  if (assignment.labels.size() != data.size() || assignment.counts.size() != k)
    throw std::invalid_argument("update_centers: assignment does not match");

  std::vector<double> sums(k * d, 0.0);
  for (std::uint32_t row : data.canonical_order()) {
    const std::uint32_t c = assignment.labels[row];
    if (c >= k) throw std::invalid_argument("update_centers: label out of range");
    const auto p = data.point(row);
    double* s = sums.data() + c * d;
    for (std::size_t i = 0; i < d; ++i) s[i] += p[i];
  }

  Centers next;
  next.dims = d;
  next.method = previous.method;
  next.values.resize(k * d);
  for (std::size_t c = 0; c < k; ++c) {
    if (assignment.counts[c] == 0) {
      // Empty cluster: keep the previous center.
      const auto prev = previous.center(c);
      std::copy(prev.begin(), prev.end(), next.values.begin() + c * d);
    } else {
      const double inv = 1.0 / static_cast<double>(assignment.counts[c]);
      for (std::size_t i = 0; i < d; ++i) next.values[c * d + i] = sums[c * d + i] * inv;
    }
  }
  return next;
}

RunResult kmeans(const Dataset& data, const Centers& initial, const KMeansConfig& config) {
  check_centers(data, initial, "kmeans");
  if (initial.count() > data.size())
    throw std::invalid_argument("kmeans: more centers than points");
  if (config.max_iterations == 0)
    throw std::invalid_argument("kmeans: max_iterations must be >= 1");
  if (!(config.epsilon >= 0.0))
    throw std::invalid_argument("kmeans: epsilon must be >= 0");

  const std::size_t d = data.dims();
  RunResult res;
  res.centers = initial;

  // Seed SSE: the baseline the first iteration's improvement is measured
  // against.
  {
    detail::NeumaierSum s;
    for (std::uint32_t row : data.canonical_order()) {
      const double* p = data.values().data() + std::size_t{row} * d;
      double best = sqdist(p, res.centers.values.data(), d);
      for (std::size_t c = 1; c < res.centers.count(); ++c)
        best = std::min(best, sqdist(p, res.centers.values.data() + c * d, d));
      s.add(best);
    }
    res.initial_sse = s.value();
  }

  double prev = res.initial_sse;
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    Assignment a = assign_points(data, res.centers);
    Centers next = update_centers(data, a, res.centers);

    detail::NeumaierSum s;
    for (std::uint32_t row : data.canonical_order()) {
      const double* p = data.values().data() + std::size_t{row} * d;
      s.add(sqdist(p, next.values.data() + std::size_t{a.labels[row]} * d, d));
    }
    const double cur = s.value();

    res.centers = std::move(next);
    res.assignment = std::move(a);
    res.sse_trace.push_back(cur);
    res.iterations = it;

    // Relative improvement; an exact zero SSE counts as converged (the
    // ratio is undefined there).
    if (cur == 0.0 || (prev - cur) / cur <= config.epsilon) {
      res.converged_by = ConvergedBy::epsilon;
      return res;
    }
    prev = cur;
  }
  res.converged_by = ConvergedBy::max_iterations;
  return res;
}

}  // namespace kminit
