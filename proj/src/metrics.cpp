#include "kminit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kminit/detail/neumaier.hpp"

namespace kminit {

double sse(const Dataset& data, const Centers& centers) {
  if (centers.count() == 0) throw std::invalid_argument("sse: no centers");
  if (centers.dims != data.dims()) throw std::invalid_argument("sse: dimension mismatch");
  detail::NeumaierSum s;
  for (std::uint32_t row : data.canonical_order()) {
    const auto p = data.point(row);
    double best = sq_euclidean(p, centers.center(0));
    for (std::size_t c = 1; c < centers.count(); ++c)
      best = std::min(best, sq_euclidean(p, centers.center(c)));
    s.add(best);
  }
  return s.value();
}

double sse(const Dataset& data, const Centers& centers, const Assignment& assignment) {
  if (centers.count() == 0) throw std::invalid_argument("sse: no centers");
  if (centers.dims != data.dims()) throw std::invalid_argument("sse: dimension mismatch");
  if (assignment.labels.size() != data.size())
    throw std::invalid_argument("sse: assignment does not match dataset");
  detail::NeumaierSum s;
  for (std::uint32_t row : data.canonical_order()) {
    const std::uint32_t c = assignment.labels[row];
    if (c >= centers.count()) throw std::invalid_argument("sse: label out of range");
    s.add(sq_euclidean(data.point(row), centers.center(c)));
  }
  return s.value();
}

std::vector<double> normalize_vs_worst(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("normalize_vs_worst: empty input");
  double worst = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("normalize_vs_worst: values must be finite and >= 0");
    worst = std::max(worst, v);
  }
  if (worst <= 0.0)
    throw std::invalid_argument("normalize_vs_worst: needs at least one positive value");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / worst;
  return out;
}

namespace {

// Quantile by linear interpolation between order statistics ("type 7").
double quantile(const std::vector<double>& sorted, double p) {
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

SummaryStats five_number_summary(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("five_number_summary: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  SummaryStats st;
  st.min = sorted.front();
  st.q1 = quantile(sorted, 0.25);
  st.median = quantile(sorted, 0.5);
  st.q3 = quantile(sorted, 0.75);
  st.max = sorted.back();
  detail::NeumaierSum s;
  for (double v : sorted) s.add(v);
  st.mean = s.value() / static_cast<double>(sorted.size());
  return st;
}

boost::multiprecision::cpp_int stirling2(unsigned n, unsigned k) {
  if (k == 0 || n < k) throw std::invalid_argument("stirling2: requires n >= k >= 1");
  using boost::multiprecision::cpp_int;
  // S(i,j) = j*S(i-1,j) + S(i-1,j-1), rolled over one row.
  std::vector<cpp_int> row(k + 1, 0);
  row[0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    const unsigned top = std::min(i, k);
    for (unsigned j = top; j >= 1; --j) row[j] = j * row[j] + row[j - 1];
    row[0] = 0;
  }
  return row[k];
}

}  // namespace kminit
