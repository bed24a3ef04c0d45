#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "kminit/kmeans.hpp"

namespace kminit {

// Sum of squared distances from each point to its nearest center.
double sse(const Dataset& data, const Centers& centers);
// SSE under a fixed assignment (not necessarily the nearest one).
double sse(const Dataset& data, const Centers& centers, const Assignment& assignment);

// Each value divided by the largest one; results lie in (0,1] with the
// worst method scoring exactly 1. Throws std::invalid_argument unless all
// values are finite, nonnegative, and at least one is positive.
std::vector<double> normalize_vs_worst(std::span<const double> values);

struct SummaryStats {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
};

// Five-number summary plus mean; quartiles by linear interpolation between
// order statistics (the common "type 7" rule). Throws std::invalid_argument
// on an empty input.
SummaryStats five_number_summary(std::span<const double> values);

// Stirling number of the second kind S(n,k): the number of ways to
// partition n items into k nonempty groups, i.e. the size of the search
// space Lloyd's algorithm is a heuristic for. Exact; requires n >= k >= 1.
boost::multiprecision::cpp_int stirling2(unsigned n, unsigned k);

}  // namespace kminit
