#pragma once

#include "kminit/init.hpp"

namespace kminit {

struct KMeansConfig {
  std::size_t max_iterations = 100;
  double epsilon = 1e-6;  // relative SSE improvement threshold
};

struct Assignment {
  std::vector<std::uint32_t> labels;  // per row: nearest center index
  std::vector<std::size_t> counts;    // per center: member count
};

enum class ConvergedBy { epsilon, max_iterations };

struct RunResult {
  Centers centers;
  Assignment assignment;
  std::vector<double> sse_trace;  // SSE after each completed iteration
  std::size_t iterations = 0;
  ConvergedBy converged_by = ConvergedBy::epsilon;
  double initial_sse = 0.0;  // nearest-center SSE of the seed centers
};

// Nearest-center assignment; ties go to the lowest center index. Throws
// std::invalid_argument on empty centers or dimension mismatch.
Assignment assign_points(const Dataset& data, const Centers& centers);

// Centroid update: each center becomes the mean of its members; a center
// with no members keeps its previous position.
Centers update_centers(const Dataset& data, const Assignment& assignment,
                       const Centers& previous);

// Lloyd iterations from the given seed. Each iteration assigns then
// updates; the run stops once the relative SSE improvement over the
// previous value (the seed SSE before iteration one) drops to epsilon or
// below, or after max_iterations.
RunResult kmeans(const Dataset& data, const Centers& initial,
                 const KMeansConfig& config = {});

}  // namespace kminit
