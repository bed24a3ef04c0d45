#pragma once

#include <optional>
#include <string_view>

#include "kminit/dataset.hpp"

namespace kminit {

// K centers in R^dims, row-major, tagged with the method that produced them.
struct Centers {
  std::vector<double> values;
  std::size_t dims = 0;
  std::string method;

  std::size_t count() const { return dims == 0 ? 0 : values.size() / dims; }
  std::span<const double> center(std::size_t i) const {
    return {values.data() + i * dims, dims};
  }
};

// ---- greedy seeding ----

// Maximin: first center = centroid of the data, each further center the
// point with the greatest squared distance to its nearest chosen center
// (ties -> lexicographically smallest point). Throws std::invalid_argument
// when k is 0, exceeds N, or exceeds the number of distinct points.
Centers maximin_init(const Dataset& data, std::size_t k);

// Same greedy, but the first center is the data point with the largest
// L2 norm. All centers are data points.
Centers katsavounidis_init(const Dataset& data, std::size_t k);

// ---- divisive seeding ----

struct ClusterSplitInfo {
  double sse = 0.0;
  bool splittable = false;  // has at least two distinct points
};

// Index of the splittable cluster with the largest SSE (ties -> lowest
// index, i.e. earliest created). Throws std::invalid_argument when none is
// splittable.
std::size_t select_split_cluster(std::span<const ClusterSplitInfo> clusters);

// Dominant eigenvector of a symmetric PSD matrix (row-major dims x dims) by
// power iteration, started from the axis with the largest diagonal entry.
// Converged when ||cov v - lambda v|| <= 1e-8 (absolute); the sign is fixed
// so the first nonzero component is positive. Returns nullopt if not
// converged after 1000 iterations; throws std::invalid_argument on a
// non-finite or asymmetric input.
std::optional<std::vector<double>> principal_eigenvector(std::span<const double> cov,
                                                         std::size_t dims);

// One binary split performed by the divisive initializers.
struct SplitStep {
  std::size_t cluster = 0;            // list index of the cluster that was split
  std::optional<std::size_t> axis;    // set for axis-aligned splits
  std::vector<double> direction;      // unit split direction actually used
  double threshold = 0.0;             // cut point: projection <= threshold goes left
  double cluster_sse = 0.0;           // SSE of the cluster before splitting
  std::vector<std::uint32_t> left_rows;
  std::vector<std::uint32_t> right_rows;
};

struct DivisiveTrace {
  Centers centers;
  std::vector<SplitStep> steps;  // K-1 successful splits, in order
};

// Variance-guided divisive seeding: split the max-SSE cluster at its
// centroid along the attribute with the largest within-cluster variance.
Centers var_part_init(const Dataset& data, std::size_t k);
DivisiveTrace var_part_init_traced(const Dataset& data, std::size_t k);

// Same scheme, splitting along the cluster's principal eigenvector (falls
// back to the max-variance axis if power iteration does not converge).
Centers pca_part_init(const Dataset& data, std::size_t k);
DivisiveTrace pca_part_init_traced(const Dataset& data, std::size_t k);

// ---- cumulative-distance seeding ----

// The 2-attribute projection used by maxisum_init: primary = attribute with
// the largest |stddev/mean| (mean 0 with spread counts as infinite),
// secondary = the attribute least correlated with the primary (smallest
// signed product-moment sum). Constant attributes are skipped; throws
// std::invalid_argument when fewer than two attributes vary.
struct ProjectionPlan {
  std::size_t primary = 0;
  std::size_t secondary = 0;
  std::vector<double> projected;  // N x 2, row-major
};
ProjectionPlan pick_projection_axes(const Dataset& data);

// Maxisum: first center = point farthest from the centroid, each further
// center the unchosen point with the largest cumulative (unsquared)
// distance to all previously chosen centers. With projected=true the
// selection runs on the 2-attribute projection; the returned centers are
// always the full-dimensional originals.
Centers maxisum_init(const Dataset& data, std::size_t k, bool projected);

// ---- dispatch ----

// Canonical method order: "mm", "kk", "vp", "pp", "ms", "ms+".
const std::vector<std::string>& method_names();
bool is_method(std::string_view method);
// Runs the initializer named by its tag; throws std::invalid_argument for
// unknown tags.
Centers init_by_name(const Dataset& data, std::string_view method, std::size_t k);

}  // namespace kminit
