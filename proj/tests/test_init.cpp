#include <cmath>

#include "doctest.h"
#include "kminit/init.hpp"
#include "kminit/metrics.hpp"
#include "oracles.hpp"

using namespace kminit;
using oracle::Point;

namespace {

std::vector<Point> as_points(const Centers& c) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < c.count(); ++i) {
    const auto v = c.center(i);
    out.emplace_back(v.begin(), v.end());
  }
  return out;
}

// Rebuilds the dataset with rows permuted; used by the invariance checks.
Dataset shuffled(const Dataset& d, oracle::Rng& rng) {
  std::vector<std::size_t> perm(d.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[rng.uniform_int(i)]);
  std::vector<double> flat;
  for (std::size_t i : perm) {
    const auto p = d.point(i);
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return Dataset(std::move(flat), d.dims(), {}, {}, {}, d.name());
}

}  // namespace

TEST_CASE("maximin: centroid first, then farthest-from-nearest") {
  const Dataset d = oracle::make_dataset({{0, 0}, {1, 0}, {5, 5}});
  const Centers k2 = maximin_init(d, 2);
  CHECK(as_points(k2) == std::vector<Point>{{2.0, 5.0 / 3.0}, {5, 5}});
  const Centers k3 = maximin_init(d, 3);
  CHECK(as_points(k3) == std::vector<Point>{{2.0, 5.0 / 3.0}, {5, 5}, {0, 0}});
  CHECK(k3.method == "mm");
}

TEST_CASE("maximin: K=1 is the centroid") {
  const Dataset d = oracle::make_dataset({{0, 0}, {4, 0}, {2, 6}});
  CHECK(as_points(maximin_init(d, 1)) == std::vector<Point>{{2, 2}});
}

TEST_CASE("katsavounidis: largest norm first, all centers are data points") {
  const Dataset d = oracle::make_dataset({{0, 0}, {1, 0}, {5, 5}});
  CHECK(as_points(katsavounidis_init(d, 2)) == std::vector<Point>{{5, 5}, {0, 0}});
  CHECK(as_points(katsavounidis_init(d, 3)) == std::vector<Point>{{5, 5}, {0, 0}, {1, 0}});
}

TEST_CASE("greedy seeding: distance ties break to the lexicographically smaller point") {
  const Dataset d = oracle::make_dataset({{2, 0}, {-2, 0}});
  // Both points are distance 2 from the centroid (0,0): pick (-2,0).
  const Centers c = maximin_init(d, 2);
  CHECK(as_points(c)[1] == Point{-2, 0});
}

TEST_CASE("seeding k validation") {
  const Dataset d = oracle::make_dataset({{1, 1}, {2, 2}});
  for (const auto& m : method_names()) {
    CHECK_THROWS_AS(init_by_name(d, m, 0), std::invalid_argument);
    CHECK_THROWS_AS(init_by_name(d, m, 3), std::invalid_argument);
  }
}

TEST_CASE("seeding rejects k beyond the number of distinct points") {
  const Dataset dup2 = oracle::make_dataset({{1, 1}, {1, 1}});
  CHECK_THROWS_AS(maximin_init(dup2, 2), std::invalid_argument);

  const Dataset dup3 = oracle::make_dataset({{1, 1}, {1, 1}, {2, 2}});
  CHECK_THROWS_AS(katsavounidis_init(dup3, 3), std::invalid_argument);
  CHECK_THROWS_AS(var_part_init(dup3, 3), std::invalid_argument);
  CHECK_THROWS_AS(pca_part_init(dup3, 3), std::invalid_argument);
  CHECK_THROWS_AS(maxisum_init(dup3, 3, true), std::invalid_argument);
  CHECK_THROWS_AS(maxisum_init(dup3, 3, false), std::invalid_argument);
}

TEST_CASE("select_split_cluster") {
  const std::vector<ClusterSplitInfo> clusters{{5.0, true}, {9.0, true}, {9.5, false}};
  CHECK(select_split_cluster(clusters) == 1);  // largest splittable SSE

  const std::vector<ClusterSplitInfo> tie{{9.0, true}, {9.0, true}};
  CHECK(select_split_cluster(tie) == 0);  // ties: earliest created

  const std::vector<ClusterSplitInfo> stuck{{5.0, false}, {9.0, false}};
  CHECK_THROWS_AS(select_split_cluster(stuck), std::invalid_argument);
}

TEST_CASE("var_part: 1-D split at the mean") {
  const Dataset d = oracle::make_dataset({{0}, {1}, {9}, {10}});
  const DivisiveTrace t = var_part_init_traced(d, 2);
  CHECK(as_points(t.centers) == std::vector<Point>{{0.5}, {9.5}});
  REQUIRE(t.steps.size() == 1);
  CHECK(t.steps[0].axis == 0);
  CHECK(t.steps[0].threshold == 5.0);
  CHECK(t.steps[0].cluster_sse == 82.0);  // 25+16+16+25
  CHECK(t.steps[0].left_rows.size() == 2);
  CHECK(t.steps[0].right_rows.size() == 2);
}

TEST_CASE("var_part: split axis is the one with the largest variance") {
  // Spread 10 along y, 2 along x.
  const Dataset d = oracle::make_dataset({{0, 0}, {2, 0}, {0, 10}, {2, 10}});
  const DivisiveTrace t = var_part_init_traced(d, 2);
  REQUIRE(t.steps.size() == 1);
  CHECK(t.steps[0].axis == 1);
  CHECK(t.steps[0].threshold == 5.0);
  CHECK(as_points(t.centers) == std::vector<Point>{{1, 0}, {1, 10}});
}

TEST_CASE("divisive trace invariants on random data") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = oracle::random_points(rng, 6 + rng.uniform_int(25), 1 + rng.uniform_int(4));
    const Dataset d = oracle::make_dataset(pts);
    const std::size_t k = 2 + rng.uniform_int(4);
    for (bool pca : {false, true}) {
      const DivisiveTrace t = pca ? pca_part_init_traced(d, k) : var_part_init_traced(d, k);
      CHECK(t.centers.count() == k);
      REQUIRE(t.steps.size() == k - 1);
      for (const SplitStep& s : t.steps) {
        CHECK_FALSE(s.left_rows.empty());
        CHECK_FALSE(s.right_rows.empty());

        double norm2 = 0.0;
        for (double v : s.direction) norm2 += v * v;
        CHECK(std::abs(std::sqrt(norm2) - 1.0) <= 1e-12);

        // Recompute the parent cluster's SSE naively in extended precision.
        std::vector<std::uint32_t> rows(s.left_rows);
        rows.insert(rows.end(), s.right_rows.begin(), s.right_rows.end());
        std::vector<long double> mean(d.dims(), 0.0L);
        for (std::uint32_t r : rows)
          for (std::size_t c = 0; c < d.dims(); ++c) mean[c] += d.point(r)[c];
        for (auto& m : mean) m /= static_cast<long double>(rows.size());
        long double want = 0.0L;
        for (std::uint32_t r : rows)
          for (std::size_t c = 0; c < d.dims(); ++c) {
            const long double diff = d.point(r)[c] - mean[c];
            want += diff * diff;
          }
        CHECK(s.cluster_sse ==
              doctest::Approx(static_cast<double>(want)).epsilon(1e-9));

        // Every left row projects at or below the threshold, right rows above.
        for (std::uint32_t r : s.left_rows) {
          double proj = 0.0;
          for (std::size_t c = 0; c < d.dims(); ++c) proj += s.direction[c] * d.point(r)[c];
          CHECK(proj <= s.threshold);
        }
        for (std::uint32_t r : s.right_rows) {
          double proj = 0.0;
          for (std::size_t c = 0; c < d.dims(); ++c) proj += s.direction[c] * d.point(r)[c];
          CHECK(proj > s.threshold);
        }
      }
    }
  }
}

TEST_CASE("principal_eigenvector: exact and analytic cases") {
  const std::vector<double> diag{4, 0, 0, 1};
  auto v = principal_eigenvector(diag, 2);
  REQUIRE(v.has_value());
  CHECK(*v == std::vector<double>{1, 0});

  const std::vector<double> sym{2, 1, 1, 2};  // eigenvector (1,1)/sqrt(2)
  v = principal_eigenvector(sym, 2);
  REQUIRE(v.has_value());
  CHECK((*v)[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
  CHECK((*v)[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));

  // Sign convention: first nonzero component positive.
  const std::vector<double> anti{1, -1, -1, 1};  // eigenvector along (1,-1)
  v = principal_eigenvector(anti, 2);
  REQUIRE(v.has_value());
  CHECK((*v)[0] > 0.0);
  CHECK((*v)[1] == doctest::Approx(-(*v)[0]));

  // Zero matrix: eigenvalue 0, the start axis comes back unchanged.
  const std::vector<double> zero{0, 0, 0, 0};
  v = principal_eigenvector(zero, 2);
  REQUIRE(v.has_value());
  CHECK(*v == std::vector<double>{1, 0});
}

TEST_CASE("principal_eigenvector: validation and non-convergence") {
  CHECK_THROWS_AS(principal_eigenvector(std::vector<double>{1, 2, 3}, 2), std::invalid_argument);
  CHECK_THROWS_AS(principal_eigenvector(std::vector<double>{1, 2, 3, 4}, 2),
                  std::invalid_argument);  // not symmetric
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(principal_eigenvector(std::vector<double>{nan, 0, 0, 1}, 2),
                  std::invalid_argument);

  // Eigenvalues {1, 1-1e-6} with eigenvectors at 45 degrees: the residual
  // decays too slowly to reach 1e-8 within 1000 iterations.
  const double g = 5e-7;
  const std::vector<double> slow{1 - g, g, g, 1 - g};
  CHECK_FALSE(principal_eigenvector(slow, 2).has_value());
}

TEST_CASE("pca_part: splits along the principal direction") {
  // Points on the line y = x: first split separates the two halves.
  const Dataset d = oracle::make_dataset({{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  const DivisiveTrace t = pca_part_init_traced(d, 2);
  CHECK(as_points(t.centers) == std::vector<Point>{{0.5, 0.5}, {2.5, 2.5}});
  REQUIRE(t.steps.size() == 1);
  CHECK_FALSE(t.steps[0].axis.has_value());
  CHECK(t.steps[0].direction[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("pca_part falls back to the variance axis when power iteration stalls") {
  // Covariance has eigenvalues {1, 1-1e-6} at 45 degrees (see above), so
  // the eigensolver gives up and the split must match var_part exactly.
  const double q = std::sqrt(1.0 - 1e-6);
  const Dataset d = oracle::make_dataset({{1, 1}, {-1, -1}, {q, -q}, {-q, q}});
  const Centers vp = var_part_init(d, 2);
  const Centers pp = pca_part_init(d, 2);
  CHECK(vp.values == pp.values);
}

TEST_CASE("pca_part equals var_part when every covariance is diagonal") {
  // Only the first coordinate varies; all split directions are axis 0.
  oracle::Rng rng(23);
  std::vector<Point> pts;
  for (int i = 0; i < 14; ++i) pts.push_back({rng.uniform() * 10.0, 3.0, -1.0});
  const Dataset d = oracle::make_dataset(pts);
  for (std::size_t k : {2, 3, 4, 5}) {
    const Centers vp = var_part_init(d, k);
    const Centers pp = pca_part_init(d, k);
    CHECK(vp.values == pp.values);
  }
}

TEST_CASE("pick_projection_axes: coefficient of variation and decorrelation") {
  // cv: col0 = col2 spread/mean picks col0; constant col excluded;
  // secondary minimizes the signed sum of standardized products.
  const Dataset d = oracle::make_dataset(
      {{1, 100, 10}, {2, 101, 20}, {3, 102, 15}, {4, 103, 25}});
  const ProjectionPlan plan = pick_projection_axes(d);
  CHECK(plan.primary == 0);
  CHECK(plan.secondary == 2);
  REQUIRE(plan.projected.size() == 8);
  CHECK(plan.projected[0] == 1.0);
  CHECK(plan.projected[1] == 10.0);
}

TEST_CASE("pick_projection_axes: zero mean counts as infinite cv; ties go low") {
  // col3 has mean 0 with spread -> infinite cv beats everything; for the
  // secondary, col0 and col1 tie exactly and the lower index wins.
  const Dataset d = oracle::make_dataset(
      {{1, 100, 5, 0}, {2, 101, 5, -1}, {3, 102, 5, 1}, {4, 103, 5, 0}});
  const ProjectionPlan plan = pick_projection_axes(d);
  CHECK(plan.primary == 3);
  CHECK(plan.secondary == 0);
}

TEST_CASE("pick_projection_axes: anti-correlation beats no correlation") {
  // col1 doubles col0 (CV ties bitwise, lower index wins the primary);
  // col2 is exactly uncorrelated with col0, col3 anti-correlated: the
  // signed minimum (-3 < 0) picks col3.
  const Dataset d = oracle::make_dataset(
      {{1, 2, 5, 9}, {2, 4, 7, 8}, {3, 6, 7, 7}, {4, 8, 5, 6}});
  const ProjectionPlan plan = pick_projection_axes(d);
  CHECK(plan.primary == 0);
  CHECK(plan.secondary == 3);
}

TEST_CASE("pick_projection_axes validation") {
  CHECK_THROWS_AS(pick_projection_axes(oracle::make_dataset({{1}, {2}})),
                  std::invalid_argument);
  // Only one varying attribute.
  CHECK_THROWS_AS(pick_projection_axes(oracle::make_dataset({{1, 7}, {2, 7}})),
                  std::invalid_argument);
}

TEST_CASE("maxisum without projection: farthest first, then cumulative distance") {
  const Dataset d = oracle::make_dataset({{0, 0}, {4, 0}, {0, 3}, {-4, 0}});
  // (4,0) and (-4,0) tie for farthest from the centroid (0, 0.75);
  // the lexicographically smaller (-4,0) wins.
  const Centers c = maxisum_init(d, 3, false);
  CHECK(as_points(c) == std::vector<Point>{{-4, 0}, {4, 0}, {0, 3}});
  CHECK(c.method == "ms+");
}

TEST_CASE("maxisum with projection selects in 2-D but returns full points") {
  const Dataset d = oracle::make_dataset({{0, 0, 9}, {1, 5, 9}, {2, 1, 9}, {10, 2, 9}});
  const Centers c = maxisum_init(d, 2, true);
  CHECK(as_points(c) == std::vector<Point>{{10, 2, 9}, {0, 0, 9}});
  CHECK(c.method == "ms");
}

TEST_CASE("maxisum: duplicates of a chosen point are excluded") {
  const Dataset d = oracle::make_dataset({{0, 0}, {5, 0}, {5, 0}});
  const Centers c = maxisum_init(d, 2, false);
  CHECK(as_points(c) == std::vector<Point>{{0, 0}, {5, 0}});
  // Picking (5,0) consumed both copies, so a third center has no
  // candidates left.
  CHECK_THROWS_AS(maxisum_init(d, 3, false), std::invalid_argument);
}

TEST_CASE("method dispatch") {
  CHECK(method_names() == std::vector<std::string>{"mm", "kk", "vp", "pp", "ms", "ms+"});
  CHECK(is_method("ms+"));
  CHECK_FALSE(is_method("zz"));
  const Dataset d = oracle::make_dataset({{0, 0}, {1, 0}, {5, 5}});
  for (const auto& m : method_names()) {
    const Centers c = init_by_name(d, m, 2);
    CHECK(c.count() == 2);
    CHECK(c.method == m);
  }
  CHECK_THROWS_AS(init_by_name(d, "zz", 2), std::invalid_argument);
}

TEST_CASE("all six initializers are invariant under row permutation (bitwise)") {
  oracle::Rng rng(31);
  const Dataset d = oracle::make_dataset(oracle::random_points(rng, 30, 4));
  for (int t = 0; t < 5; ++t) {
    const Dataset s = shuffled(d, rng);
    for (const auto& m : method_names()) {
      const Centers a = init_by_name(d, m, 4);
      const Centers b = init_by_name(s, m, 4);
      CHECK(a.values == b.values);
    }
  }
}

TEST_CASE("katsavounidis is a 2-approximation for K-center (first center is a data point)") {
  oracle::Rng rng(41);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 2 + rng.uniform_int(11);   // 2..12
    const std::size_t d = 1 + rng.uniform_int(3);
    const std::size_t k = 1 + rng.uniform_int(std::min<std::size_t>(3, n));
    const auto pts = oracle::random_points(rng, n, d);
    const double r = oracle::covering_radius(pts, katsavounidis_init(oracle::make_dataset(pts), k));
    const double opt = oracle::kcenter_opt(pts, k);
    CHECK(r <= 2.0 * opt + 1e-12);
  }
}

TEST_CASE("maximin with a centroid seed satisfies the shifted bound 2*opt(K-1)") {
  // With the synthetic first center, the classical factor-2 guarantee
  // degrades by one center: radius(K) <= 2 * optimal radius with K-1
  // centers. (The unshifted bound fails; see the acceptance suite.)
  oracle::Rng rng(43);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 3 + rng.uniform_int(10);  // 3..12
    const std::size_t d = 1 + rng.uniform_int(3);
    const std::size_t k = 2 + rng.uniform_int(2);   // 2..3
    const auto pts = oracle::random_points(rng, n, d);
    const double r = oracle::covering_radius(pts, maximin_init(oracle::make_dataset(pts), k));
    const double opt_prev = oracle::kcenter_opt(pts, k - 1);
    CHECK(r <= 2.0 * opt_prev + 1e-12);
  }
}
