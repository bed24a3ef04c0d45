#include "kminit/init.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kminit/detail/neumaier.hpp"

namespace kminit {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

bool points_equal(std::span<const double> a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

void check_k(const Dataset& data, std::size_t k, const char* method) {
  if (k == 0) throw std::invalid_argument(std::string(method) + ": k must be >= 1");
  if (k > data.size())
    throw std::invalid_argument(std::string(method) + ": k exceeds the number of points");
}

[[noreturn]] void fail_distinct(const char* method) {
  throw std::invalid_argument(std::string(method) +
                              ": k exceeds the number of distinct points");
}

// Greedy maximin rounds after the first center: always pick the point
// farthest (squared distance) from its nearest chosen center.
Centers greedy_maximin(const Dataset& data, std::vector<double> first, std::size_t k,
                       const char* method) {
  const std::size_t n = data.size();
  Centers c;
  c.dims = data.dims();
  c.method = method;
  c.values = std::move(first);

  std::vector<double> mindist(n);
  for (std::size_t j = 0; j < n; ++j)
    mindist[j] = sq_euclidean(data.point(j), c.center(0));

  for (std::size_t i = 1; i < k; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j) {
      if (mindist[j] > mindist[best] ||
          (mindist[j] == mindist[best] && lex_less(data.point(j), data.point(best))))
        best = j;
    }
    if (mindist[best] == 0.0) fail_distinct(method);
    const auto p = data.point(best);
    c.values.insert(c.values.end(), p.begin(), p.end());
    for (std::size_t j = 0; j < n; ++j)
      mindist[j] = std::min(mindist[j], sq_euclidean(data.point(j), p));
  }
  return c;
}

}  // namespace

Centers maximin_init(const Dataset& data, std::size_t k) {
  check_k(data, k, "mm");
  return greedy_maximin(data, centroid(data), k, "mm");
}

Centers katsavounidis_init(const Dataset& data, std::size_t k) {
  check_k(data, k, "kk");
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto p = data.point(j);
    double nrm = 0.0;
    for (double v : p) nrm += v * v;
    if (nrm > best_norm ||
        (nrm == best_norm && lex_less(p, data.point(best)))) {
      best = j;
      best_norm = nrm;
    }
  }
  const auto p = data.point(best);
  return greedy_maximin(data, std::vector<double>(p.begin(), p.end()), k, "kk");
}

std::size_t select_split_cluster(std::span<const ClusterSplitInfo> clusters) {
  std::size_t best = npos;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (!clusters[i].splittable) continue;
    if (best == npos || clusters[i].sse > clusters[best].sse) best = i;
  }
  if (best == npos)
    throw std::invalid_argument("select_split_cluster: no splittable cluster");
  return best;
}

std::optional<std::vector<double>> principal_eigenvector(std::span<const double> cov,
                                                         std::size_t dims) {
  if (dims == 0 || cov.size() != dims * dims)
    throw std::invalid_argument("principal_eigenvector: bad matrix size");
  for (double v : cov)
    if (!std::isfinite(v))
      throw std::invalid_argument("principal_eigenvector: non-finite matrix");
  for (std::size_t i = 0; i < dims; ++i)
    for (std::size_t j = i + 1; j < dims; ++j)
      if (std::abs(cov[i * dims + j] - cov[j * dims + i]) > 1e-9)
        throw std::invalid_argument("principal_eigenvector: matrix not symmetric");

  constexpr double kTol = 1e-8;
  constexpr std::size_t kMaxIter = 1000;

  auto sign_fix = [](std::vector<double> v) {
    for (double x : v) {
      if (x == 0.0) continue;
      if (x < 0.0)
        for (double& y : v) y = -y;
      break;
    }
    return v;
  };
  auto mul = [&](const std::vector<double>& v) {
    std::vector<double> out(dims, 0.0);
    for (std::size_t i = 0; i < dims; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dims; ++j) s += cov[i * dims + j] * v[j];
      out[i] = s;
    }
    return out;
  };

  // Start from the axis with the most variance (largest diagonal entry).
  std::size_t start = 0;
  for (std::size_t i = 1; i < dims; ++i)
    if (cov[i * dims + i] > cov[start * dims + start]) start = i;
  std::vector<double> v(dims, 0.0);
  v[start] = 1.0;

  std::vector<double> av = mul(v);
  for (std::size_t iter = 0; iter < kMaxIter; ++iter) {
    double nrm2 = 0.0;
    for (double x : av) nrm2 += x * x;
    const double nrm = std::sqrt(nrm2);
    if (nrm == 0.0) return sign_fix(std::move(v));  // cov v = 0: eigenvalue 0 exactly
    for (std::size_t i = 0; i < dims; ++i) v[i] = av[i] / nrm;
    av = mul(v);
    double lambda = 0.0;
    for (std::size_t i = 0; i < dims; ++i) lambda += v[i] * av[i];
    double resid2 = 0.0;
    for (std::size_t i = 0; i < dims; ++i) {
      const double r = av[i] - lambda * v[i];
      resid2 += r * r;
    }
    if (std::sqrt(resid2) <= kTol) return sign_fix(std::move(v));
  }
  return std::nullopt;
}

namespace {

struct Node {
  std::vector<std::uint32_t> rows;  // kept in canonical order
  std::vector<double> center;
  double sse = 0.0;
  bool splittable = false;
};

Node make_node(const Dataset& data, std::vector<std::uint32_t> rows) {
  Node n;
  n.rows = std::move(rows);
  n.center = centroid(data, n.rows);
  detail::NeumaierSum s;
  for (std::uint32_t r : n.rows) s.add(sq_euclidean(data.point(r), n.center));
  n.sse = s.value();
  const auto first = data.point(n.rows.front());
  for (std::uint32_t r : n.rows)
    if (!points_equal(data.point(r), first)) {
      n.splittable = true;
      break;
    }
  return n;
}

// Within-cluster sum of squared deviations per attribute (variance up to a
// common factor); argmax picks the split axis, ties to the lowest index.
std::size_t max_variance_axis(const Dataset& data, const Node& node) {
  const std::size_t d = data.dims();
  std::vector<detail::NeumaierSum> ss(d);
  for (std::uint32_t r : node.rows) {
    const auto p = data.point(r);
    for (std::size_t c = 0; c < d; ++c) {
      const double delta = p[c] - node.center[c];
      ss[c].add(delta * delta);
    }
  }
  std::size_t axis = 0;
  double best = ss[0].value();
  for (std::size_t c = 1; c < d; ++c) {
    const double v = ss[c].value();
    if (v > best) {
      best = v;
      axis = c;
    }
  }
  return axis;
}

std::vector<double> covariance(const Dataset& data, const Node& node) {
  const std::size_t d = data.dims();
  std::vector<detail::NeumaierSum> acc(d * d);
  for (std::uint32_t r : node.rows) {
    const auto p = data.point(r);
    for (std::size_t i = 0; i < d; ++i) {
      const double di = p[i] - node.center[i];
      for (std::size_t j = i; j < d; ++j) acc[i * d + j].add(di * (p[j] - node.center[j]));
    }
  }
  std::vector<double> cov(d * d);
  const double inv = 1.0 / static_cast<double>(node.rows.size());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const double v = acc[i * d + j].value() * inv;
      cov[i * d + j] = v;
      cov[j * d + i] = v;
    }
  return cov;
}

DivisiveTrace divisive_init(const Dataset& data, std::size_t k, bool use_pca) {
  const char* method = use_pca ? "pp" : "vp";
  check_k(data, k, method);

  std::vector<Node> nodes;
  nodes.push_back(make_node(
      data, {data.canonical_order().begin(), data.canonical_order().end()}));

  DivisiveTrace trace;
  while (nodes.size() < k) {
    std::vector<ClusterSplitInfo> infos;
    infos.reserve(nodes.size());
    for (const Node& n : nodes) infos.push_back({n.sse, n.splittable});
    std::size_t idx;
    try {
      idx = select_split_cluster(infos);
    } catch (const std::invalid_argument&) {
      fail_distinct(method);
    }
    Node& node = nodes[idx];

    std::optional<std::size_t> axis;
    std::vector<double> dir;
    if (use_pca) {
      auto v = principal_eigenvector(covariance(data, node), data.dims());
      if (v) {
        dir = std::move(*v);
      } else {
        axis = max_variance_axis(data, node);  // deterministic fallback
      }
    } else {
      axis = max_variance_axis(data, node);
    }
    if (axis) {
      dir.assign(data.dims(), 0.0);
      dir[*axis] = 1.0;
    }

    auto project = [&](std::uint32_t r) {
      const auto p = data.point(r);
      double s = 0.0;
      for (std::size_t c = 0; c < data.dims(); ++c) s += dir[c] * p[c];
      return s;
    };
    double threshold = 0.0;
    for (std::size_t c = 0; c < data.dims(); ++c) threshold += dir[c] * node.center[c];

    std::vector<std::uint32_t> left, right;
    for (std::uint32_t r : node.rows)
      (project(r) <= threshold ? left : right).push_back(r);

    if (left.empty() || right.empty()) {
      // All members landed on one side (rounding corner); this cluster
      // cannot be split, try the next candidate.
      node.splittable = false;
      continue;
    }

    SplitStep step;
    step.cluster = idx;
    step.axis = axis;
    step.direction = dir;
    step.threshold = threshold;
    step.cluster_sse = node.sse;
    step.left_rows = left;
    step.right_rows = right;
    trace.steps.push_back(std::move(step));

    Node right_node = make_node(data, std::move(right));
    nodes[idx] = make_node(data, std::move(left));
    nodes.push_back(std::move(right_node));
  }

  trace.centers.dims = data.dims();
  trace.centers.method = method;
  for (const Node& n : nodes)
    trace.centers.values.insert(trace.centers.values.end(), n.center.begin(), n.center.end());
  return trace;
}

}  // namespace

Centers var_part_init(const Dataset& data, std::size_t k) {
  return divisive_init(data, k, false).centers;
}

DivisiveTrace var_part_init_traced(const Dataset& data, std::size_t k) {
  return divisive_init(data, k, false);
}

Centers pca_part_init(const Dataset& data, std::size_t k) {
  return divisive_init(data, k, true).centers;
}

DivisiveTrace pca_part_init_traced(const Dataset& data, std::size_t k) {
  return divisive_init(data, k, true);
}

ProjectionPlan pick_projection_axes(const Dataset& data) {
  const std::size_t d = data.dims();
  if (d < 2)
    throw std::invalid_argument("pick_projection_axes: need at least two attributes");
  const AttributeStats st = attribute_stats(data);

  auto varies = [&](std::size_t c) { return st.max[c] > st.min[c]; };

  // Primary: largest |coefficient of variation|; a zero mean with spread
  // counts as infinite. Ties go to the lowest attribute index.
  std::size_t primary = npos;
  bool best_inf = false;
  double best_cv = -1.0;
  for (std::size_t c = 0; c < d; ++c) {
    if (!varies(c)) continue;
    if (st.mean[c] == 0.0) {
      if (!best_inf) {
        primary = c;
        best_inf = true;
      }
    } else if (!best_inf) {
      const double cv = std::abs(st.stddev[c] / st.mean[c]);
      if (primary == npos || cv > best_cv) {
        primary = c;
        best_cv = cv;
      }
    }
  }
  if (primary == npos)
    throw std::invalid_argument("pick_projection_axes: no varying attribute");

  // Secondary: the varying attribute least correlated with the primary —
  // smallest signed sum of standardized products, so a strong negative
  // correlation beats no correlation. Ties go to the lowest index.
  std::size_t secondary = npos;
  double best_corr = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    if (c == primary || !varies(c)) continue;
    detail::NeumaierSum s;
    for (std::uint32_t r : data.canonical_order()) {
      const auto p = data.point(r);
      const double z1 = (p[primary] - st.mean[primary]) / st.stddev[primary];
      const double zc = (p[c] - st.mean[c]) / st.stddev[c];
      s.add(z1 * zc);
    }
    const double corr = s.value();
    if (secondary == npos || corr < best_corr) {
      secondary = c;
      best_corr = corr;
    }
  }
  if (secondary == npos)
    throw std::invalid_argument("pick_projection_axes: need two varying attributes");

  ProjectionPlan plan;
  plan.primary = primary;
  plan.secondary = secondary;
  plan.projected.resize(data.size() * 2);
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto p = data.point(r);
    plan.projected[r * 2] = p[primary];
    plan.projected[r * 2 + 1] = p[secondary];
  }
  return plan;
}

Centers maxisum_init(const Dataset& data, std::size_t k, bool projected) {
  const char* method = projected ? "ms" : "ms+";
  check_k(data, k, method);
  const std::size_t n = data.size();

  // Selection runs on the working view Y: the 2-attribute projection for
  // "ms", the full points for "ms+". Returned centers are full points.
  std::vector<double> proj;
  std::size_t ydims = data.dims();
  if (projected) {
    proj = pick_projection_axes(data).projected;
    ydims = 2;
  }
  auto y = [&](std::size_t r) -> std::span<const double> {
    if (projected) return {proj.data() + r * 2, 2};
    return data.point(r);
  };

  std::vector<double> ybar(ydims);
  {
    std::vector<detail::NeumaierSum> sums(ydims);
    for (std::uint32_t r : data.canonical_order())
      for (std::size_t c = 0; c < ydims; ++c) sums[c].add(y(r)[c]);
    for (std::size_t c = 0; c < ydims; ++c)
      ybar[c] = sums[c].value() / static_cast<double>(n);
  }

  std::vector<double> score(n);
  for (std::size_t j = 0; j < n; ++j) score[j] = sq_euclidean(y(j), ybar);

  std::vector<char> excluded(n, 0);
  std::vector<double> cumulative(n, 0.0);
  Centers c;
  c.dims = data.dims();
  c.method = method;

  for (std::size_t i = 0; i < k; ++i) {
    const std::vector<double>& s = (i == 0) ? score : cumulative;
    std::size_t best = npos;
    for (std::size_t j = 0; j < n; ++j) {
      if (excluded[j]) continue;
      if (best == npos || s[j] > s[best]) {
        best = j;
      } else if (s[j] == s[best]) {
        // Ties: lexicographically smallest in the working view, then in
        // the original space.
        if (lex_less(y(j), y(best)) ||
            (points_equal(y(j), y(best)) && lex_less(data.point(j), data.point(best))))
          best = j;
      }
    }
    if (best == npos) fail_distinct(method);

    const auto chosen = data.point(best);
    c.values.insert(c.values.end(), chosen.begin(), chosen.end());
    for (std::size_t j = 0; j < n; ++j) {
      if (!excluded[j] && points_equal(data.point(j), chosen)) excluded[j] = 1;
      cumulative[j] += std::sqrt(sq_euclidean(y(j), y(best)));
    }
  }
  return c;
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names = {"mm", "kk", "vp", "pp", "ms", "ms+"};
  return names;
}

bool is_method(std::string_view method) {
  const auto& names = method_names();
  return std::find(names.begin(), names.end(), method) != names.end();
}

Centers init_by_name(const Dataset& data, std::string_view method, std::size_t k) {
  if (method == "mm") return maximin_init(data, k);
  if (method == "kk") return katsavounidis_init(data, k);
  if (method == "vp") return var_part_init(data, k);
  if (method == "pp") return pca_part_init(data, k);
  if (method == "ms") return maxisum_init(data, k, true);
  if (method == "ms+") return maxisum_init(data, k, false);
  throw std::invalid_argument("unknown method '" + std::string(method) + "'");
}

}  // namespace kminit
