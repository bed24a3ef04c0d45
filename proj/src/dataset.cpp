#include "kminit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "kminit/detail/neumaier.hpp"

namespace kminit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// One CSV record -> fields. Double quotes wrap a field, "" escapes a quote.
std::vector<std::string> split_record(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  for (auto& f : fields) f = std::string(trim(f));
  return fields;
}

bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = first + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool is_missing(std::string_view s) { return s.empty() || s == "?"; }

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line,
                       const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

bool lex_less(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Dataset::Dataset(std::vector<double> values_rowmajor, std::size_t dims,
                 std::vector<std::string> attribute_names, std::vector<int> class_ids,
                 std::vector<std::string> class_names, std::string name)
    : values_(std::move(values_rowmajor)),
      dims_(dims),
      attribute_names_(std::move(attribute_names)),
      class_ids_(std::move(class_ids)),
      class_names_(std::move(class_names)),
      name_(std::move(name)) {
  if (dims_ == 0) throw std::invalid_argument("dataset: dims must be >= 1");
  if (values_.size() % dims_ != 0)
    throw std::invalid_argument("dataset: value count is not a multiple of dims");
  rows_ = values_.size() / dims_;
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("dataset: non-finite value");
  if (!class_ids_.empty() && class_ids_.size() != rows_)
    throw std::invalid_argument("dataset: class id count does not match row count");
  if (attribute_names_.empty()) {
    attribute_names_.reserve(dims_);
    for (std::size_t d = 0; d < dims_; ++d) attribute_names_.push_back("a" + std::to_string(d));
  } else if (attribute_names_.size() != dims_) {
    throw std::invalid_argument("dataset: attribute name count does not match dims");
  }

  canonical_.resize(rows_);
  std::iota(canonical_.begin(), canonical_.end(), std::uint32_t{0});
  std::sort(canonical_.begin(), canonical_.end(), [this](std::uint32_t a, std::uint32_t b) {
    const auto pa = point(a);
    const auto pb = point(b);
    if (lex_less(pa, pb)) return true;
    if (lex_less(pb, pa)) return false;
    return a < b;  // identical rows: keep a total order
  });
}

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    records.push_back(split_record(line, options.delimiter));
    record_lines.push_back(lineno);
  }
  if (records.empty()) throw std::runtime_error(path.string() + ": no data");

  const std::size_t width = records.front().size();
  if (options.class_column && *options.class_column >= width)
    throw std::runtime_error(path.string() + ": class column " +
                             std::to_string(*options.class_column) + " out of range (" +
                             std::to_string(width) + " columns)");
  if (width == 1 && options.class_column)
    throw std::runtime_error(path.string() + ": no attribute columns left");

  // Header detection: the first record is a header iff any attribute field
  // is neither numeric nor a missing-value marker.
  bool header = false;
  if (options.has_header) {
    header = *options.has_header;
  } else {
    for (std::size_t c = 0; c < width; ++c) {
      if (options.class_column && c == *options.class_column) continue;
      double v;
      if (!is_missing(records.front()[c]) && !parse_double(records.front()[c], v)) {
        header = true;
        break;
      }
    }
  }

  std::vector<std::string> attr_names;
  std::size_t first_data = 0;
  if (header) {
    for (std::size_t c = 0; c < width; ++c) {
      if (options.class_column && c == *options.class_column) continue;
      attr_names.push_back(records.front()[c]);
    }
    first_data = 1;
  }

  const std::size_t dims = options.class_column ? width - 1 : width;
  std::vector<double> values;
  std::vector<int> class_ids;
  std::vector<std::string> class_names;
  std::unordered_map<std::string, int> class_map;

  for (std::size_t r = first_data; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::size_t lineno = record_lines[r];
    if (rec.size() != width)
      fail(path, lineno, "expected " + std::to_string(width) + " fields, got " +
                             std::to_string(rec.size()));

    std::vector<double> row;
    row.reserve(dims);
    bool missing = false;
    std::string missing_where;
    for (std::size_t c = 0; c < width && !missing; ++c) {
      if (options.class_column && c == *options.class_column) continue;
      const std::string& cell = rec[c];
      if (is_missing(cell)) {
        missing = true;
        missing_where = "column " + std::to_string(c + 1);
        continue;
      }
      double v;
      if (!parse_double(cell, v))
        fail(path, lineno, "column " + std::to_string(c + 1) + ": cannot parse '" + cell + "'");
      if (!std::isfinite(v))
        fail(path, lineno, "column " + std::to_string(c + 1) + ": non-finite value");
      row.push_back(v);
    }
    std::string label;
    if (options.class_column) {
      label = rec[*options.class_column];
      if (is_missing(label)) {
        missing = true;
        missing_where = "class column";
      }
    }
    if (missing) {
      if (options.missing_policy == MissingPolicy::strict)
        fail(path, lineno, missing_where + ": missing value");
      continue;  // drop the row
    }

    values.insert(values.end(), row.begin(), row.end());
    if (options.class_column) {
      auto [it, inserted] = class_map.try_emplace(label, static_cast<int>(class_names.size()));
      if (inserted) class_names.push_back(label);
      class_ids.push_back(it->second);
    }
  }

  if (values.empty()) throw std::runtime_error(path.string() + ": no usable data rows");
  return Dataset(std::move(values), dims, std::move(attr_names), std::move(class_ids),
                 std::move(class_names), path.stem().string());
}

AttributeStats attribute_stats(const Dataset& data) {
  const std::size_t n = data.size();
  const std::size_t d = data.dims();
  if (n == 0) throw std::invalid_argument("attribute_stats: empty dataset");

  AttributeStats st;
  st.mean.resize(d);
  st.stddev.assign(d, 0.0);
  st.min.assign(d, std::numeric_limits<double>::infinity());
  st.max.assign(d, -std::numeric_limits<double>::infinity());

  std::vector<detail::NeumaierSum> sums(d);
  for (std::uint32_t row : data.canonical_order()) {
    const auto p = data.point(row);
    for (std::size_t c = 0; c < d; ++c) {
      sums[c].add(p[c]);
      st.min[c] = std::min(st.min[c], p[c]);
      st.max[c] = std::max(st.max[c], p[c]);
    }
  }
  for (std::size_t c = 0; c < d; ++c) st.mean[c] = sums[c].value() / static_cast<double>(n);

  if (n >= 2) {
    std::vector<detail::NeumaierSum> sq(d);
    for (std::uint32_t row : data.canonical_order()) {
      const auto p = data.point(row);
      for (std::size_t c = 0; c < d; ++c) {
        const double delta = p[c] - st.mean[c];
        sq[c].add(delta * delta);
      }
    }
    for (std::size_t c = 0; c < d; ++c)
      st.stddev[c] = std::sqrt(sq[c].value() / static_cast<double>(n - 1));
  }
  return st;
}

Dataset minmax_normalize(const Dataset& data) {
  const AttributeStats st = attribute_stats(data);
  const std::size_t d = data.dims();
  std::vector<double> out(data.values().size());
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto p = data.point(r);
    for (std::size_t c = 0; c < d; ++c) {
      const double range = st.max[c] - st.min[c];
      out[r * d + c] = range > 0.0 ? (p[c] - st.min[c]) / range : 0.0;
    }
  }
  return Dataset(std::move(out), d, data.attribute_names(), data.class_ids(),
                 data.class_names(), data.name());
}

double sq_euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("sq_euclidean: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

std::vector<double> centroid(const Dataset& data) {
  return centroid(data, data.canonical_order());
}

std::vector<double> centroid(const Dataset& data, std::span<const std::uint32_t> rows) {
  if (rows.empty()) throw std::invalid_argument("centroid: empty point list");
  const std::size_t d = data.dims();
  std::vector<detail::NeumaierSum> sums(d);
  for (std::uint32_t row : rows) {
    const auto p = data.point(row);
    for (std::size_t c = 0; c < d; ++c) sums[c].add(p[c]);
  }
  std::vector<double> c(d);
  for (std::size_t i = 0; i < d; ++i) c[i] = sums[i].value() / static_cast<double>(rows.size());
  return c;
}

}  // namespace kminit
