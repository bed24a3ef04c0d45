#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kminit {

// What to do with rows containing missing values ('?' or empty fields).
enum class MissingPolicy { drop, strict };

struct LoadOptions {
  char delimiter = ',';
  // Unset: auto-detect (first line is a header iff any attribute field does
  // not parse as a number).
  std::optional<bool> has_header{};
  // Zero-based index of a class label column, excluded from the attributes.
  std::optional<std::size_t> class_column{};
  MissingPolicy missing_policy = MissingPolicy::drop;
};

// Per-attribute statistics; stddev is the sample standard deviation (N-1).
struct AttributeStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<double> min;
  std::vector<double> max;
};

// Immutable N x D table of finite doubles with optional class ids.
//
// On construction the rows are sorted lexicographically (by value) into
// canonical_order(); aggregations throughout the library iterate rows in
// that order, which makes every computed quantity independent of the row
// order of the input file.
class Dataset {
 public:
  Dataset(std::vector<double> values_rowmajor, std::size_t dims,
          std::vector<std::string> attribute_names = {},
          std::vector<int> class_ids = {},
          std::vector<std::string> class_names = {},
          std::string name = "");

  std::size_t size() const { return rows_; }
  std::size_t dims() const { return dims_; }
  std::span<const double> point(std::size_t row) const {
    return {values_.data() + row * dims_, dims_};
  }
  const std::vector<double>& values() const { return values_; }

  const std::vector<std::string>& attribute_names() const { return attribute_names_; }
  bool has_classes() const { return !class_ids_.empty(); }
  // Class id per row (0-based, first appearance order); empty when unlabeled.
  const std::vector<int>& class_ids() const { return class_ids_; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  // Number of distinct class labels; 0 when unlabeled.
  std::size_t class_count() const { return class_names_.size(); }

  const std::string& name() const { return name_; }

  // Row indices sorted lexicographically by point value; the canonical
  // iteration order for sums.
  std::span<const std::uint32_t> canonical_order() const { return canonical_; }

 private:
  std::vector<double> values_;
  std::size_t rows_ = 0;
  std::size_t dims_ = 0;
  std::vector<std::string> attribute_names_;
  std::vector<int> class_ids_;
  std::vector<std::string> class_names_;
  std::string name_;
  std::vector<std::uint32_t> canonical_;
};

// Loads a numeric CSV. Throws std::runtime_error on unreadable files,
// ragged rows, unparseable or non-finite values, and (under
// MissingPolicy::strict) missing values; diagnostics carry line/column.
Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options = {});

// Rescales each attribute to [0,1] by min-max; constant attributes map to 0.
// Applying it twice gives the identical dataset.
Dataset minmax_normalize(const Dataset& data);

AttributeStats attribute_stats(const Dataset& data);

// Squared Euclidean distance; throws std::invalid_argument on dimension
// mismatch.
double sq_euclidean(std::span<const double> a, std::span<const double> b);

// Mean point of the whole dataset.
std::vector<double> centroid(const Dataset& data);
// Mean point of a subset; summed in the order given (callers pass rows
// already in canonical order). Throws std::invalid_argument when empty.
std::vector<double> centroid(const Dataset& data, std::span<const std::uint32_t> rows);

// True if a < b lexicographically; the value-based tie-break used by every
// argmax/argmin selection in the library.
bool lex_less(std::span<const double> a, std::span<const double> b);

}  // namespace kminit
