#pragma once

#include "kminit/metrics.hpp"

namespace kminit {

struct DatasetSpec {
  std::filesystem::path path;
  std::string name;                          // empty: use the file stem
  std::optional<std::size_t> class_column;   // zero-based
  std::optional<std::size_t> k;              // default: number of classes
};

enum class ReportFormat { csv, markdown, json };

struct BenchConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<std::string> methods = method_names();
  KMeansConfig kmeans;
  bool normalize = true;  // min-max normalize before clustering
  ReportFormat format = ReportFormat::csv;
  std::optional<std::filesystem::path> out;
};

// One dataset x method result. A failed cell (load error, K out of range,
// ...) carries the message in `error` and NaN/zero elsewhere.
struct BenchCell {
  std::string dataset;
  std::string method;
  std::size_t k = 0;
  double initial_sse = 0.0;
  double final_sse = 0.0;
  std::size_t iterations = 0;
  ConvergedBy converged_by = ConvergedBy::epsilon;
  // Percent of the worst (largest) value among the dataset's successful
  // cells, in (0, 100]; NaN when not computable.
  double is_pct = 0.0;
  double fs_pct = 0.0;
  std::string error;

  bool ok() const { return error.empty(); }
};

struct MethodSummary {
  std::string method;
  std::size_t cells = 0;  // successful cells aggregated
  SummaryStats is_pct;
  SummaryStats fs_pct;
  SummaryStats iterations;
};

struct BenchReport {
  std::vector<std::string> methods;  // canonical order, deduplicated
  bool normalized = true;
  KMeansConfig kmeans;
  std::vector<BenchCell> cells;      // dataset-major, method-minor
  std::vector<MethodSummary> summaries;
};

// Reads a JSON config file; same fields as the CLI flags. Throws
// std::runtime_error on unreadable files or malformed/unknown fields.
BenchConfig load_config(const std::filesystem::path& path);

// Runs every dataset x method cell. Per-cell failures are recorded in the
// report; invalid configs (no datasets, unknown method) throw
// std::invalid_argument.
BenchReport run_benchmark(const BenchConfig& config);

std::string emit_report(const BenchReport& report, ReportFormat format);

// Inverse of emit_report for the JSON format (field-for-field).
BenchReport parse_report_json(const std::string& text);

}  // namespace kminit
