#include "kminit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace kminit {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string converged_name(ConvergedBy c) {
  return c == ConvergedBy::epsilon ? "epsilon" : "max_iterations";
}

ConvergedBy converged_from(const std::string& s) {
  if (s == "epsilon") return ConvergedBy::epsilon;
  if (s == "max_iterations") return ConvergedBy::max_iterations;
  throw std::runtime_error("report: bad converged_by '" + s + "'");
}

// 6 significant digits, the precision used by the text reports.
std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> canonical_methods(const std::vector<std::string>& methods) {
  if (methods.empty()) throw std::invalid_argument("bench: no methods given");
  const auto& names = method_names();
  std::vector<std::string> out;
  for (const std::string& name : names)
    if (std::find(methods.begin(), methods.end(), name) != methods.end())
      out.push_back(name);
  for (const std::string& m : methods)
    if (!is_method(m)) throw std::invalid_argument("bench: unknown method '" + m + "'");
  return out;
}

struct StatRow {
  const char* label;
  double SummaryStats::* field;
};
constexpr StatRow kStatRows[] = {
    {"min", &SummaryStats::min},       {"q1", &SummaryStats::q1},
    {"median", &SummaryStats::median}, {"q3", &SummaryStats::q3},
    {"max", &SummaryStats::max},       {"mean", &SummaryStats::mean},
};

std::string emit_csv(const BenchReport& rep) {
  std::string out = "dataset,method,K,IS,FS,NI,IS_pct,FS_pct,converged_by\n";
  for (const BenchCell& c : rep.cells) {
    out += csv_escape(c.dataset) + ',' + c.method + ',';
    if (c.ok()) {
      out += std::to_string(c.k) + ',' + fmt6(c.initial_sse) + ',' + fmt6(c.final_sse) + ',' +
             std::to_string(c.iterations) + ',' +
             (std::isnan(c.is_pct) ? "" : fmt6(c.is_pct)) + ',' +
             (std::isnan(c.fs_pct) ? "" : fmt6(c.fs_pct)) + ',' + converged_name(c.converged_by);
    } else {
      out += c.k > 0 ? std::to_string(c.k) : "";
      out += ",,,,,," + csv_escape("error: " + c.error);
    }
    out += '\n';
  }
  return out;
}

std::string emit_markdown(const BenchReport& rep) {
  std::ostringstream out;
  out << "# k-means initialization benchmark\n\n";
  out << "- normalization: " << (rep.normalized ? "min-max to [0,1]" : "off") << "\n";
  out << "- epsilon: " << fmt6(rep.kmeans.epsilon) << "\n";
  out << "- max iterations: " << rep.kmeans.max_iterations << "\n";

  // Group cells by dataset, preserving run order.
  std::vector<std::string> datasets;
  for (const BenchCell& c : rep.cells)
    if (std::find(datasets.begin(), datasets.end(), c.dataset) == datasets.end())
      datasets.push_back(c.dataset);
  auto cell_of = [&](const std::string& ds, const std::string& m) -> const BenchCell* {
    for (const BenchCell& c : rep.cells)
      if (c.dataset == ds && c.method == m) return &c;
    return nullptr;
  };

  auto table = [&](const char* title, auto value) {
    out << "\n## " << title << "\n\n| dataset |";
    for (const auto& m : rep.methods) out << ' ' << m << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < rep.methods.size(); ++i) out << "---|";
    out << '\n';
    for (const auto& ds : datasets) {
      out << "| " << ds << " |";
      for (const auto& m : rep.methods) {
        const BenchCell* c = cell_of(ds, m);
        out << ' ' << (c && c->ok() ? value(*c) : std::string("-")) << " |";
      }
      out << '\n';
    }
  };

  table("Initial SSE", [](const BenchCell& c) { return fmt6(c.initial_sse); });
  table("Final SSE", [](const BenchCell& c) { return fmt6(c.final_sse); });
  table("Iterations", [](const BenchCell& c) {
    return std::to_string(c.iterations) +
           (c.converged_by == ConvergedBy::max_iterations ? "*" : "");
  });
  out << "\n(*: stopped at the iteration cap)\n";

  if (!rep.summaries.empty()) {
    auto summary_table = [&](const char* title, SummaryStats MethodSummary::* block) {
      out << "\n## " << title << "\n\n| statistic |";
      for (const auto& s : rep.summaries) out << ' ' << s.method << " |";
      out << "\n|---|";
      for (std::size_t i = 0; i < rep.summaries.size(); ++i) out << "---|";
      out << '\n';
      for (const StatRow& row : kStatRows) {
        out << "| " << row.label << " |";
        for (const auto& s : rep.summaries) out << ' ' << fmt6((s.*block).*(row.field)) << " |";
        out << '\n';
      }
    };
    summary_table("Initial SSE, % of worst", &MethodSummary::is_pct);
    summary_table("Final SSE, % of worst", &MethodSummary::fs_pct);
    summary_table("Iterations summary", &MethodSummary::iterations);
  }

  const bool failures =
      std::any_of(rep.cells.begin(), rep.cells.end(), [](const BenchCell& c) { return !c.ok(); });
  if (failures) {
    out << "\n## Failures\n\n";
    for (const BenchCell& c : rep.cells)
      if (!c.ok()) out << "- " << c.dataset << " / " << c.method << ": " << c.error << "\n";
  }
  return std::move(out).str();
}

ordered_json summary_json(const SummaryStats& st) {
  ordered_json j;
  for (const StatRow& row : kStatRows) j[row.label] = st.*(row.field);
  return j;
}

SummaryStats summary_from_json(const ordered_json& j) {
  SummaryStats st;
  for (const StatRow& row : kStatRows) st.*(row.field) = j.at(row.label).get<double>();
  return st;
}

std::string emit_json(const BenchReport& rep) {
  ordered_json j;
  j["schema"] = "kminit.bench/1";
  j["normalized"] = rep.normalized;
  j["epsilon"] = rep.kmeans.epsilon;
  j["max_iterations"] = rep.kmeans.max_iterations;
  j["methods"] = rep.methods;
  j["cells"] = ordered_json::array();
  for (const BenchCell& c : rep.cells) {
    ordered_json jc;
    jc["dataset"] = c.dataset;
    jc["method"] = c.method;
    jc["k"] = c.k;
    if (c.ok()) {
      jc["initial_sse"] = c.initial_sse;
      jc["final_sse"] = c.final_sse;
      jc["iterations"] = c.iterations;
      jc["converged_by"] = converged_name(c.converged_by);
      if (std::isnan(c.is_pct))
        jc["is_pct"] = nullptr;
      else
        jc["is_pct"] = c.is_pct;
      if (std::isnan(c.fs_pct))
        jc["fs_pct"] = nullptr;
      else
        jc["fs_pct"] = c.fs_pct;
    } else {
      jc["error"] = c.error;
    }
    j["cells"].push_back(std::move(jc));
  }
  j["summaries"] = ordered_json::array();
  for (const MethodSummary& s : rep.summaries) {
    ordered_json js;
    js["method"] = s.method;
    js["cells"] = s.cells;
    js["is_pct"] = summary_json(s.is_pct);
    js["fs_pct"] = summary_json(s.fs_pct);
    js["iterations"] = summary_json(s.iterations);
    j["summaries"].push_back(std::move(js));
  }
  return j.dump(2) + "\n";
}

}  // namespace

BenchConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }

  static const char* known[] = {"datasets", "methods",   "epsilon", "max_iterations",
                                "normalize", "format",   "out"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return it.key() == k; }) == std::end(known))
      throw std::runtime_error("config: unknown key '" + it.key() + "'");
  }

  BenchConfig cfg;
  try {
    if (!j.contains("datasets") || !j["datasets"].is_array() || j["datasets"].empty())
      throw std::runtime_error("config: 'datasets' must be a nonempty array");
    for (const auto& jd : j["datasets"]) {
      DatasetSpec spec;
      if (jd.is_string()) {
        spec.path = jd.get<std::string>();
      } else {
        static const char* dknown[] = {"path", "name", "class_column", "k"};
        for (auto it = jd.begin(); it != jd.end(); ++it)
          if (std::find_if(std::begin(dknown), std::end(dknown), [&](const char* k) {
                return it.key() == k;
              }) == std::end(dknown))
            throw std::runtime_error("config: unknown dataset key '" + it.key() + "'");
        spec.path = jd.at("path").get<std::string>();
        if (jd.contains("name")) spec.name = jd["name"].get<std::string>();
        if (jd.contains("class_column"))
          spec.class_column = jd["class_column"].get<std::size_t>();
        if (jd.contains("k")) spec.k = jd["k"].get<std::size_t>();
      }
      // Relative dataset paths are resolved against the config file.
      if (spec.path.is_relative()) spec.path = path.parent_path() / spec.path;
      cfg.datasets.push_back(std::move(spec));
    }
    if (j.contains("methods")) cfg.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("epsilon")) cfg.kmeans.epsilon = j["epsilon"].get<double>();
    if (j.contains("max_iterations"))
      cfg.kmeans.max_iterations = j["max_iterations"].get<std::size_t>();
    if (j.contains("normalize")) cfg.normalize = j["normalize"].get<bool>();
    if (j.contains("format")) {
      const auto f = j["format"].get<std::string>();
      if (f == "csv")
        cfg.format = ReportFormat::csv;
      else if (f == "md" || f == "markdown")
        cfg.format = ReportFormat::markdown;
      else if (f == "json")
        cfg.format = ReportFormat::json;
      else
        throw std::runtime_error("config: unknown format '" + f + "'");
    }
    if (j.contains("out")) cfg.out = std::filesystem::path(j["out"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }
  return cfg;
}

BenchReport run_benchmark(const BenchConfig& config) {
  if (config.datasets.empty()) throw std::invalid_argument("bench: no datasets given");
  if (config.kmeans.max_iterations == 0)
    throw std::invalid_argument("bench: max_iterations must be >= 1");
  if (!(config.kmeans.epsilon >= 0.0) || !std::isfinite(config.kmeans.epsilon))
    throw std::invalid_argument("bench: epsilon must be finite and >= 0");

  BenchReport rep;
  rep.methods = canonical_methods(config.methods);
  rep.normalized = config.normalize;
  rep.kmeans = config.kmeans;

  for (const DatasetSpec& spec : config.datasets) {
    const std::string dname =
        spec.name.empty() ? spec.path.stem().string() : spec.name;
    std::vector<BenchCell> cells(rep.methods.size());
    for (std::size_t m = 0; m < rep.methods.size(); ++m) {
      cells[m].dataset = dname;
      cells[m].method = rep.methods[m];
      cells[m].k = spec.k.value_or(0);
      cells[m].is_pct = kNaN;
      cells[m].fs_pct = kNaN;
    }

    try {
      LoadOptions lo;
      lo.class_column = spec.class_column;
      Dataset raw = load_csv(spec.path, lo);
      const std::size_t k = spec.k ? *spec.k : raw.class_count();
      if (k == 0)
        throw std::runtime_error("k not given and dataset '" + dname + "' has no class column");
      const Dataset data = config.normalize ? minmax_normalize(raw) : std::move(raw);

      for (std::size_t m = 0; m < rep.methods.size(); ++m) {
        BenchCell& cell = cells[m];
        cell.k = k;
        try {
          const Centers seeds = init_by_name(data, rep.methods[m], k);
          cell.initial_sse = sse(data, seeds);
          const RunResult run = kmeans(data, seeds, config.kmeans);
          cell.final_sse = run.sse_trace.back();
          cell.iterations = run.iterations;
          cell.converged_by = run.converged_by;
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
      }
    } catch (const std::exception& e) {
      for (BenchCell& cell : cells) cell.error = e.what();
    }

    // Worst-relative percentages across this dataset's successful cells.
    std::vector<std::size_t> ok;
    for (std::size_t m = 0; m < cells.size(); ++m)
      if (cells[m].ok()) ok.push_back(m);
    if (!ok.empty()) {
      std::vector<double> is, fs;
      for (std::size_t m : ok) {
        is.push_back(cells[m].initial_sse);
        fs.push_back(cells[m].final_sse);
      }
      try {
        const auto r = normalize_vs_worst(is);
        for (std::size_t i = 0; i < ok.size(); ++i) cells[ok[i]].is_pct = 100.0 * r[i];
      } catch (const std::invalid_argument&) {
        // all-zero column: leave NaN
      }
      try {
        const auto r = normalize_vs_worst(fs);
        for (std::size_t i = 0; i < ok.size(); ++i) cells[ok[i]].fs_pct = 100.0 * r[i];
      } catch (const std::invalid_argument&) {
      }
    }

    rep.cells.insert(rep.cells.end(), std::make_move_iterator(cells.begin()),
                     std::make_move_iterator(cells.end()));
  }

  for (const std::string& m : rep.methods) {
    std::vector<double> is, fs, ni;
    std::size_t count = 0;
    for (const BenchCell& c : rep.cells) {
      if (c.method != m || !c.ok()) continue;
      ++count;
      if (!std::isnan(c.is_pct)) is.push_back(c.is_pct);
      if (!std::isnan(c.fs_pct)) fs.push_back(c.fs_pct);
      ni.push_back(static_cast<double>(c.iterations));
    }
    if (count == 0) continue;
    MethodSummary s;
    s.method = m;
    s.cells = count;
    if (!is.empty()) s.is_pct = five_number_summary(is);
    if (!fs.empty()) s.fs_pct = five_number_summary(fs);
    s.iterations = five_number_summary(ni);
    rep.summaries.push_back(std::move(s));
  }
  return rep;
}

std::string emit_report(const BenchReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv:
      return emit_csv(report);
    case ReportFormat::markdown:
      return emit_markdown(report);
    case ReportFormat::json:
      return emit_json(report);
  }
  throw std::invalid_argument("emit_report: unsupported format");
}

BenchReport parse_report_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("report: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != "kminit.bench/1")
      throw std::runtime_error("report: unknown schema");
    BenchReport rep;
    rep.normalized = j.at("normalized").get<bool>();
    rep.kmeans.epsilon = j.at("epsilon").get<double>();
    rep.kmeans.max_iterations = j.at("max_iterations").get<std::size_t>();
    rep.methods = j.at("methods").get<std::vector<std::string>>();
    for (const auto& jc : j.at("cells")) {
      BenchCell c;
      c.dataset = jc.at("dataset").get<std::string>();
      c.method = jc.at("method").get<std::string>();
      c.k = jc.at("k").get<std::size_t>();
      c.is_pct = kNaN;
      c.fs_pct = kNaN;
      if (jc.contains("error")) {
        c.error = jc["error"].get<std::string>();
      } else {
        c.initial_sse = jc.at("initial_sse").get<double>();
        c.final_sse = jc.at("final_sse").get<double>();
        c.iterations = jc.at("iterations").get<std::size_t>();
        c.converged_by = converged_from(jc.at("converged_by").get<std::string>());
        if (!jc.at("is_pct").is_null()) c.is_pct = jc["is_pct"].get<double>();
        if (!jc.at("fs_pct").is_null()) c.fs_pct = jc["fs_pct"].get<double>();
      }
      rep.cells.push_back(std::move(c));
    }
    for (const auto& js : j.at("summaries")) {
      MethodSummary s;
      s.method = js.at("method").get<std::string>();
      s.cells = js.at("cells").get<std::size_t>();
      s.is_pct = summary_from_json(js.at("is_pct"));
      s.fs_pct = summary_from_json(js.at("fs_pct"));
      s.iterations = summary_from_json(js.at("iterations"));
      rep.summaries.push_back(std::move(s));
    }
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("report: ") + e.what());
  }
}

}  // namespace kminit
