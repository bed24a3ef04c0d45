#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "kminit/bench.hpp"

namespace {

// --data value: <path>[,class=<col>][,k=<K>]
kminit::DatasetSpec parse_data_spec(const std::string& arg) {
  kminit::DatasetSpec spec;
  std::size_t pos = arg.find(',');
  spec.path = arg.substr(0, pos);
  if (spec.path.empty()) throw CLI::ValidationError("--data", "empty path");
  while (pos != std::string::npos) {
    const std::size_t next = arg.find(',', pos + 1);
    const std::string part = arg.substr(pos + 1, next - pos - 1);
    const std::size_t eq = part.find('=');
    const std::string key = part.substr(0, eq);
    const std::string val = eq == std::string::npos ? "" : part.substr(eq + 1);
    try {
      if (key == "class")
        spec.class_column = std::stoul(val);
      else if (key == "k")
        spec.k = std::stoul(val);
      else if (key == "name")
        spec.name = val;
      else
        throw CLI::ValidationError("--data", "unknown option '" + key + "'");
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--data", "bad value in '" + part + "'");
    }
    pos = next;
  }
  return spec;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = s.find(',', start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic k-means initialization benchmark"};

  std::string config_path;
  std::vector<std::string> data_args;
  std::string methods_arg;
  double epsilon = 1e-6;
  std::size_t max_iters = 100;
  bool no_normalize = false;
  std::string format_arg = "csv";
  std::string out_path;

  auto* opt_config =
      app.add_option("--config", config_path, "JSON config file (same fields as the flags)");
  auto* opt_data = app.add_option(
      "--data", data_args, "dataset as <path>[,class=<col>][,k=<K>][,name=<id>]; repeatable");
  auto* opt_methods =
      app.add_option("--methods", methods_arg, "comma list of mm,kk,vp,pp,ms,ms+ (default: all)");
  auto* opt_eps = app.add_option("--epsilon", epsilon, "relative SSE improvement threshold")
                      ->check(CLI::NonNegativeNumber);
  auto* opt_iters =
      app.add_option("--max-iters", max_iters, "iteration cap")->check(CLI::PositiveNumber);
  auto* opt_nonorm =
      app.add_flag("--no-normalize", no_normalize, "cluster raw values (skip min-max scaling)");
  auto* opt_format = app.add_option("--format", format_arg, "report format: csv, md, json")
                         ->check(CLI::IsMember({"csv", "md", "markdown", "json"}));
  auto* opt_out = app.add_option("--out", out_path, "write the report here instead of stdout");
  opt_config->excludes(opt_data);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 2;
  }

  kminit::BenchConfig cfg;
  try {
    if (opt_config->count() > 0) cfg = kminit::load_config(config_path);
    for (const std::string& d : data_args) cfg.datasets.push_back(parse_data_spec(d));
    if (opt_methods->count() > 0) cfg.methods = split_list(methods_arg);
    if (opt_eps->count() > 0) cfg.kmeans.epsilon = epsilon;
    if (opt_iters->count() > 0) cfg.kmeans.max_iterations = max_iters;
    if (opt_nonorm->count() > 0) cfg.normalize = !no_normalize;
    if (opt_format->count() > 0 || opt_config->count() == 0) {
      if (format_arg == "csv")
        cfg.format = kminit::ReportFormat::csv;
      else if (format_arg == "md" || format_arg == "markdown")
        cfg.format = kminit::ReportFormat::markdown;
      else
        cfg.format = kminit::ReportFormat::json;
    }
    if (opt_out->count() > 0) cfg.out = out_path;
    if (cfg.datasets.empty())
      throw std::invalid_argument("no datasets given (use --data or --config)");
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return 2;
  }

  kminit::BenchReport report;
  try {
    report = kminit::run_benchmark(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return 2;
  }

  const std::string text = kminit::emit_report(report, cfg.format);
  if (cfg.out) {
    std::ofstream out(*cfg.out);
    out << text;
    if (!out) {
      std::cerr << "bench: cannot write " << cfg.out->string() << "\n";
      return 2;
    }
  } else {
    std::cout << text;
  }

  int failed = 0;
  for (const auto& c : report.cells)
    if (!c.ok()) {
      std::cerr << "bench: " << c.dataset << "/" << c.method << ": " << c.error << "\n";
      ++failed;
    }
  return failed > 0 ? 1 : 0;
}
