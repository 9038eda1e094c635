#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "entdiff/config.hpp"
#include "entdiff/errors.hpp"
#include "entdiff/evaluation.hpp"
#include "entdiff/pipeline.hpp"
#include "entdiff/trafficgen.hpp"

namespace {

using namespace entdiff;

enum ExitCode : int { kOk = 0, kIoError = 1, kConfigError = 2, kDataError = 3, kInternalError = 4 };

/// Flag values; unset optionals leave the config file or default in place.
struct Flags {
  std::string config_file;
  bool config_dump = false;

  std::optional<std::string> measure;
  std::optional<double> q;
  std::optional<double> alpha;
  std::optional<std::int64_t> precision;
  std::optional<std::string> mode;
  std::optional<std::int64_t> unit_ms;
  std::optional<std::size_t> progression;
  std::optional<std::size_t> warmup_min;
  std::optional<std::string> check_mode;
  std::optional<std::size_t> cooldown;
  std::optional<std::uint64_t> sample_num;
  std::optional<std::uint64_t> sample_den;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> strategy;
  std::optional<std::size_t> long_depth;
  std::optional<std::int64_t> tolerance;
  std::optional<std::uint64_t> max_parse_errors;
};

void add_config_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config_file, "JSON config file (flags override it)");
  app.add_flag("--config-dump", f.config_dump, "Print the resolved configuration as JSON and exit");
  app.add_option("--measure", f.measure, "tsallis | shannon | renyi");
  app.add_option("--q", f.q, "Tsallis parameter (default 8 unsampled, 5 sampled)");
  app.add_option("--alpha", f.alpha, "Renyi parameter");
  app.add_option("--precision", f.precision, "Scale of integer Tsallis values");
  app.add_option("--mode", f.mode, "integer | real arithmetic");
  app.add_option("--unit-ms", f.unit_ms, "Window length in milliseconds");
  app.add_option("--progression", f.progression, "Entropy progression size P");
  app.add_option("--warmup-min", f.warmup_min, "Slopes required before signaling (default P)");
  app.add_option("--check-mode", f.check_mode, "algorithm1 | listing");
  app.add_option("--cooldown", f.cooldown, "Windows suppressed after a detection");
  app.add_option("--sample-num", f.sample_num, "Sampling ratio numerator");
  app.add_option("--sample-den", f.sample_den, "Sampling ratio denominator");
  app.add_option("--seed", f.seed, "Sampling seed");
  app.add_option("--max-parse-errors", f.max_parse_errors, "Malformed lines tolerated before failing");
}

template <typename T, typename U>
void overlay(T& target, const std::optional<U>& value) {
  if (value) target = static_cast<T>(*value);
}

RunConfig resolve(const Flags& f) {
  RunConfig config;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw IoError("cannot open config file " + f.config_file);
    nlohmann::json document;
    try {
      document = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(f.config_file + ": " + e.what());
    }
    apply_json(config, document);
  }
  if (f.measure) config.measure = parse_measure(*f.measure);
  if (f.q) config.q = *f.q;
  overlay(config.alpha, f.alpha);
  overlay(config.precision, f.precision);
  if (f.mode) config.mode = parse_mode(*f.mode);
  overlay(config.unit_ms, f.unit_ms);
  overlay(config.progression, f.progression);
  if (f.warmup_min) config.warmup_min = *f.warmup_min;
  if (f.check_mode) config.check_mode = parse_check_mode(*f.check_mode);
  overlay(config.cooldown_windows, f.cooldown);
  overlay(config.sample_num, f.sample_num);
  overlay(config.sample_den, f.sample_den);
  overlay(config.seed, f.seed);
  if (f.strategy) {
    config.all_strategies = *f.strategy == "all" || *f.strategy == "ALL";
    if (!config.all_strategies) config.strategy = parse_strategy(*f.strategy);
  }
  overlay(config.long_depth, f.long_depth);
  overlay(config.tolerance_windows, f.tolerance);
  overlay(config.max_parse_errors, f.max_parse_errors);
  config.validate();
  return config;
}

/// Output file or standard output for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw IoError("cannot open output file " + path);
  }

  std::ostream& stream() { return file_ ? *file_ : std::cout; }

  void close() {
    stream().flush();
    if (!stream()) throw IoError("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

void report_parse_error(const ParseError& e) { std::cerr << "warning: skipped line " << e.line() << ": " << e.what() << '\n'; }

int run_generate(const std::string& spec_path, const std::string& preset, std::optional<std::uint64_t> seed,
                 std::int64_t windows, const std::string& out_path, const std::string& truth_path) {
  ScenarioSpec spec;
  if (!spec_path.empty()) {
    auto in = open_input(spec_path);
    nlohmann::json document;
    try {
      document = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(spec_path + ": " + e.what());
    }
    spec = scenario_from_json(document);
  } else if (preset == "standard" || preset == "benign") {
    spec = standard_scenario(1, windows, preset == "standard");
  } else {
    throw ConfigError("generate needs --spec or --preset standard|benign");
  }
  if (seed) spec.seed = *seed;
  spec.validate();

  Output flows(out_path);
  std::optional<Output> truth_file;
  std::ostringstream discard;
  std::ostream* truth = &discard;
  if (!truth_path.empty()) truth = &truth_file.emplace(truth_path).stream();
  const auto records = generate(spec, flows.stream(), *truth);
  flows.close();
  if (truth_file) truth_file->close();
  std::cerr << fmt::format("records: {}\nattacks: {}\n", records, spec.attacks.size());
  return kOk;
}

int run_detect_command(const Flags& flags, const std::string& input, const std::string& out_path,
                       const std::string& series_path, bool quiet) {
  const auto config = resolve(flags);
  if (flags.config_dump) {
    std::cout << to_json(config).dump(2) << '\n';
    return kOk;
  }
  Output detections(out_path);
  std::optional<Output> series;
  DetectOutputs outputs{&detections.stream(), nullptr};
  if (!series_path.empty()) outputs.series = &series.emplace(series_path).stream();
  const auto result = run_detect(input, config, outputs, report_parse_error);
  detections.close();
  if (series) series->close();
  if (!quiet) {
    std::cerr << "measure: " << config.entropy_measure().name() << "\ncheck mode: " << to_string(config.check_mode)
              << '\n'
              << format_summary(result.summary);
  }
  return kOk;
}

int run_series_command(const Flags& flags, const std::string& input, const std::string& out_path, bool quiet) {
  const auto config = resolve(flags);
  if (flags.config_dump) {
    std::cout << to_json(config).dump(2) << '\n';
    return kOk;
  }
  Output series(out_path);
  const auto result = run_detect(input, config, DetectOutputs{nullptr, &series.stream()}, report_parse_error);
  series.close();
  if (!quiet) std::cerr << format_summary(result.summary);
  return kOk;
}

int run_baseline_command(const Flags& flags, const std::string& input, const std::string& out_path, bool quiet) {
  const auto config = resolve(flags);
  if (flags.config_dump) {
    std::cout << to_json(config).dump(2) << '\n';
    return kOk;
  }
  Output firings(out_path);
  const auto result = run_baseline(input, config, &firings.stream(), report_parse_error);
  firings.close();
  if (!quiet) {
    std::cerr << "measure: " << config.entropy_measure().name() << '\n';
    for (auto strategy : kAllStrategies) {
      std::cerr << fmt::format("{} firings: {}\n", to_string(strategy),
                               result.firings_ms[static_cast<std::size_t>(strategy) - 1].size());
    }
    std::cerr << format_summary(result.summary);
  }
  return kOk;
}

int run_eval(const std::string& detections_path, const std::string& truth_path, std::int64_t windows,
             std::int64_t tolerance, std::int64_t unit_ms, const std::string& format, const std::string& out_path) {
  if (format != "json" && format != "table") throw ConfigError("--format must be json or table");
  auto detections_in = open_input(detections_path);
  auto truth_in = open_input(truth_path);
  const auto starts = read_detection_starts(detections_in);
  const auto attacks = read_truth_csv(truth_in);
  const auto report = evaluate(starts, attacks, windows, unit_ms, tolerance);
  Output out(out_path);
  if (format == "json") {
    out.stream() << to_json(report).dump(2) << '\n';
  } else {
    out.stream() << format_table(report);
  }
  out.close();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-differential DoS detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", [] {
    nlohmann::ordered_json doc;
    doc["version"] = ENTDIFF_VERSION;
    doc["config"] = to_json(RunConfig{});
    return doc.dump(2);
  });

  Flags flags;
  std::string input = "-";
  std::string out_path = "-";
  std::string series_path;
  bool quiet = false;

  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic flow corpus and its ground truth");
  std::string spec_path;
  std::string preset;
  std::optional<std::uint64_t> gen_seed;
  std::int64_t gen_windows = 120;
  std::string truth_out;
  generate_cmd->add_option("--spec", spec_path, "Scenario JSON");
  generate_cmd->add_option("--preset", preset, "standard | benign")->excludes("--spec");
  generate_cmd->add_option("--windows", gen_windows, "Preset length in one-minute windows");
  generate_cmd->add_option("--seed", gen_seed, "Override the scenario seed");
  generate_cmd->add_option("--out", out_path, "Flow CSV ('-' for stdout)");
  generate_cmd->add_option("--truth", truth_out, "Ground-truth CSV");

  auto* detect_cmd = app.add_subcommand("detect", "Run the entropy-differential detector over a flow CSV");
  detect_cmd->add_option("input", input, "Flow CSV, optionally gzip ('-' for stdin)");
  detect_cmd->add_option("--out", out_path, "Detections as JSON lines ('-' for stdout)");
  detect_cmd->add_option("--series", series_path, "Per-window series CSV");
  detect_cmd->add_flag("--quiet", quiet, "Suppress the summary");
  add_config_flags(*detect_cmd, flags);

  auto* baseline_cmd = app.add_subcommand("baseline", "Run the threshold baseline strategies over a flow CSV");
  baseline_cmd->add_option("input", input, "Flow CSV, optionally gzip ('-' for stdin)");
  baseline_cmd->add_option("--out", out_path, "Firings as JSON lines ('-' for stdout)");
  baseline_cmd->add_option("--strategy", flags.strategy, "S1..S7 or all");
  baseline_cmd->add_option("--long-depth", flags.long_depth, "Windows merged for long-term entropy");
  baseline_cmd->add_flag("--quiet", quiet, "Suppress the summary");
  add_config_flags(*baseline_cmd, flags);

  auto* series_cmd = app.add_subcommand("export-series", "Write per-window entropy, slope and sigma as CSV");
  series_cmd->add_option("input", input, "Flow CSV, optionally gzip ('-' for stdin)");
  series_cmd->add_option("--out", out_path, "Series CSV ('-' for stdout)");
  series_cmd->add_flag("--quiet", quiet, "Suppress the summary");
  add_config_flags(*series_cmd, flags);

  auto* eval_cmd = app.add_subcommand("eval", "Score detections against ground truth");
  std::string detections_path;
  std::string truth_path;
  std::int64_t windows = 0;
  std::int64_t tolerance = 1;
  std::int64_t unit_ms = 60'000;
  std::string format = "table";
  eval_cmd->add_option("--detections", detections_path, "Detection JSON lines")->required();
  eval_cmd->add_option("--truth", truth_path, "Ground-truth CSV")->required();
  eval_cmd->add_option("--windows", windows, "Total windows in the run")->required();
  eval_cmd->add_option("--tolerance", tolerance, "Timeline tolerance in windows");
  eval_cmd->add_option("--unit-ms", unit_ms, "Window length in milliseconds");
  eval_cmd->add_option("--format", format, "json | table");
  eval_cmd->add_option("--out", out_path, "Report destination ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*generate_cmd) return run_generate(spec_path, preset, gen_seed, gen_windows, out_path, truth_out);
    if (*detect_cmd) return run_detect_command(flags, input, out_path, series_path, quiet);
    if (*baseline_cmd) return run_baseline_command(flags, input, out_path, quiet);
    if (*series_cmd) return run_series_command(flags, input, out_path, quiet);
    if (*eval_cmd) return run_eval(detections_path, truth_path, windows, tolerance, unit_ms, format, out_path);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ": " << e.what() << '\n';
    return kDataError;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}
