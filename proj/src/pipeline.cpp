#include "entdiff/pipeline.hpp"

#include <chrono>
#include <charconv>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "entdiff/int128.hpp"

namespace entdiff {

namespace {

std::variant<IntegerDetector, RealDetector> make_detector(const RunConfig& config) {
  if (config.effective_mode() == ArithmeticMode::integer) return IntegerDetector(config.detector_config());
  return RealDetector(config.detector_config());
}

std::string format_value(std::int64_t value) { return std::to_string(value); }
std::string format_value(double value) { return format_number(value); }
std::string format_value(Int128 value) { return to_string(value); }

std::string json_string(const std::string& text) { return nlohmann::json(text).dump(); }

template <typename Detection>
std::string detection_json(const Detection& d, const std::string& measure, CheckMode mode) {
  return fmt::format(
      "{{\"source\":\"detector\",\"window_index\":{},\"window_start_ms\":{},\"slope\":{},\"variance_num\":{},"
      "\"variance_den\":{},\"entropy\":{},\"intercept\":{},\"measure\":{},\"check_mode\":\"{}\"}}",
      d.window_index, d.window_start_ms, format_value(d.slope), format_value(d.variance_num), d.variance_den,
      format_value(d.entropy), format_value(d.intercept), json_string(measure), to_string(mode));
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) return "null";
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

std::string format_detection_json(const IntegerDetection& detection, const std::string& measure, CheckMode mode) {
  return detection_json(detection, measure, mode);
}

std::string format_detection_json(const RealDetection& detection, const std::string& measure, CheckMode mode) {
  return detection_json(detection, measure, mode);
}

std::string format_baseline_json(const BaselineStep& step, Strategy strategy, const std::string& measure) {
  const auto& e = *step.entropies;
  const auto& t = step.thresholds;
  const auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("null"); };
  return fmt::format(
      "{{\"source\":\"baseline\",\"strategy\":\"{}\",\"window_index\":{},\"window_start_ms\":{},\"slope\":null,"
      "\"variance_num\":null,\"variance_den\":null,\"entropy\":{},\"measure\":{},\"dst_ste\":{},\"dst_lte\":{},"
      "\"src_ste\":{},\"src_lte\":{},\"dst_stthr\":{},\"dst_ltthr\":{},\"src_stthr\":{},\"src_ltthr\":{}}}",
      to_string(strategy), step.window_index, step.window_start_ms, format_number(e.dst_ste), json_string(measure),
      format_number(e.dst_ste), format_number(e.dst_lte), format_number(e.src_ste), format_number(e.src_lte),
      opt(t.dst_stthr), opt(t.dst_ltthr), opt(t.src_stthr), opt(t.src_ltthr));
}

DetectionEngine::DetectionEngine(const RunConfig& config)
    : measure_(config.entropy_measure()), check_mode_(config.check_mode), detector_(make_detector(config)) {}

const WindowReport& DetectionEngine::process(const WindowAccumulator& window) {
  report_ = WindowReport{};
  report_.window_index = window.window_index;
  report_.window_start_ms = window.start_ms();
  report_.records = window.accepted();
  const std::string name = measure_.name();

  std::visit(
      [&](auto& detector) {
        using Detector = std::decay_t<decltype(detector)>;
        using Value = typename Detector::value_type;
        std::optional<Value> entropy;
        if (!window.dst_table.empty()) {
          if constexpr (std::is_same_v<Value, std::int64_t>) {
            entropy = measure_.evaluate_scaled(window.dst_table);
          } else {
            entropy = measure_.evaluate(window.dst_table);
          }
        }
        const auto detection = detector.process_window(window.window_index, window.start_ms(), entropy);
        const auto& step = detector.last_step();
        if (step.entropy) {
          report_.entropy = static_cast<double>(*step.entropy);
          report_.entropy_text = format_value(*step.entropy);
        }
        if (step.slope) {
          report_.slope = static_cast<double>(*step.slope);
          report_.slope_text = format_value(*step.slope);
        }
        if (step.sigma) {
          report_.sigma = *step.sigma;
          report_.sigma_text = format_number(*step.sigma);
        }
        if (detection) {
          report_.detected = true;
          report_.detection_json = format_detection_json(*detection, name, check_mode_);
        }
      },
      detector_);
  return report_;
}

std::string format_series_row(const WindowReport& r) {
  return fmt::format("{},{},{},{},{},{},{}", r.window_index, r.window_start_ms, r.records, r.entropy_text,
                     r.slope_text, r.sigma_text, r.detected ? 1 : 0);
}

std::string format_summary(const RunSummary& s) {
  return fmt::format(
      "records read: {}\nrecords sampled: {}\nwindows: {}\ndetections: {}\nparse errors: {}\nruntime: {:.3f} s\n"
      "throughput: {:.0f} records/s\n",
      s.records_read, s.records_sampled, s.windows, s.detections, s.parse_errors, s.seconds, s.records_per_second());
}

RunSummary for_each_window(const std::string& input, const RunConfig& config, const WindowSink& sink,
                           bool track_src, const std::function<void(const ParseError&)>& on_error) {
  const auto start = Clock::now();
  Windowizer windowizer(config.unit_ms, config.sampler_config(), sink, track_src);
  LineReader reader(input);
  const auto counters = ingest_flow_csv(reader, windowizer, IngestOptions{config.max_parse_errors}, on_error);
  windowizer.finish();
  RunSummary summary;
  summary.records_read = counters.records;
  summary.records_sampled = windowizer.records_accepted();
  summary.windows = windowizer.windows_emitted();
  summary.parse_errors = counters.parse_errors;
  summary.seconds = seconds_since(start);
  return summary;
}

RunSummary for_each_window(const ScenarioSpec& scenario, const RunConfig& config, const WindowSink& sink,
                           bool track_src) {
  const auto start = Clock::now();
  Windowizer windowizer(config.unit_ms, config.sampler_config(), sink, track_src);
  TrafficGenerator generator(scenario);
  FlowRecord record;
  while (generator.next(record)) windowizer.push(record);
  windowizer.finish();
  RunSummary summary;
  summary.records_read = windowizer.records_seen();
  summary.records_sampled = windowizer.records_accepted();
  summary.windows = windowizer.windows_emitted();
  summary.seconds = seconds_since(start);
  return summary;
}

namespace {

RunSummary drive(const std::string& input, const RunConfig& config, const WindowSink& sink, bool track_src,
                 const std::function<void(const ParseError&)>& on_error) {
  return for_each_window(input, config, sink, track_src, on_error);
}

RunSummary drive(const ScenarioSpec& scenario, const RunConfig& config, const WindowSink& sink, bool track_src,
                 const std::function<void(const ParseError&)>&) {
  return for_each_window(scenario, config, sink, track_src);
}

}  // namespace

template <typename Source>
DetectResult run_detect(const Source& source, const RunConfig& config, DetectOutputs outputs,
                        const std::function<void(const ParseError&)>& on_error) {
  config.validate();
  DetectionEngine engine(config);
  DetectResult result;
  if (outputs.series) *outputs.series << kSeriesCsvHeader << '\n';
  const auto sink = [&](const WindowAccumulator& window) {
    const auto& report = engine.process(window);
    if (outputs.series) *outputs.series << format_series_row(report) << '\n';
    if (report.detected) {
      result.detection_starts_ms.push_back(report.window_start_ms);
      if (outputs.detections) *outputs.detections << report.detection_json << '\n';
    }
  };
  result.summary = drive(source, config, sink, false, on_error);
  result.summary.detections = result.detection_starts_ms.size();
  return result;
}

template <typename Source>
BaselineResult run_baseline(const Source& source, const RunConfig& config, std::ostream* firings,
                            const std::function<void(const ParseError&)>& on_error) {
  config.validate();
  BaselineDetector baseline(config.entropy_measure(), config.long_depth);
  const std::string name = baseline.measure().name();
  BaselineResult result;
  const auto sink = [&](const WindowAccumulator& window) {
    const auto& step = baseline.update(window);
    if (!step.ready) return;
    for (auto strategy : kAllStrategies) {
      if (!step.fired_for(strategy)) continue;
      result.firings_ms[static_cast<std::size_t>(strategy) - 1].push_back(step.window_start_ms);
      const bool selected = config.all_strategies || strategy == config.strategy;
      if (firings && selected) *firings << format_baseline_json(step, strategy, name) << '\n';
    }
  };
  result.summary = drive(source, config, sink, true, on_error);
  result.summary.detections =
      config.all_strategies ? 0 : result.firings_ms[static_cast<std::size_t>(config.strategy) - 1].size();
  if (config.all_strategies) {
    for (const auto& list : result.firings_ms) result.summary.detections += list.size();
  }
  return result;
}

template DetectResult run_detect<std::string>(const std::string&, const RunConfig&, DetectOutputs,
                                              const std::function<void(const ParseError&)>&);
template DetectResult run_detect<ScenarioSpec>(const ScenarioSpec&, const RunConfig&, DetectOutputs,
                                               const std::function<void(const ParseError&)>&);
template BaselineResult run_baseline<std::string>(const std::string&, const RunConfig&, std::ostream*,
                                                  const std::function<void(const ParseError&)>&);
template BaselineResult run_baseline<ScenarioSpec>(const ScenarioSpec&, const RunConfig&, std::ostream*,
                                                   const std::function<void(const ParseError&)>&);

}  // namespace entdiff
