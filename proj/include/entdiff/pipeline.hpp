#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "entdiff/baseline.hpp"
#include "entdiff/config.hpp"
#include "entdiff/detector.hpp"
#include "entdiff/flow_io.hpp"
#include "entdiff/ingestion.hpp"
#include "entdiff/trafficgen.hpp"

namespace entdiff {

/// Result of one window through the detector, rendered for output.
struct WindowReport {
  std::int64_t window_index = 0;
  std::int64_t window_start_ms = 0;
  std::uint64_t records = 0;
  std::optional<double> entropy;
  std::optional<double> slope;
  std::optional<double> sigma;
  bool detected = false;
  /// Exact renderings (integers stay integers).
  std::string entropy_text;
  std::string slope_text;
  std::string sigma_text;
  /// JSON line of the detection, without trailing newline.
  std::string detection_json;
};

/// Entropy measure plus the detector for its arithmetic mode.
class DetectionEngine {
 public:
  explicit DetectionEngine(const RunConfig& config);

  const WindowReport& process(const WindowAccumulator& window);

  const EntropyMeasure& measure() const noexcept { return measure_; }

 private:
  EntropyMeasure measure_;
  CheckMode check_mode_;
  std::variant<IntegerDetector, RealDetector> detector_;
  WindowReport report_;
};

inline constexpr std::string_view kSeriesCsvHeader = "window_index,window_start_ms,records,entropy,slope,sigma,detected";

std::string format_series_row(const WindowReport& report);

/// Shortest round-trip decimal form.
std::string format_number(double value);

std::string format_detection_json(const IntegerDetection& detection, const std::string& measure, CheckMode mode);
std::string format_detection_json(const RealDetection& detection, const std::string& measure, CheckMode mode);
std::string format_baseline_json(const BaselineStep& step, Strategy strategy, const std::string& measure);

struct RunSummary {
  std::uint64_t records_read = 0;
  std::uint64_t records_sampled = 0;
  std::uint64_t windows = 0;
  std::uint64_t detections = 0;
  std::uint64_t parse_errors = 0;
  double seconds = 0.0;

  double records_per_second() const noexcept { return seconds > 0.0 ? records_read / seconds : 0.0; }
};

std::string format_summary(const RunSummary& summary);

using WindowSink = std::function<void(const WindowAccumulator&)>;

/// Streams a flow CSV (file, "-" for stdin, optionally gzip) through sampling
/// and windowing into `sink`.
RunSummary for_each_window(const std::string& input, const RunConfig& config, const WindowSink& sink,
                           bool track_src, const std::function<void(const ParseError&)>& on_error = {});

/// Same, for records produced in memory by the traffic generator.
RunSummary for_each_window(const ScenarioSpec& scenario, const RunConfig& config, const WindowSink& sink,
                           bool track_src);

struct DetectOutputs {
  std::ostream* detections = nullptr;
  std::ostream* series = nullptr;
};

struct DetectResult {
  RunSummary summary;
  std::vector<std::int64_t> detection_starts_ms;
};

template <typename Source>
DetectResult run_detect(const Source& source, const RunConfig& config, DetectOutputs outputs = {},
                        const std::function<void(const ParseError&)>& on_error = {});

struct BaselineResult {
  RunSummary summary;
  /// Firing window starts, indexed by strategy number - 1.
  std::array<std::vector<std::int64_t>, 7> firings_ms;
};

/// Runs the configured strategy (or all seven) and writes firings as JSON
/// lines to `firings` when given.
template <typename Source>
BaselineResult run_baseline(const Source& source, const RunConfig& config, std::ostream* firings = nullptr,
                            const std::function<void(const ParseError&)>& on_error = {});

}  // namespace entdiff
