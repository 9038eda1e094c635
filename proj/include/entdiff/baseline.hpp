#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>

#include "entdiff/entropy.hpp"
#include "entdiff/frequency_table.hpp"
#include "entdiff/ingestion.hpp"

namespace entdiff {

// Threshold-based comparison detector: bidirectional short/long-term
// entropies, each compared with the running mean of its own past values.

enum class Strategy { s1 = 1, s2, s3, s4, s5, s6, s7 };

inline constexpr std::array<Strategy, 7> kAllStrategies = {Strategy::s1, Strategy::s2, Strategy::s3, Strategy::s4,
                                                           Strategy::s5, Strategy::s6, Strategy::s7};

std::string_view to_string(Strategy strategy);
/// Accepts "S1".."S7" (case-insensitive); throws ConfigError otherwise.
Strategy parse_strategy(std::string_view text);

/// Mean of every value ingested so far (k = infinity). Compensated summation
/// of offsets from the first value, so a constant series has its own value as
/// mean.
class RunningMeanThreshold {
 public:
  void ingest(double value);
  std::optional<double> current() const;
  std::int64_t count() const noexcept { return count_; }

 private:
  double origin_ = 0.0;
  double sum_ = 0.0;
  double compensation_ = 0.0;
  std::int64_t count_ = 0;
};

struct EntropyVector {
  double dst_ste = 0.0;
  double dst_lte = 0.0;
  double src_ste = 0.0;
  double src_lte = 0.0;
};

struct ThresholdVector {
  std::optional<double> dst_stthr;
  std::optional<double> dst_ltthr;
  std::optional<double> src_stthr;
  std::optional<double> src_ltthr;
};

///   S1 = dst_ste < dst_stthr and dst_lte < dst_ltthr
///   S2 = src_ste < src_stthr and src_lte < src_ltthr
///   S3 = dst_ste < dst_stthr and src_lte < src_ltthr
///   S4 = dst_ste < dst_stthr      S5 = src_ste < src_stthr
///   S6 = dst_lte < dst_ltthr      S7 = src_lte < src_ltthr
/// Throws NotReadyError if a threshold the strategy reads is unset.
bool evaluate_strategy(Strategy strategy, const EntropyVector& entropies, const ThresholdVector& thresholds);

struct BaselineStep {
  std::int64_t window_index = 0;
  std::int64_t window_start_ms = 0;
  /// Unset when the window carried no entropy (empty, nothing to repeat).
  std::optional<EntropyVector> entropies;
  /// Thresholds as they stood before this window was ingested.
  ThresholdVector thresholds;
  bool ready = false;
  std::array<bool, 7> fired{};

  bool fired_for(Strategy strategy) const { return fired[static_cast<std::size_t>(strategy) - 1]; }
};

class BaselineDetector {
 public:
  explicit BaselineDetector(EntropyMeasure measure, std::size_t long_depth = 10);

  /// Processes one window: short-term entropy from the window itself,
  /// long-term entropy from the merged counts of the last `long_depth`
  /// windows (current included). All seven strategies are evaluated against
  /// the thresholds before the window's entropies are ingested. Empty windows
  /// repeat the previous entropies. The window must carry src counts.
  const BaselineStep& update(const WindowAccumulator& window);

  const BaselineStep& last_step() const noexcept { return step_; }
  ThresholdVector thresholds() const;
  const EntropyMeasure& measure() const noexcept { return measure_; }
  std::size_t long_depth() const noexcept { return long_depth_; }

 private:
  struct Direction {
    std::deque<FrequencyTable> history;
    FrequencyTable merged;
    RunningMeanThreshold short_threshold;
    RunningMeanThreshold long_threshold;
  };

  void push_history(Direction& direction, const FrequencyTable& table);

  EntropyMeasure measure_;
  std::size_t long_depth_;
  Direction dst_;
  Direction src_;
  std::optional<EntropyVector> previous_;
  BaselineStep step_;
};

}  // namespace entdiff
