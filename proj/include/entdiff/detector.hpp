#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "entdiff/int128.hpp"
#include "entdiff/slope.hpp"
#include "entdiff/welford.hpp"

namespace entdiff {

/// How the slope is compared against the slope statistics.
enum class CheckMode {
  /// m < 0 and m^2 * count > m2, i.e. m < -sqrt(m2 / count) without the root.
  algorithm1,
  /// m < 0 and m^2 > m2 (unnormalised variance).
  listing,
};

std::string_view to_string(CheckMode mode);
/// Accepts "algorithm1" or "listing"; throws ConfigError otherwise.
CheckMode parse_check_mode(std::string_view text);

/// True when `slope` is outstandingly negative relative to `stats`.
/// Throws InsufficientHistoryError when stats are empty.
bool signal(std::int64_t slope, const IntegerSlopeStats& stats, CheckMode mode = CheckMode::algorithm1);
bool signal(double slope, const RealSlopeStats& stats, CheckMode mode = CheckMode::algorithm1);

/// Fixed-capacity FIFO of the most recent window entropies, oldest first.
template <typename T>
class EntropyProgression {
 public:
  explicit EntropyProgression(std::size_t capacity);

  void push(T value);

  std::size_t size() const noexcept { return values_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool full() const noexcept { return values_.size() == capacity_; }
  bool empty() const noexcept { return values_.empty(); }
  const T& newest() const { return values_.back(); }
  std::span<const T> values() const noexcept { return values_; }

 private:
  std::vector<T> values_;
  std::size_t capacity_;
};

struct DetectorConfig {
  std::size_t progression_size = 5;
  /// Minimum number of slopes before a detection may fire; defaults to
  /// progression_size when unset.
  std::optional<std::size_t> warmup_min;
  CheckMode check_mode = CheckMode::algorithm1;
  /// Windows to stay silent after a detection. 0 runs continuously.
  std::size_t cooldown_windows = 0;

  std::size_t effective_warmup() const noexcept { return warmup_min.value_or(progression_size); }
};

/// Integer pipeline: scaled entropies, truncating fit and Welford update.
struct IntegerArithmetic {
  using value_type = std::int64_t;
  using Stats = IntegerSlopeStats;
  using Variance = Int128;
};

/// Floating-point pipeline for Shannon, Renyi and unscaled Tsallis.
struct RealArithmetic {
  using value_type = double;
  using Stats = RealSlopeStats;
  using Variance = double;
};

template <typename Arithmetic>
struct BasicDetection {
  using value_type = typename Arithmetic::value_type;

  std::int64_t window_index = 0;
  std::int64_t window_start_ms = 0;
  value_type slope{};
  /// Intercept of the fitted line. Diagnostic only; the decision ignores it.
  value_type intercept{};
  value_type entropy{};
  /// The decision compared slope^2 against variance_num / variance_den.
  typename Arithmetic::Variance variance_num{};
  std::int64_t variance_den = 0;
};

/// What happened to one window, for series export.
template <typename Arithmetic>
struct WindowStep {
  using value_type = typename Arithmetic::value_type;

  std::int64_t window_index = 0;
  std::int64_t window_start_ms = 0;
  /// Value pushed into the progression, if any.
  std::optional<value_type> entropy;
  /// The window had no records and the previous entropy was repeated.
  bool repeated = false;
  std::optional<value_type> slope;
  std::optional<double> sigma;
  bool detected = false;
};

/// Entropy-differential detector. One instance follows one stream; windows
/// must be fed strictly in order.
template <typename Arithmetic>
class BasicDetector {
 public:
  using value_type = typename Arithmetic::value_type;
  using Stats = typename Arithmetic::Stats;
  using Detection = BasicDetection<Arithmetic>;
  using Step = WindowStep<Arithmetic>;

  explicit BasicDetector(DetectorConfig config);

  /// Feeds one window. `entropy` is empty for a window without sampled
  /// records, in which case the previous entropy is repeated.
  std::optional<Detection> process_window(std::int64_t window_index, std::int64_t window_start_ms,
                                          std::optional<value_type> entropy);

  const Step& last_step() const noexcept { return last_step_; }
  const Stats& stats() const noexcept { return stats_; }
  const EntropyProgression<value_type>& progression() const noexcept { return progression_; }
  const DetectorConfig& config() const noexcept { return config_; }

 private:
  DetectorConfig config_;
  EntropyProgression<value_type> progression_;
  std::vector<value_type> xs_;
  Stats stats_;
  Step last_step_;
  std::size_t silent_windows_ = 0;
};

using IntegerDetector = BasicDetector<IntegerArithmetic>;
using RealDetector = BasicDetector<RealArithmetic>;
using IntegerDetection = BasicDetection<IntegerArithmetic>;
using RealDetection = BasicDetection<RealArithmetic>;

}  // namespace entdiff
