#include "entdiff/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entdiff/errors.hpp"

namespace entdiff {

std::string_view to_string(CheckMode mode) {
  return mode == CheckMode::algorithm1 ? "algorithm1" : "listing";
}

CheckMode parse_check_mode(std::string_view text) {
  if (text == "algorithm1") return CheckMode::algorithm1;
  if (text == "listing") return CheckMode::listing;
  throw ConfigError("unknown check mode '" + std::string(text) + "' (expected algorithm1 or listing)");
}

bool signal(std::int64_t slope, const IntegerSlopeStats& stats, CheckMode mode) {
  if (stats.count() == 0) throw InsufficientHistoryError();
  if (slope >= 0) return false;
  const Int128 square = static_cast<Int128>(slope) * slope;
  if (mode == CheckMode::listing) return square > stats.m2();
  Int128 scaled = 0;
  // An overflowing product is larger than any representable m2.
  if (__builtin_mul_overflow(square, static_cast<Int128>(stats.count()), &scaled)) return true;
  return scaled > stats.m2();
}

bool signal(double slope, const RealSlopeStats& stats, CheckMode mode) {
  if (stats.count() == 0) throw InsufficientHistoryError();
  if (!(slope < 0.0)) return false;
  const double square = slope * slope;
  if (mode == CheckMode::listing) return square > stats.m2();
  return square * static_cast<double>(stats.count()) > stats.m2();
}

template <typename T>
EntropyProgression<T>::EntropyProgression(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidParameterError("progression capacity must be positive");
  values_.reserve(capacity);
}

template <typename T>
void EntropyProgression<T>::push(T value) {
  if (full()) {
    std::rotate(values_.begin(), values_.begin() + 1, values_.end());
    values_.back() = value;
  } else {
    values_.push_back(value);
  }
}

namespace {

IntegerLineFit fit(std::span<const std::int64_t> xs, std::span<const std::int64_t> ys) {
  return best_fit_line(xs, ys);
}

RealLineFit fit(std::span<const double> xs, std::span<const double> ys) { return least_squares_fit(xs, ys); }

}  // namespace

template <typename Arithmetic>
BasicDetector<Arithmetic>::BasicDetector(DetectorConfig config)
    : config_(config), progression_(config.progression_size) {
  if (config_.progression_size < 2) throw InvalidParameterError("progression size must be at least 2");
  xs_.resize(config_.progression_size);
  for (std::size_t i = 0; i < xs_.size(); ++i) xs_[i] = static_cast<value_type>(i);
  // Reject sizes whose fit can never be evaluated (truncated integer means
  // make P = 2 and P = 3 degenerate).
  const std::vector<value_type> probe(xs_.size(), value_type{});
  try {
    fit(xs_, probe);
  } catch (const DegenerateFitError&) {
    throw InvalidParameterError("progression size " + std::to_string(config_.progression_size) +
                                " gives a degenerate best-fit line in this arithmetic mode");
  }
}

template <typename Arithmetic>
auto BasicDetector<Arithmetic>::process_window(std::int64_t window_index, std::int64_t window_start_ms,
                                               std::optional<value_type> entropy) -> std::optional<Detection> {
  last_step_ = Step{};
  last_step_.window_index = window_index;
  last_step_.window_start_ms = window_start_ms;

  if (!entropy) {
    if (progression_.empty()) return std::nullopt;
    entropy = progression_.newest();
    last_step_.repeated = true;
  }
  progression_.push(*entropy);
  last_step_.entropy = *entropy;
  if (!progression_.full()) return std::nullopt;

  const auto line = fit(xs_, progression_.values());
  stats_.update(line.slope);
  last_step_.slope = line.slope;
  last_step_.sigma = std::sqrt(stats_.variance());

  const bool armed = static_cast<std::size_t>(stats_.count()) >= config_.effective_warmup();
  const bool quiet = silent_windows_ > 0;
  if (quiet) --silent_windows_;
  if (!armed || quiet || !signal(line.slope, stats_, config_.check_mode)) return std::nullopt;

  silent_windows_ = config_.cooldown_windows;
  last_step_.detected = true;
  Detection detection;
  detection.window_index = window_index;
  detection.window_start_ms = window_start_ms;
  detection.slope = line.slope;
  detection.intercept = line.intercept;
  detection.entropy = *entropy;
  detection.variance_num = stats_.m2();
  detection.variance_den = config_.check_mode == CheckMode::listing ? 1 : stats_.count();
  return detection;
}

template class EntropyProgression<std::int64_t>;
template class EntropyProgression<double>;
template class BasicDetector<IntegerArithmetic>;
template class BasicDetector<RealArithmetic>;

}  // namespace entdiff
