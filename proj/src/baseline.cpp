#include "entdiff/baseline.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "entdiff/errors.hpp"

namespace entdiff {

std::string_view to_string(Strategy strategy) {
  static constexpr std::array<std::string_view, 7> kNames = {"S1", "S2", "S3", "S4", "S5", "S6", "S7"};
  return kNames[static_cast<std::size_t>(strategy) - 1];
}

Strategy parse_strategy(std::string_view text) {
  if (text.size() == 2 && (text[0] == 'S' || text[0] == 's') && text[1] >= '1' && text[1] <= '7') {
    return static_cast<Strategy>(text[1] - '0');
  }
  throw ConfigError("unknown strategy '" + std::string(text) + "' (expected S1..S7)");
}

void RunningMeanThreshold::ingest(double value) {
  if (count_ == 0) origin_ = value;
  value -= origin_;
  // Neumaier summation of the offsets from the first value.
  const double t = sum_ + value;
  if (std::fabs(sum_) >= std::fabs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
  ++count_;
}

std::optional<double> RunningMeanThreshold::current() const {
  if (count_ == 0) return std::nullopt;
  return origin_ + (sum_ + compensation_) / static_cast<double>(count_);
}

namespace {

bool below(double value, const std::optional<double>& threshold, std::string_view name) {
  if (!threshold) throw NotReadyError("threshold " + std::string(name) + " is not set yet");
  return value < *threshold;
}

}  // namespace

bool evaluate_strategy(Strategy strategy, const EntropyVector& e, const ThresholdVector& t) {
  switch (strategy) {
    case Strategy::s1:
      return below(e.dst_ste, t.dst_stthr, "dst_stthr") & below(e.dst_lte, t.dst_ltthr, "dst_ltthr");
    case Strategy::s2:
      return below(e.src_ste, t.src_stthr, "src_stthr") & below(e.src_lte, t.src_ltthr, "src_ltthr");
    case Strategy::s3:
      return below(e.dst_ste, t.dst_stthr, "dst_stthr") & below(e.src_lte, t.src_ltthr, "src_ltthr");
    case Strategy::s4:
      return below(e.dst_ste, t.dst_stthr, "dst_stthr");
    case Strategy::s5:
      return below(e.src_ste, t.src_stthr, "src_stthr");
    case Strategy::s6:
      return below(e.dst_lte, t.dst_ltthr, "dst_ltthr");
    case Strategy::s7:
      return below(e.src_lte, t.src_ltthr, "src_ltthr");
  }
  return false;
}

BaselineDetector::BaselineDetector(EntropyMeasure measure, std::size_t long_depth)
    : measure_(measure), long_depth_(long_depth) {
  if (long_depth == 0) throw InvalidParameterError("long-term depth must be positive");
}

void BaselineDetector::push_history(Direction& direction, const FrequencyTable& table) {
  direction.merged.merge(table);
  direction.history.push_back(table);
  if (direction.history.size() > long_depth_) {
    direction.merged.subtract(direction.history.front());
    direction.history.pop_front();
  }
}

ThresholdVector BaselineDetector::thresholds() const {
  return {dst_.short_threshold.current(), dst_.long_threshold.current(), src_.short_threshold.current(),
          src_.long_threshold.current()};
}

const BaselineStep& BaselineDetector::update(const WindowAccumulator& window) {
  step_ = BaselineStep{};
  step_.window_index = window.window_index;
  step_.window_start_ms = window.start_ms();

  push_history(dst_, window.dst_table);
  push_history(src_, window.src_table);

  EntropyVector current;
  if (!window.dst_table.empty() && !window.src_table.empty()) {
    current.dst_ste = measure_.evaluate(window.dst_table);
    current.src_ste = measure_.evaluate(window.src_table);
  } else if (previous_) {
    current.dst_ste = previous_->dst_ste;
    current.src_ste = previous_->src_ste;
  } else {
    return step_;
  }
  // An empty merged history implies an empty current window, so previous_ is set.
  current.dst_lte = dst_.merged.empty() ? previous_->dst_lte : measure_.evaluate(dst_.merged);
  current.src_lte = src_.merged.empty() ? previous_->src_lte : measure_.evaluate(src_.merged);

  step_.entropies = current;
  step_.thresholds = thresholds();
  const auto& t = step_.thresholds;
  step_.ready = t.dst_stthr && t.dst_ltthr && t.src_stthr && t.src_ltthr;
  if (step_.ready) {
    for (auto strategy : kAllStrategies) {
      step_.fired[static_cast<std::size_t>(strategy) - 1] = evaluate_strategy(strategy, current, t);
    }
  }

  dst_.short_threshold.ingest(current.dst_ste);
  dst_.long_threshold.ingest(current.dst_lte);
  src_.short_threshold.ingest(current.src_ste);
  src_.long_threshold.ingest(current.src_lte);
  previous_ = current;
  return step_;
}

}  // namespace entdiff
