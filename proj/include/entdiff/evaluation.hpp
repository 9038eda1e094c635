#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace entdiff {

/// Ground-truth attack period [start_ms, end_ms).
struct AttackInterval {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string label;

  friend bool operator==(const AttackInterval&, const AttackInterval&) = default;
};

struct TimelineCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

/// Overlap classification. A detection covers the window starting at its
/// timestamp, widened by `tolerance_windows` units on both sides; it overlaps
/// an attack when the two half-open intervals intersect.
///   fp: detections overlapping no attack
///   fn: attacks overlapped by no detection
///   tp: attacks overlapped by at least one detection (counted once)
/// Both inputs must be sorted by start time (OrderError otherwise).
TimelineCounts classify_timeline(std::span<const std::int64_t> detection_starts_ms,
                                 std::span<const AttackInterval> attacks, std::int64_t unit_ms,
                                 std::int64_t tolerance_windows = 1);

/// detections - actual; negative values are returned as they are.
std::int64_t raw_fp(std::int64_t detections, std::int64_t actual);

struct Rate {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  double value() const noexcept { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

/// max(0, detections - actual) / windows. Throws InvalidParameterError when
/// windows < 1.
Rate time_based_fpr(std::int64_t detections, std::int64_t actual, std::int64_t windows);

struct AttackOutcome {
  AttackInterval attack;
  /// Start of the earliest detection window overlapping the attack.
  std::optional<std::int64_t> first_detection_ms;
};

struct EvalReport {
  std::int64_t total_windows = 0;
  std::int64_t detections = 0;
  std::int64_t actual_attacks = 0;
  std::int64_t raw_fp = 0;
  std::int64_t timeline_fp = 0;
  std::int64_t timeline_fn = 0;
  std::int64_t timeline_tp = 0;
  Rate time_based_fpr;
  std::int64_t unit_ms = 0;
  std::int64_t tolerance_windows = 0;
  std::vector<AttackOutcome> attacks;
};

EvalReport evaluate(std::span<const std::int64_t> detection_starts_ms, std::span<const AttackInterval> attacks,
                    std::int64_t total_windows, std::int64_t unit_ms, std::int64_t tolerance_windows = 1);

nlohmann::ordered_json to_json(const EvalReport& report);
std::string format_table(const EvalReport& report);

/// Reads "start_ms,end_ms,label" rows; a header row and '#' comments are
/// skipped. Throws ParseError on malformed rows.
std::vector<AttackInterval> read_truth_csv(std::istream& in);
void write_truth_csv(std::ostream& out, std::span<const AttackInterval> attacks);

/// Reads the window_start_ms field from every JSON line of a detection stream.
std::vector<std::int64_t> read_detection_starts(std::istream& in);

}  // namespace entdiff
