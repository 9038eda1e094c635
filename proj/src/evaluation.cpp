#include "entdiff/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "entdiff/errors.hpp"

namespace entdiff {

namespace {

void validate(std::span<const std::int64_t> detections, std::span<const AttackInterval> attacks,
              std::int64_t unit_ms, std::int64_t tolerance_windows) {
  if (unit_ms <= 0) throw InvalidParameterError("unit_ms must be positive");
  if (tolerance_windows < 0) throw InvalidParameterError("tolerance must be non-negative");
  if (!std::is_sorted(detections.begin(), detections.end())) throw OrderError("detections are not sorted by time");
  for (std::size_t i = 0; i < attacks.size(); ++i) {
    if (attacks[i].start_ms >= attacks[i].end_ms) {
      throw InvalidParameterError(fmt::format("attack '{}' has start {} >= end {}", attacks[i].label,
                                              attacks[i].start_ms, attacks[i].end_ms));
    }
    if (i > 0 && attacks[i].start_ms < attacks[i - 1].start_ms) throw OrderError("attacks are not sorted by start");
  }
}

bool overlaps(std::int64_t detection_start, const AttackInterval& attack, std::int64_t unit_ms,
              std::int64_t tolerance_windows) {
  const std::int64_t low = detection_start - tolerance_windows * unit_ms;
  const std::int64_t high = detection_start + (tolerance_windows + 1) * unit_ms;
  return low < attack.end_ms && attack.start_ms < high;
}

std::vector<AttackOutcome> match(std::span<const std::int64_t> detections, std::span<const AttackInterval> attacks,
                                 std::int64_t unit_ms, std::int64_t tolerance_windows, std::int64_t& unmatched) {
  std::vector<AttackOutcome> outcomes;
  outcomes.reserve(attacks.size());
  for (const auto& attack : attacks) outcomes.push_back({attack, std::nullopt});
  unmatched = 0;
  for (const auto start : detections) {
    bool any = false;
    for (auto& outcome : outcomes) {
      if (!overlaps(start, outcome.attack, unit_ms, tolerance_windows)) continue;
      any = true;
      if (!outcome.first_detection_ms) outcome.first_detection_ms = start;
    }
    if (!any) ++unmatched;
  }
  return outcomes;
}

std::string_view trim(std::string_view text) {
  const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!text.empty() && blank(text.front())) text.remove_prefix(1);
  while (!text.empty() && blank(text.back())) text.remove_suffix(1);
  return text;
}

std::int64_t parse_int(std::string_view text, std::uint64_t line, std::string_view what) {
  text = trim(text);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(line, fmt::format("invalid {} '{}'", what, text));
  }
  return value;
}

}  // namespace

TimelineCounts classify_timeline(std::span<const std::int64_t> detection_starts_ms,
                                 std::span<const AttackInterval> attacks, std::int64_t unit_ms,
                                 std::int64_t tolerance_windows) {
  validate(detection_starts_ms, attacks, unit_ms, tolerance_windows);
  TimelineCounts counts;
  const auto outcomes = match(detection_starts_ms, attacks, unit_ms, tolerance_windows, counts.fp);
  for (const auto& outcome : outcomes) {
    if (outcome.first_detection_ms) {
      ++counts.tp;
    } else {
      ++counts.fn;
    }
  }
  return counts;
}

std::int64_t raw_fp(std::int64_t detections, std::int64_t actual) { return detections - actual; }

Rate time_based_fpr(std::int64_t detections, std::int64_t actual, std::int64_t windows) {
  if (windows < 1) throw InvalidParameterError("time-based FPR needs at least one window");
  return {std::max<std::int64_t>(0, detections - actual), windows};
}

EvalReport evaluate(std::span<const std::int64_t> detection_starts_ms, std::span<const AttackInterval> attacks,
                    std::int64_t total_windows, std::int64_t unit_ms, std::int64_t tolerance_windows) {
  validate(detection_starts_ms, attacks, unit_ms, tolerance_windows);
  EvalReport report;
  report.total_windows = total_windows;
  report.detections = static_cast<std::int64_t>(detection_starts_ms.size());
  report.actual_attacks = static_cast<std::int64_t>(attacks.size());
  report.raw_fp = raw_fp(report.detections, report.actual_attacks);
  report.time_based_fpr = time_based_fpr(report.detections, report.actual_attacks, total_windows);
  report.unit_ms = unit_ms;
  report.tolerance_windows = tolerance_windows;
  report.attacks = match(detection_starts_ms, attacks, unit_ms, tolerance_windows, report.timeline_fp);
  for (const auto& outcome : report.attacks) {
    if (outcome.first_detection_ms) {
      ++report.timeline_tp;
    } else {
      ++report.timeline_fn;
    }
  }
  return report;
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json out;
  out["total_windows"] = report.total_windows;
  out["detections"] = report.detections;
  out["actual_attacks"] = report.actual_attacks;
  out["raw_fp"] = report.raw_fp;
  out["timeline_tp"] = report.timeline_tp;
  out["timeline_fp"] = report.timeline_fp;
  out["timeline_fn"] = report.timeline_fn;
  out["time_based_fpr"] = {{"numerator", report.time_based_fpr.numerator},
                           {"denominator", report.time_based_fpr.denominator},
                           {"value", report.time_based_fpr.value()}};
  out["unit_ms"] = report.unit_ms;
  out["tolerance_windows"] = report.tolerance_windows;
  auto attacks = nlohmann::ordered_json::array();
  for (const auto& outcome : report.attacks) {
    nlohmann::ordered_json row;
    row["label"] = outcome.attack.label;
    row["start_ms"] = outcome.attack.start_ms;
    row["end_ms"] = outcome.attack.end_ms;
    row["detected"] = outcome.first_detection_ms.has_value();
    if (outcome.first_detection_ms) {
      row["first_detection_ms"] = *outcome.first_detection_ms;
    } else {
      row["first_detection_ms"] = nullptr;
    }
    attacks.push_back(std::move(row));
  }
  out["attacks"] = std::move(attacks);
  return out;
}

std::string format_table(const EvalReport& report) {
  std::string out;
  const auto row = [&out](std::string_view name, const std::string& value) {
    out += fmt::format("{:<22} {:>12}\n", name, value);
  };
  row("windows", std::to_string(report.total_windows));
  row("detections", std::to_string(report.detections));
  row("actual attacks", std::to_string(report.actual_attacks));
  row("raw false positives", std::to_string(report.raw_fp));
  row("timeline TP", std::to_string(report.timeline_tp));
  row("timeline FP", std::to_string(report.timeline_fp));
  row("timeline FN", std::to_string(report.timeline_fn));
  row("time-based FPR", fmt::format("{:.2f}%", 100.0 * report.time_based_fpr.value()));
  row("tolerance (windows)", std::to_string(report.tolerance_windows));
  if (!report.attacks.empty()) {
    out += "\nattack                 start_ms       end_ms  first detection\n";
    for (const auto& outcome : report.attacks) {
      out += fmt::format("{:<16} {:>12} {:>12}  {}\n", outcome.attack.label, outcome.attack.start_ms,
                         outcome.attack.end_ms,
                         outcome.first_detection_ms ? std::to_string(*outcome.first_detection_ms) : "missed");
    }
  }
  return out;
}

std::vector<AttackInterval> read_truth_csv(std::istream& in) {
  std::vector<AttackInterval> attacks;
  std::string line;
  std::uint64_t number = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!seen_data) {
      seen_data = true;
      if (text.starts_with("start_ms")) continue;
    }
    const auto first = text.find(',');
    if (first == std::string_view::npos) throw ParseError(number, "expected start_ms,end_ms,label");
    const auto second = text.find(',', first + 1);
    AttackInterval attack;
    attack.start_ms = parse_int(text.substr(0, first), number, "start_ms");
    attack.end_ms = parse_int(text.substr(first + 1, second == std::string_view::npos ? std::string_view::npos
                                                                                        : second - first - 1),
                              number, "end_ms");
    if (second != std::string_view::npos) attack.label = std::string(trim(text.substr(second + 1)));
    if (attack.start_ms >= attack.end_ms) throw ParseError(number, "start_ms must be below end_ms");
    attacks.push_back(std::move(attack));
  }
  return attacks;
}

void write_truth_csv(std::ostream& out, std::span<const AttackInterval> attacks) {
  out << "start_ms,end_ms,label\n";
  for (const auto& attack : attacks) out << attack.start_ms << ',' << attack.end_ms << ',' << attack.label << '\n';
}

std::vector<std::int64_t> read_detection_starts(std::istream& in) {
  std::vector<std::int64_t> starts;
  std::string line;
  std::uint64_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      starts.push_back(record.at("window_start_ms").get<std::int64_t>());
    } catch (const nlohmann::json::exception& error) {
      throw ParseError(number, std::string("invalid detection record: ") + error.what());
    }
  }
  return starts;
}

}  // namespace entdiff
