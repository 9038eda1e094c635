#include "entdiff/ingestion.hpp"

#include <cstring>
#include <limits>

#include <fmt/format.h>

#include "entdiff/errors.hpp"
#include "entdiff/rng.hpp"

namespace entdiff {

namespace {

bool blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(const char* begin, const char* end) {
  while (begin != end && blank(*begin)) ++begin;
  while (end != begin && blank(end[-1])) --end;
  return {begin, static_cast<std::size_t>(end - begin)};
}

const char* find_comma(const char* begin, const char* end) {
  const auto* hit = static_cast<const char*>(std::memchr(begin, ',', static_cast<std::size_t>(end - begin)));
  return hit == nullptr ? end : hit;
}

[[noreturn]] void bad_timestamp(std::string_view line, std::uint64_t line_number) {
  const auto comma = line.find(',');
  throw ParseError(line_number, fmt::format("invalid timestamp '{}'", line.substr(0, comma)));
}

}  // namespace

FlowFields parse_flow_fields(std::string_view line, std::uint64_t line_number) {
  const char* p = line.data();
  const char* const end = p + line.size();
  FlowFields fields;

  while (p != end && blank(*p)) ++p;
  if (p != end && *p == '-') throw ParseError(line_number, "negative timestamp");
  const char* const digits = p;
  std::int64_t ts = 0;
  for (; p != end && *p >= '0' && *p <= '9'; ++p) {
    if (__builtin_mul_overflow(ts, 10, &ts) || __builtin_add_overflow(ts, *p - '0', &ts)) {
      bad_timestamp(line, line_number);
    }
  }
  if (p == digits) {
    if (p == end || *p == ',') throw ParseError(line_number, "expected timestamp_ms,src,dst");
    bad_timestamp(line, line_number);
  }
  while (p != end && blank(*p)) ++p;
  if (p == end) throw ParseError(line_number, "expected timestamp_ms,src,dst");
  if (*p != ',') bad_timestamp(line, line_number);
  fields.timestamp_ms = ts;

  const char* const src_begin = p + 1;
  const char* const src_end = find_comma(src_begin, end);
  if (src_end == end) throw ParseError(line_number, "missing dst field");
  const char* const dst_begin = src_end + 1;
  fields.src = trim(src_begin, src_end);
  fields.dst = trim(dst_begin, find_comma(dst_begin, end));
  if (fields.src.empty()) throw ParseError(line_number, "empty src field");
  if (fields.dst.empty()) throw ParseError(line_number, "empty dst field");
  return fields;
}

FlowRecord parse_flow_csv(std::string_view line, std::uint64_t line_number) {
  const auto fields = parse_flow_fields(line, line_number);
  return {fields.timestamp_ms, std::string(fields.src), std::string(fields.dst)};
}

void SamplerConfig::validate() const {
  if (ratio_den == 0 || ratio_num == 0 || ratio_num > ratio_den) {
    throw ConfigError(fmt::format("sampling ratio {}/{} must lie in (0, 1]", ratio_num, ratio_den));
  }
}

Sampler::Sampler(SamplerConfig config) : config_(config), rng_(config.seed) { config_.validate(); }

Windowizer::Windowizer(std::int64_t unit_ms, SamplerConfig sampling, Sink sink, bool track_src)
    : unit_ms_(unit_ms), sampler_(sampling), sink_(std::move(sink)), track_src_(track_src) {
  if (unit_ms <= 0) throw ConfigError("unit_ms must be positive");
  current_.unit_ms = unit_ms;
}

bool Windowizer::admit(std::int64_t timestamp_ms) {
  if (timestamp_ms >= last_timestamp_ && timestamp_ms < window_end_ms_) {
    last_timestamp_ = timestamp_ms;
    ++records_seen_;
    ++current_.records_seen;
    return sampler_.accept();
  }
  if (finished_) throw OrderError("record after the stream was finished");
  if (timestamp_ms < 0) throw OrderError("negative timestamp");
  const std::int64_t index = timestamp_ms / unit_ms_;
  if (!started_) {
    started_ = true;
    current_.window_index = index;
  } else if (timestamp_ms < last_timestamp_) {
    throw OrderError(fmt::format("timestamp {} precedes previous timestamp {}", timestamp_ms, last_timestamp_));
  } else if (index != current_.window_index) {
    if (index - current_.window_index > kMaxGapWindows) {
      throw OverflowError(fmt::format("gap of {} windows exceeds the limit of {}", index - current_.window_index,
                                      kMaxGapWindows));
    }
    while (current_.window_index < index) {
      emit_current();
      ++current_.window_index;
    }
  }
  if (__builtin_add_overflow(current_.start_ms(), unit_ms_, &window_end_ms_)) {
    window_end_ms_ = std::numeric_limits<std::int64_t>::max();
  }
  last_timestamp_ = timestamp_ms;
  ++records_seen_;
  ++current_.records_seen;
  return sampler_.accept();
}

void Windowizer::add(std::string_view src, std::string_view dst) {
  current_.dst_table.add(dst);
  if (track_src_) current_.src_table.add(src);
  ++records_accepted_;
}

void Windowizer::finish() {
  if (finished_) return;
  finished_ = true;
  window_end_ms_ = std::numeric_limits<std::int64_t>::min();
  if (started_) emit_current();
}

void Windowizer::emit_current() {
  sink_(current_);
  ++windows_emitted_;
  current_.dst_table.clear();
  current_.src_table.clear();
  current_.records_seen = 0;
}

std::vector<WindowAccumulator> windowize(const std::vector<FlowRecord>& records, std::int64_t unit_ms,
                                         SamplerConfig sampling) {
  std::vector<WindowAccumulator> windows;
  Windowizer windowizer(unit_ms, sampling, [&](const WindowAccumulator& window) { windows.push_back(window); });
  for (const auto& record : records) windowizer.push(record);
  windowizer.finish();
  return windows;
}

}  // namespace entdiff
