#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "entdiff/frequency_table.hpp"
#include "entdiff/rng.hpp"

namespace entdiff {

struct FlowRecord {
  std::int64_t timestamp_ms = 0;
  std::string src;
  std::string dst;

  friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

/// Borrowed view of one parsed CSV line.
struct FlowFields {
  std::int64_t timestamp_ms = 0;
  std::string_view src;
  std::string_view dst;
};

/// Parses "timestamp_ms,src,dst[,ignored...]". Surrounding blanks in a field
/// are trimmed. Throws ParseError tagged with `line_number`.
FlowFields parse_flow_fields(std::string_view line, std::uint64_t line_number = 0);

FlowRecord parse_flow_csv(std::string_view line, std::uint64_t line_number = 0);

struct SamplerConfig {
  std::uint64_t ratio_num = 1;
  std::uint64_t ratio_den = 20;
  std::uint64_t seed = 1;

  /// Throws ConfigError unless 0 < ratio_num / ratio_den <= 1.
  void validate() const;
  bool keeps_everything() const noexcept { return ratio_num == ratio_den; }
};

/// Independent Bernoulli(ratio_num / ratio_den) decision per record.
class Sampler {
 public:
  explicit Sampler(SamplerConfig config);

  bool accept() {
    if (config_.keeps_everything()) return true;
    return uniform_below(rng_, config_.ratio_den) < config_.ratio_num;
  }
  const SamplerConfig& config() const noexcept { return config_; }

 private:
  SamplerConfig config_;
  std::mt19937_64 rng_;
};

/// Records of one unit-time window [window_index * unit_ms, (window_index + 1) * unit_ms).
struct WindowAccumulator {
  std::int64_t window_index = 0;
  std::int64_t unit_ms = 60000;
  FrequencyTable dst_table;
  FrequencyTable src_table;
  /// Records observed in the window before sampling.
  std::uint64_t records_seen = 0;

  std::int64_t start_ms() const noexcept { return window_index * unit_ms; }
  std::uint64_t accepted() const noexcept { return dst_table.total(); }
};

/// Splits a time-ordered record stream into consecutive windows.
///
/// All records drive the clock, sampled in or not, so the window sequence does
/// not depend on the sampling ratio. Windows with no records between two busy
/// ones are emitted empty. The accumulator passed to the sink is reused after
/// the call returns.
class Windowizer {
 public:
  using Sink = std::function<void(const WindowAccumulator&)>;

  /// Largest run of consecutive empty windows accepted between two records.
  static constexpr std::int64_t kMaxGapWindows = 100'000'000;

  Windowizer(std::int64_t unit_ms, SamplerConfig sampling, Sink sink, bool track_src = true);

  /// Moves the clock to `timestamp_ms`, emitting every window that closes, and
  /// draws the sampling decision for the record. Throws OrderError when the
  /// timestamp is earlier than the previous one.
  bool admit(std::int64_t timestamp_ms);

  /// Counts an admitted record.
  void add(std::string_view src, std::string_view dst);

  void push(const FlowRecord& record) {
    if (admit(record.timestamp_ms)) add(record.src, record.dst);
  }

  /// Emits the last open window. Further records are rejected.
  void finish();

  std::uint64_t records_seen() const noexcept { return records_seen_; }
  std::uint64_t records_accepted() const noexcept { return records_accepted_; }
  std::uint64_t windows_emitted() const noexcept { return windows_emitted_; }

 private:
  void emit_current();

  std::int64_t unit_ms_;
  Sampler sampler_;
  Sink sink_;
  bool track_src_;
  bool started_ = false;
  bool finished_ = false;
  std::int64_t last_timestamp_ = 0;
  /// End of the open window; records below it skip the slow path.
  std::int64_t window_end_ms_ = std::numeric_limits<std::int64_t>::min();
  WindowAccumulator current_;
  std::uint64_t records_seen_ = 0;
  std::uint64_t records_accepted_ = 0;
  std::uint64_t windows_emitted_ = 0;
};

/// Batch form of Windowizer, mostly for tests and small inputs.
std::vector<WindowAccumulator> windowize(const std::vector<FlowRecord>& records, std::int64_t unit_ms,
                                         SamplerConfig sampling);

}  // namespace entdiff
