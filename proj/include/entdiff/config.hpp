#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "entdiff/baseline.hpp"
#include "entdiff/detector.hpp"
#include "entdiff/entropy.hpp"
#include "entdiff/ingestion.hpp"
#include "json.hpp"

namespace entdiff {

enum class MeasureKind { tsallis, shannon, renyi };
enum class ArithmeticMode { integer, real };

std::string_view to_string(MeasureKind kind);
std::string_view to_string(ArithmeticMode mode);
MeasureKind parse_measure(std::string_view text);
ArithmeticMode parse_mode(std::string_view text);

/// Every tunable of a run. Unset optionals resolve to defaults that depend on
/// other fields (see the effective_* accessors).
struct RunConfig {
  MeasureKind measure = MeasureKind::tsallis;
  /// Tsallis q; 8 when every record is kept, 5 when sampling.
  std::optional<double> q;
  double alpha = 0.0;
  std::int64_t precision = 1'000'000;
  /// Integer for Tsallis, real for the other measures.
  std::optional<ArithmeticMode> mode;

  std::int64_t unit_ms = 60'000;
  std::size_t progression = 5;
  std::optional<std::size_t> warmup_min;
  CheckMode check_mode = CheckMode::algorithm1;
  std::size_t cooldown_windows = 0;

  std::uint64_t sample_num = 1;
  std::uint64_t sample_den = 20;
  std::uint64_t seed = 1;

  Strategy strategy = Strategy::s1;
  bool all_strategies = false;
  std::size_t long_depth = 10;

  std::int64_t tolerance_windows = 1;
  std::uint64_t max_parse_errors = 0;

  double effective_q() const;
  ArithmeticMode effective_mode() const;
  EntropyMeasure entropy_measure() const;
  DetectorConfig detector_config() const;
  SamplerConfig sampler_config() const;

  /// Throws ConfigError on any invalid combination.
  void validate() const;
};

/// Fully resolved configuration, defaults filled in.
nlohmann::ordered_json to_json(const RunConfig& config);

/// Overlays the keys of a config document (the to_json layout; every key
/// optional). Unknown keys are rejected with ConfigError.
void apply_json(RunConfig& config, const nlohmann::json& document);

}  // namespace entdiff
