#include "entdiff/config.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "entdiff/errors.hpp"

namespace entdiff {

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::tsallis:
      return "tsallis";
    case MeasureKind::shannon:
      return "shannon";
    case MeasureKind::renyi:
      return "renyi";
  }
  return "unknown";
}

std::string_view to_string(ArithmeticMode mode) { return mode == ArithmeticMode::integer ? "integer" : "real"; }

MeasureKind parse_measure(std::string_view text) {
  if (text == "tsallis") return MeasureKind::tsallis;
  if (text == "shannon") return MeasureKind::shannon;
  if (text == "renyi") return MeasureKind::renyi;
  throw ConfigError("unknown measure '" + std::string(text) + "' (expected tsallis, shannon or renyi)");
}

ArithmeticMode parse_mode(std::string_view text) {
  if (text == "integer") return ArithmeticMode::integer;
  if (text == "real" || text == "float") return ArithmeticMode::real;
  throw ConfigError("unknown arithmetic mode '" + std::string(text) + "' (expected integer or real)");
}

double RunConfig::effective_q() const {
  if (q) return *q;
  return sample_num == sample_den ? 8.0 : 5.0;
}

ArithmeticMode RunConfig::effective_mode() const {
  if (mode) return *mode;
  return measure == MeasureKind::tsallis ? ArithmeticMode::integer : ArithmeticMode::real;
}

EntropyMeasure RunConfig::entropy_measure() const {
  try {
    switch (measure) {
      case MeasureKind::shannon:
        return EntropyMeasure::make_shannon();
      case MeasureKind::renyi:
        return EntropyMeasure::make_renyi(alpha);
      case MeasureKind::tsallis:
        if (effective_mode() == ArithmeticMode::integer) {
          return EntropyMeasure::make_tsallis_int_scaled(static_cast<int>(effective_q()), precision);
        }
        return EntropyMeasure::make_tsallis(effective_q());
    }
  } catch (const InvalidParameterError& error) {
    throw ConfigError(error.what());
  }
  throw ConfigError("unknown measure");
}

DetectorConfig RunConfig::detector_config() const {
  DetectorConfig config;
  config.progression_size = progression;
  config.warmup_min = warmup_min;
  config.check_mode = check_mode;
  config.cooldown_windows = cooldown_windows;
  return config;
}

SamplerConfig RunConfig::sampler_config() const { return {sample_num, sample_den, seed}; }

void RunConfig::validate() const {
  sampler_config().validate();
  if (unit_ms <= 0) throw ConfigError("unit_ms must be positive");
  if (effective_mode() == ArithmeticMode::integer) {
    if (measure != MeasureKind::tsallis) throw ConfigError("integer mode is only available for the tsallis measure");
    const double value = effective_q();
    if (value < 2.0 || value != std::floor(value) || value > 64.0) {
      throw ConfigError(fmt::format("integer mode needs an integer q in [2, 64], got {}", value));
    }
    if (progression < 4) throw ConfigError("integer mode needs a progression of at least 4 windows");
  }
  if (progression < 2) throw ConfigError("progression must hold at least 2 windows");
  if (long_depth < 1) throw ConfigError("long_depth must be positive");
  if (tolerance_windows < 0) throw ConfigError("tolerance must be non-negative");
  entropy_measure();
}

nlohmann::ordered_json to_json(const RunConfig& config) {
  nlohmann::ordered_json out;
  out["measure"] = to_string(config.measure);
  out["q"] = config.effective_q();
  out["alpha"] = config.alpha;
  out["precision"] = config.precision;
  out["mode"] = to_string(config.effective_mode());
  out["unit_ms"] = config.unit_ms;
  out["progression"] = config.progression;
  out["warmup_min"] = config.detector_config().effective_warmup();
  out["check_mode"] = to_string(config.check_mode);
  out["cooldown_windows"] = config.cooldown_windows;
  out["sample_num"] = config.sample_num;
  out["sample_den"] = config.sample_den;
  out["seed"] = config.seed;
  out["strategy"] = config.all_strategies ? std::string("all") : std::string(to_string(config.strategy));
  out["long_depth"] = config.long_depth;
  out["tolerance_windows"] = config.tolerance_windows;
  out["max_parse_errors"] = config.max_parse_errors;
  return out;
}

namespace {

std::uint64_t unsigned_value(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_unsigned()) throw ConfigError("config key '" + key + "' needs a non-negative integer");
  return value.get<std::uint64_t>();
}

}  // namespace

void apply_json(RunConfig& config, const nlohmann::json& document) {
  if (!document.is_object()) throw ConfigError("config document must be a JSON object");
  try {
    for (const auto& [key, value] : document.items()) {
      if (key == "measure") {
        config.measure = parse_measure(value.get<std::string>());
      } else if (key == "q") {
        config.q = value.get<double>();
      } else if (key == "alpha") {
        config.alpha = value.get<double>();
      } else if (key == "precision") {
        config.precision = value.get<std::int64_t>();
      } else if (key == "mode") {
        config.mode = parse_mode(value.get<std::string>());
      } else if (key == "unit_ms") {
        config.unit_ms = value.get<std::int64_t>();
      } else if (key == "progression") {
        config.progression = unsigned_value(value, key);
      } else if (key == "warmup_min") {
        config.warmup_min = unsigned_value(value, key);
      } else if (key == "check_mode") {
        config.check_mode = parse_check_mode(value.get<std::string>());
      } else if (key == "cooldown_windows") {
        config.cooldown_windows = unsigned_value(value, key);
      } else if (key == "sample_num") {
        config.sample_num = unsigned_value(value, key);
      } else if (key == "sample_den") {
        config.sample_den = unsigned_value(value, key);
      } else if (key == "seed") {
        config.seed = unsigned_value(value, key);
      } else if (key == "strategy") {
        const auto text = value.get<std::string>();
        config.all_strategies = text == "all";
        if (!config.all_strategies) config.strategy = parse_strategy(text);
      } else if (key == "long_depth") {
        config.long_depth = unsigned_value(value, key);
      } else if (key == "tolerance_windows") {
        config.tolerance_windows = value.get<std::int64_t>();
      } else if (key == "max_parse_errors") {
        config.max_parse_errors = unsigned_value(value, key);
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& error) {
    throw ConfigError(std::string("invalid config value: ") + error.what());
  }
}

}  // namespace entdiff
