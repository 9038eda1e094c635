#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "entdiff/evaluation.hpp"
#include "entdiff/ingestion.hpp"
#include "json.hpp"

namespace entdiff {

struct AttackSpec {
  std::int64_t start_ms = 0;
  std::int64_t duration_ms = 0;
  std::string target_dst;
  /// Records per second aimed at target_dst.
  double attack_rate = 0.0;
  /// Draw a random source address per record instead of one fixed attacker.
  bool spoof_src = true;
  std::string label;
};

struct ScenarioSpec {
  std::int64_t duration_ms = 0;
  /// Benign records per second.
  double benign_rate = 0.0;
  std::int64_t dst_pool = 0;
  std::int64_t src_pool = 0;
  /// Zipf exponent of benign destination popularity; 0 is uniform.
  double skew = 1.0;
  std::vector<AttackSpec> attacks;
  std::uint64_t seed = 1;

  /// Throws ConfigError on an invalid scenario.
  void validate() const;
};

ScenarioSpec scenario_from_json(const nlohmann::json& document);
nlohmann::ordered_json to_json(const ScenarioSpec& spec);

/// Ground truth, one interval per attack, sorted by start.
std::vector<AttackInterval> truth_intervals(const ScenarioSpec& spec);

/// Reference scenario: `windows` one-minute windows of 200 records/s benign
/// traffic, Zipf(1.0) over 500 destinations and 2000 sources. With attacks,
/// five 3-minute spoofed-source floods at 10x the benign rate start at
/// windows/6, 2*windows/6, ..., 5*windows/6 minutes, which needs windows >= 18.
ScenarioSpec standard_scenario(std::uint64_t seed, std::int64_t windows = 120, bool with_attacks = true);

/// Address strings used for pool members.
std::string benign_dst_address(std::int64_t index);
std::string benign_src_address(std::int64_t index);

/// Deterministic record stream for a scenario, in timestamp order.
///
/// Benign arrivals form a Poisson process at benign_rate; each attack adds an
/// independent Poisson process at attack_rate over its interval. Streams are
/// merged by integer timestamp, ties going to the benign stream first.
class TrafficGenerator {
 public:
  explicit TrafficGenerator(ScenarioSpec spec);

  /// Writes the next record into `out`; false once the scenario is exhausted.
  bool next(FlowRecord& out);

  std::uint64_t generated() const noexcept { return generated_; }

 private:
  struct Stream {
    std::mt19937_64 rng;
    double next_ms = 0.0;
    double end_ms = 0.0;
    double rate_per_ms = 0.0;
    int attack = -1;  // -1 for benign traffic
    bool live = true;
  };

  void advance(Stream& stream);

  ScenarioSpec spec_;
  std::vector<double> dst_cdf_;
  std::vector<Stream> streams_;
  std::uint64_t generated_ = 0;
};

/// Writes the flow CSV (with header) and the truth CSV for `spec`. Returns the
/// number of flow records written.
std::uint64_t generate(const ScenarioSpec& spec, std::ostream& flows, std::ostream& truth);

}  // namespace entdiff
