#include "entdiff/trafficgen.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "entdiff/errors.hpp"
#include "entdiff/flow_io.hpp"
#include "entdiff/rng.hpp"

namespace entdiff {

namespace {

constexpr std::int64_t kMaxPool = std::int64_t{1} << 20;

void append_octet(std::string& out, unsigned value) {
  if (value >= 100) out.push_back(static_cast<char>('0' + value / 100));
  if (value >= 10) out.push_back(static_cast<char>('0' + value / 10 % 10));
  out.push_back(static_cast<char>('0' + value % 10));
}

void format_ipv4(std::string& out, std::uint32_t address) {
  out.clear();
  append_octet(out, address >> 24);
  out.push_back('.');
  append_octet(out, (address >> 16) & 0xff);
  out.push_back('.');
  append_octet(out, (address >> 8) & 0xff);
  out.push_back('.');
  append_octet(out, address & 0xff);
}

// 10.0.0.1 onwards for destinations, 172.16.0.1 onwards for sources.
constexpr std::uint32_t kDstBase = 0x0a000001;
constexpr std::uint32_t kSrcBase = 0xac100001;

}  // namespace

void ScenarioSpec::validate() const {
  if (duration_ms <= 0) throw ConfigError("scenario duration_ms must be positive");
  if (!(benign_rate > 0.0) || !std::isfinite(benign_rate)) throw ConfigError("benign_rate must be positive");
  if (dst_pool < 1 || dst_pool > kMaxPool) throw ConfigError(fmt::format("dst_pool must lie in [1, {}]", kMaxPool));
  if (src_pool < 1 || src_pool > kMaxPool) throw ConfigError(fmt::format("src_pool must lie in [1, {}]", kMaxPool));
  if (!(skew >= 0.0) || !std::isfinite(skew)) throw ConfigError("skew must be a finite value >= 0");
  for (const auto& attack : attacks) {
    if (attack.start_ms < 0 || attack.duration_ms <= 0 || attack.start_ms + attack.duration_ms > duration_ms) {
      throw ConfigError(fmt::format("attack '{}' must lie within [0, {}] ms", attack.label, duration_ms));
    }
    if (!(attack.attack_rate > 0.0) || !std::isfinite(attack.attack_rate)) {
      throw ConfigError(fmt::format("attack '{}' needs a positive attack_rate", attack.label));
    }
    if (attack.target_dst.empty()) throw ConfigError(fmt::format("attack '{}' needs a target_dst", attack.label));
  }
}

ScenarioSpec scenario_from_json(const nlohmann::json& document) {
  ScenarioSpec spec;
  try {
    spec.duration_ms = document.at("duration_ms").get<std::int64_t>();
    spec.benign_rate = document.at("benign_rate").get<double>();
    spec.dst_pool = document.at("dst_pool").get<std::int64_t>();
    spec.src_pool = document.at("src_pool").get<std::int64_t>();
    spec.skew = document.value("skew", 1.0);
    spec.seed = document.value("seed", std::uint64_t{1});
    if (document.contains("attacks")) {
      for (const auto& item : document.at("attacks")) {
        AttackSpec attack;
        attack.start_ms = item.at("start_ms").get<std::int64_t>();
        attack.duration_ms = item.at("duration_ms").get<std::int64_t>();
        attack.target_dst = item.at("target_dst").get<std::string>();
        attack.attack_rate = item.at("attack_rate").get<double>();
        attack.spoof_src = item.value("spoof_src", true);
        attack.label = item.value("label", fmt::format("attack-{}", spec.attacks.size() + 1));
        spec.attacks.push_back(std::move(attack));
      }
    }
  } catch (const nlohmann::json::exception& error) {
    throw ConfigError(std::string("invalid scenario document: ") + error.what());
  }
  spec.validate();
  return spec;
}

nlohmann::ordered_json to_json(const ScenarioSpec& spec) {
  nlohmann::ordered_json out;
  out["duration_ms"] = spec.duration_ms;
  out["benign_rate"] = spec.benign_rate;
  out["dst_pool"] = spec.dst_pool;
  out["src_pool"] = spec.src_pool;
  out["skew"] = spec.skew;
  out["seed"] = spec.seed;
  auto attacks = nlohmann::ordered_json::array();
  for (const auto& attack : spec.attacks) {
    attacks.push_back({{"start_ms", attack.start_ms},
                       {"duration_ms", attack.duration_ms},
                       {"target_dst", attack.target_dst},
                       {"attack_rate", attack.attack_rate},
                       {"spoof_src", attack.spoof_src},
                       {"label", attack.label}});
  }
  out["attacks"] = std::move(attacks);
  return out;
}

std::vector<AttackInterval> truth_intervals(const ScenarioSpec& spec) {
  std::vector<AttackInterval> intervals;
  for (const auto& attack : spec.attacks) {
    intervals.push_back({attack.start_ms, attack.start_ms + attack.duration_ms, attack.label});
  }
  std::stable_sort(intervals.begin(), intervals.end(),
                   [](const auto& a, const auto& b) { return a.start_ms < b.start_ms; });
  return intervals;
}

ScenarioSpec standard_scenario(std::uint64_t seed, std::int64_t windows, bool with_attacks) {
  constexpr std::int64_t kMinute = 60'000;
  ScenarioSpec spec;
  spec.duration_ms = windows * kMinute;
  spec.benign_rate = 200.0;
  spec.dst_pool = 500;
  spec.src_pool = 2000;
  spec.skew = 1.0;
  spec.seed = seed;
  if (with_attacks) {
    for (int k = 1; k <= 5; ++k) {
      AttackSpec attack;
      attack.start_ms = k * windows / 6 * kMinute;
      attack.duration_ms = 3 * kMinute;
      attack.target_dst = "10.255.0.1";
      attack.attack_rate = 10.0 * spec.benign_rate;
      attack.spoof_src = true;
      attack.label = fmt::format("flood-{}", k);
      spec.attacks.push_back(std::move(attack));
    }
  }
  spec.validate();
  return spec;
}

std::string benign_dst_address(std::int64_t index) {
  std::string out;
  format_ipv4(out, kDstBase + static_cast<std::uint32_t>(index));
  return out;
}

std::string benign_src_address(std::int64_t index) {
  std::string out;
  format_ipv4(out, kSrcBase + static_cast<std::uint32_t>(index));
  return out;
}

TrafficGenerator::TrafficGenerator(ScenarioSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  dst_cdf_.resize(static_cast<std::size_t>(spec_.dst_pool));
  double total = 0.0;
  for (std::size_t rank = 0; rank < dst_cdf_.size(); ++rank) {
    total += std::pow(static_cast<double>(rank + 1), -spec_.skew);
    dst_cdf_[rank] = total;
  }
  for (auto& value : dst_cdf_) value /= total;

  const auto duration = static_cast<double>(spec_.duration_ms);
  Stream benign{std::mt19937_64(mix_seed(spec_.seed)), 0.0, duration, spec_.benign_rate / 1000.0, -1, true};
  streams_.push_back(std::move(benign));
  for (std::size_t i = 0; i < spec_.attacks.size(); ++i) {
    const auto& attack = spec_.attacks[i];
    Stream stream{std::mt19937_64(mix_seed(spec_.seed ^ mix_seed(i + 1))), static_cast<double>(attack.start_ms),
                  static_cast<double>(attack.start_ms + attack.duration_ms), attack.attack_rate / 1000.0,
                  static_cast<int>(i), true};
    streams_.push_back(std::move(stream));
  }
  // The first arrival of each stream comes one exponential gap after it opens.
  for (auto& stream : streams_) advance(stream);
}

void TrafficGenerator::advance(Stream& stream) {
  const double gap = -std::log1p(-uniform_unit(stream.rng)) / stream.rate_per_ms;
  stream.next_ms += gap;
  if (stream.next_ms >= stream.end_ms) stream.live = false;
}

bool TrafficGenerator::next(FlowRecord& out) {
  Stream* chosen = nullptr;
  std::int64_t best = 0;
  for (auto& stream : streams_) {
    if (!stream.live) continue;
    const auto at = static_cast<std::int64_t>(stream.next_ms);
    if (chosen == nullptr || at < best) {
      chosen = &stream;
      best = at;
    }
  }
  if (chosen == nullptr) return false;

  out.timestamp_ms = best;
  auto& rng = chosen->rng;
  if (chosen->attack < 0) {
    const double u = uniform_unit(rng);
    const auto rank = static_cast<std::size_t>(std::upper_bound(dst_cdf_.begin(), dst_cdf_.end(), u) - dst_cdf_.begin());
    format_ipv4(out.dst, kDstBase + static_cast<std::uint32_t>(std::min(rank, dst_cdf_.size() - 1)));
    format_ipv4(out.src, kSrcBase + static_cast<std::uint32_t>(
                                        uniform_below(rng, static_cast<std::uint64_t>(spec_.src_pool))));
  } else {
    const auto& attack = spec_.attacks[static_cast<std::size_t>(chosen->attack)];
    out.dst = attack.target_dst;
    if (attack.spoof_src) {
      format_ipv4(out.src, static_cast<std::uint32_t>(rng() >> 32));
    } else {
      format_ipv4(out.src, 0xcb007100u + static_cast<std::uint32_t>(chosen->attack % 254 + 1));
    }
  }
  advance(*chosen);
  ++generated_;
  return true;
}

std::uint64_t generate(const ScenarioSpec& spec, std::ostream& flows, std::ostream& truth) {
  TrafficGenerator generator(spec);
  FlowRecord record;
  std::string line;
  flows << kFlowCsvHeader << '\n';
  while (generator.next(record)) {
    line.clear();
    line += std::to_string(record.timestamp_ms);
    line.push_back(',');
    line += record.src;
    line.push_back(',');
    line += record.dst;
    line.push_back('\n');
    flows.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
  const auto intervals = truth_intervals(spec);
  write_truth_csv(truth, intervals);
  return generator.generated();
}

}  // namespace entdiff
