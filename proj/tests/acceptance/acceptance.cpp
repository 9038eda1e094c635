// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "entdiff/baseline.hpp"
#include "entdiff/detector.hpp"
#include "entdiff/entropy.hpp"
#include "entdiff/evaluation.hpp"
#include "entdiff/ingestion.hpp"
#include "entdiff/pipeline.hpp"
#include "entdiff/slope.hpp"
#include "entdiff/trafficgen.hpp"
#include "entdiff/welford.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace entdiff;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

template <typename F>
double timed(F&& f) {
  const auto start = Clock::now();
  f();
  return seconds_since(start);
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / fmt::format("entdiff_acceptance_{}", ::getpid());
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// 1 ---------------------------------------------------------------------------

Outcome welford_equivalence() {
  std::mt19937_64 rng(1);
  double worst_rel = 0.0;
  int integer_mismatches = 0;
  const double seconds = timed([&] {
    for (int seq = 0; seq < 1000; ++seq) {
      const std::size_t length = 1 + rng() % 10000;
      const auto magnitude = static_cast<std::int64_t>(std::pow(10.0, static_cast<double>(rng() % 10)));
      std::uniform_int_distribution<std::int64_t> dist(-magnitude, magnitude);
      std::vector<std::int64_t> ints(length);
      std::vector<double> reals(length);
      for (std::size_t i = 0; i < length; ++i) {
        ints[i] = dist(rng);
        reals[i] = static_cast<double>(ints[i]) + (seq % 2 ? 0.5 * std::ldexp(static_cast<double>(rng() >> 11), -53) : 0.0);
      }
      RealSlopeStats real;
      IntegerSlopeStats integer;
      oracle::IntegerWelfordReplay replay;
      for (std::size_t i = 0; i < length; ++i) {
        real.update(reals[i]);
        integer.update(ints[i]);
        replay.update(ints[i]);
      }
      const long double expected = oracle::two_pass_variance(reals);
      const long double got = static_cast<long double>(real.m2()) / static_cast<long double>(real.count());
      const double rel = expected == 0 ? static_cast<double>(std::fabs(got)) : static_cast<double>(std::fabs(got - expected) / expected);
      worst_rel = std::max(worst_rel, rel);
      if (oracle::BigInt(to_string(integer.m2())) != replay.m2 || oracle::BigInt(integer.mean()) != replay.mean ||
          integer.count() != static_cast<std::int64_t>(length)) {
        ++integer_mismatches;
      }
    }
  });
  const bool pass = worst_rel <= 1e-9 && integer_mismatches == 0 && seconds < 10.0;
  return {pass, fmt::format("worst float rel err {:.2e} (<= 1e-9), integer mismatches {}, {:.2f} s (< 10 s)", worst_rel,
                            integer_mismatches, seconds)};
}

// 2 ---------------------------------------------------------------------------

Outcome mean_shift_stability() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> delta(-10.0, 10.0);
  double worst_rel = 0.0;
  for (int seq = 0; seq < 1000; ++seq) {
    std::vector<double> xs(2 + rng() % 10000);
    for (auto& x : xs) x = 1e9 + (seq % 2 ? std::round(delta(rng)) : delta(rng));
    RealSlopeStats stats;
    for (double x : xs) stats.update(x);
    const long double expected = oracle::two_pass_variance(xs);
    if (expected == 0) continue;
    const long double got = static_cast<long double>(stats.m2()) / static_cast<long double>(stats.count());
    worst_rel = std::max(worst_rel, static_cast<double>(std::fabs(got - expected) / expected));
  }
  return {worst_rel <= 1e-9, fmt::format("worst rel err {:.2e} over 1000 sequences around 1e9 (<= 1e-9)", worst_rel)};
}

// 3 ---------------------------------------------------------------------------

Outcome slope_oracle() {
  const std::vector<std::int64_t> xs = {0, 1, 2, 3, 4};
  std::vector<std::int64_t> ys(5);
  int mismatches = 0;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100000; ++i) {
    const auto bound = static_cast<std::int64_t>(std::pow(10.0, static_cast<double>(1 + i % 12)));
    std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
    for (auto& y : ys) y = dist(rng);
    mismatches += best_fit_slope(xs, ys) != static_cast<std::int64_t>(oracle::truncated_slope(xs, ys));
  }
  int exhaustive = 0;
  for (int code = 0; code < 3125; ++code) {
    int c = code;
    for (auto& y : ys) {
      y = c % 5 - 2;
      c /= 5;
    }
    mismatches += best_fit_slope(xs, ys) != static_cast<std::int64_t>(oracle::truncated_slope(xs, ys));
    ++exhaustive;
  }
  return {mismatches == 0, fmt::format("{} mismatches over 100000 random + {} exhaustive series", mismatches, exhaustive)};
}

// 4 ---------------------------------------------------------------------------

Outcome entropy_correctness() {
  const auto vectors = oracle::count_vectors(8, 4);
  double worst = 0.0;
  int scaled_off = 0;
  double worst_scaled = 0.0;
  for (const auto& counts : vectors) {
    FrequencyTable t;
    for (std::size_t i = 0; i < counts.size(); ++i) t.add("k" + std::to_string(i), counts[i]);
    const auto compare = [&](double got, const oracle::Float50& want) {
      const double w = static_cast<double>(want);
      const double err = std::fabs(got - w) / std::max(1.0, std::fabs(w));
      worst = std::max(worst, err);
    };
    compare(shannon(t), oracle::shannon(counts));
    compare(renyi(t, 0.0), oracle::renyi(counts, 0.0));
    compare(renyi(t, 2.0), oracle::renyi(counts, 2.0));
    for (int q : {2, 5, 8}) {
      compare(tsallis(t, q), oracle::tsallis(counts, q));
      const auto exact = oracle::tsallis_exact(counts, q);
      const auto scaled = tsallis_int_scaled(t, q, 1'000'000);
      const double diff = std::fabs(static_cast<double>(scaled) / 1e6 - static_cast<double>(exact));
      worst_scaled = std::max(worst_scaled, diff);
      if (diff > 1e-6 || oracle::BigInt(scaled) != oracle::floor_scaled(exact, 1'000'000)) ++scaled_off;
    }
  }
  const bool pass = worst <= 4 * std::numeric_limits<double>::epsilon() && scaled_off == 0;
  return {pass, fmt::format("{} count vectors, worst rel err {:.1e} (<= 4 ulp), scaled max diff {:.2e} (<= 1e-6), {} off",
                            vectors.size(), worst, worst_scaled, scaled_off)};
}

// 5-7 shared ------------------------------------------------------------------

RunConfig default_config(std::uint64_t seed) {
  RunConfig config;  // Tsallis q = 5 integer mode, 5% sampling, P = 5
  config.seed = seed;
  return config;
}

Outcome standard_scenario_detection() {
  int good_seeds = 0;
  std::string per_seed;
  const double seconds = timed([&] {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto spec = standard_scenario(seed);
      const auto result = run_detect(spec, default_config(seed));
      const auto truth = truth_intervals(spec);
      const auto counts = classify_timeline(result.detection_starts_ms, truth, 60000, 1);
      good_seeds += counts.tp >= 4;
      per_seed += fmt::format("{}{}", seed == 1 ? "" : " ", counts.tp);
    }
  });
  const bool pass = good_seeds >= 8 && seconds < 60.0;
  return {pass, fmt::format("{}/10 seeds detect >= 4 of 5 attacks (need 8), per-seed hits [{}], {:.1f} s (< 60 s)",
                            good_seeds, per_seed, seconds)};
}

Outcome benign_fpr() {
  double worst = 0.0, sum = 0.0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto spec = standard_scenario(seed, 480, false);
    const auto result = run_detect(spec, default_config(seed));
    const auto rate = time_based_fpr(static_cast<std::int64_t>(result.detection_starts_ms.size()), 0, 480).value();
    worst = std::max(worst, rate);
    sum += rate;
    per_seed += fmt::format("{}{:.1f}", seed == 1 ? "" : " ", 100 * rate);
  }
  const double mean = sum / 10;
  return {worst <= 0.07 && mean <= 0.04,
          fmt::format("max FPR {:.2f}% (<= 7%), mean {:.2f}% (<= 4%), per seed % [{}]", 100 * worst, 100 * mean,
                      per_seed)};
}

Outcome baseline_inferiority() {
  const std::uint64_t seed = 1;
  const auto spec = standard_scenario(seed);
  const std::int64_t windows = 120, actual = static_cast<std::int64_t>(spec.attacks.size());
  const auto detector = run_detect(spec, default_config(seed));
  const double detector_fpr =
      time_based_fpr(static_cast<std::int64_t>(detector.detection_starts_ms.size()), actual, windows).value();

  struct Entropy {
    std::string name;
    std::function<void(RunConfig&)> set;
  };
  const std::vector<Entropy> entropies = {
      {"shannon", [](RunConfig& c) { c.measure = MeasureKind::shannon; }},
      {"renyi0", [](RunConfig& c) { c.measure = MeasureKind::renyi; }},
      {"tsallis5", [](RunConfig&) {}},
  };
  int weaker = 0, total = 0;
  std::size_t best = 0;
  std::string failures;
  for (const auto& entropy : entropies) {
    auto config = default_config(seed);
    entropy.set(config);
    config.all_strategies = true;
    const auto result = run_baseline(spec, config);
    for (auto strategy : kAllStrategies) {
      const auto fired = result.firings_ms[static_cast<std::size_t>(strategy) - 1].size();
      best = std::max(best, fired);
      const double fpr = time_based_fpr(static_cast<std::int64_t>(fired), actual, windows).value();
      ++total;
      if (fpr >= 5 * detector_fpr) {
        ++weaker;
      } else {
        failures += fmt::format(" {}/{}={:.1f}%", to_string(strategy), entropy.name, 100 * fpr);
      }
    }
  }
  const bool pass = weaker == total && best >= static_cast<std::size_t>(10 * actual);
  return {pass, fmt::format("detector FPR {:.2f}%; {}/{} strategy-entropy pairs >= 5x{}; best baseline fired {} "
                            "(need >= {})",
                            100 * detector_fpr, weaker, total, failures.empty() ? "" : " (below:" + failures + ")",
                            best, 10 * actual)};
}

// 8-9 -------------------------------------------------------------------------

/// Flow CSV with exactly `records` records at 1000 records/s.
std::string write_corpus(std::size_t records) {
  const auto path = (scratch_dir() / fmt::format("corpus_{}.csv", records)).string();
  ScenarioSpec spec;
  spec.benign_rate = 1000;
  spec.duration_ms = static_cast<std::int64_t>(records) * 2;  // twice the expected length, truncated below
  spec.dst_pool = 500;
  spec.src_pool = 2000;
  spec.seed = 8;
  TrafficGenerator generator(spec);
  std::ofstream out(path, std::ios::binary);
  out << kFlowCsvHeader << '\n';
  FlowRecord r;
  std::string line;
  for (std::size_t i = 0; i < records && generator.next(r); ++i) {
    line.clear();
    fmt::format_to(std::back_inserter(line), "{},{},{}\n", r.timestamp_ms, r.src, r.dst);
    out << line;
  }
  return path;
}

/// Fastest of `reps` detect runs over `path`.
double best_detect_seconds(const std::string& path, const RunConfig& config, int reps, RunSummary* summary = nullptr) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto start = Clock::now();
    const auto result = run_detect(path, config);
    best = std::min(best, seconds_since(start));
    if (summary) *summary = result.summary;
  }
  return best;
}

struct Corpora {
  std::string c5, c6, c7;
};

Outcome linear_scaling(const Corpora& corpora) {
  const RunConfig config;
  best_detect_seconds(corpora.c6, config, 1);  // warm the page cache
  const double t5 = best_detect_seconds(corpora.c5, config, 15);
  const double t6 = best_detect_seconds(corpora.c6, config, 5);
  const double t7 = best_detect_seconds(corpora.c7, config, 3);
  const double r1 = t6 / t5, r2 = t7 / t6;
  const auto within = [](double r) { return r >= 10.0 / 1.5 && r <= 10.0 * 1.5; };
  return {within(r1) && within(r2),
          fmt::format("1e5: {:.4f} s, 1e6: {:.4f} s, 1e7: {:.3f} s; decade ratios {:.2f}, {:.2f} (each in [6.67, 15])", t5,
                      t6, t7, r1, r2)};
}

Outcome sampling_speedup(const Corpora& corpora) {
  RunConfig full;
  full.sample_den = 1;
  const RunConfig sampled;
  RunSummary full_summary, sampled_summary;
  const double t_full = best_detect_seconds(corpora.c7, full, 3, &full_summary);
  const double t_sampled = best_detect_seconds(corpora.c7, sampled, 3, &sampled_summary);

  // Accept count replayed from an independent sampler with the same seed.
  Sampler replay(sampled.sampler_config());
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 0; i < sampled_summary.records_read; ++i) accepted += replay.accept();

  const double n = static_cast<double>(sampled_summary.records_read);
  const double expected = n / 20.0;
  const double sigma = std::sqrt(n * 0.05 * 0.95);
  const bool count_ok = sampled_summary.records_sampled == accepted &&
                        std::fabs(static_cast<double>(accepted) - expected) <= 3 * sigma &&
                        full_summary.records_sampled == full_summary.records_read;
  const double speedup = t_full / t_sampled;
  const double record_ratio = n / static_cast<double>(sampled_summary.records_sampled);
  return {count_ok && speedup >= 5.0,
          fmt::format("processed {} of {} records (replayed accept count {}, ratio {:.2f}, 3 sigma band ok: {}); "
                      "wall clock {:.3f} s -> {:.3f} s, speedup {:.2f}x (>= 5x)",
                      sampled_summary.records_sampled, sampled_summary.records_read, accepted, record_ratio,
                      std::fabs(static_cast<double>(accepted) - expected) <= 3 * sigma, t_full, t_sampled, speedup)};
}

// 10 --------------------------------------------------------------------------

Outcome arithmetic_fixtures() {
  bool pass = raw_fp(38, 26) == 12 && raw_fp(10, 4) == 6 && raw_fp(4, 4) == 0;
  constexpr std::int64_t u = 60000;
  const std::vector<AttackInterval> attacks = {
      {10 * u, 12 * u, "a"}, {30 * u, 32 * u, "b"}, {50 * u, 52 * u, "c"}, {70 * u, 72 * u, "d"}};
  const std::vector<std::int64_t> detections = {10 * u, 20 * u, 50 * u, 60 * u};
  const auto c = classify_timeline(detections, attacks, u, 1);
  pass = pass && c.fp == 2 && c.fn == 2;
  return {pass, fmt::format("raw_fp (38,26)={} (10,4)={} (4,4)={}; timeline fp={} fn={}", raw_fp(38, 26), raw_fp(10, 4),
                            raw_fp(4, 4), c.fp, c.fn)};
}

// 11 --------------------------------------------------------------------------

int run_cli(const std::string& args) {
  const int status = std::system((std::string(ENTDIFF_CLI_PATH) + " " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  std::vector<std::string> outputs[2];
  bool ran = true;
  for (int round = 0; round < 2; ++round) {
    const auto dir = scratch_dir() / fmt::format("determinism_{}", round);
    fs::create_directories(dir);
    const auto p = [&](const char* name) { return (dir / name).string(); };
    ran = ran && run_cli(fmt::format("generate --preset standard --seed 42 --out {} --truth {}", p("flows.csv"),
                                     p("truth.csv"))) == 0;
    ran = ran && run_cli(fmt::format("detect {} --seed 42 --out {} --series {}", p("flows.csv"), p("det.jsonl"),
                                     p("series.csv"))) == 0;
    ran = ran && run_cli(fmt::format("baseline {} --seed 42 --strategy all --out {}", p("flows.csv"), p("base.jsonl"))) == 0;
    ran = ran && run_cli(fmt::format("eval --detections {} --truth {} --windows 120 --format json --out {}",
                                     p("det.jsonl"), p("truth.csv"), p("report.json"))) == 0;
    for (const char* name : {"flows.csv", "truth.csv", "det.jsonl", "series.csv", "base.jsonl", "report.json"}) {
      outputs[round].push_back(read_file(dir / name));
    }
  }
  const bool identical = outputs[0] == outputs[1];
  bool nonempty = true;
  for (const auto& o : outputs[0]) nonempty = nonempty && !o.empty();
  return {ran && identical && nonempty,
          fmt::format("pipeline ran: {}; 6 output files byte-identical across runs: {}", ran, identical)};
}

}  // namespace

int main() {
  int failed = 0;
  const auto report = [&](int id, const char* title, const Outcome& o) {
    std::cout << fmt::format("[{}] criterion {:>2} {}: {}", o.pass ? "PASS" : "FAIL", id, title, o.detail) << std::endl;
    failed += !o.pass;
  };
  const auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  report(1, "welford oracle equivalence", guarded(welford_equivalence));
  report(2, "mean-shift numerical stability", guarded(mean_shift_stability));
  report(3, "slope oracle", guarded(slope_oracle));
  report(4, "entropy correctness", guarded(entropy_correctness));
  report(5, "attack detection on the standard scenario", guarded(standard_scenario_detection));
  report(6, "benign false-positive band", guarded(benign_fpr));
  report(7, "baseline inferiority", guarded(baseline_inferiority));

  Corpora corpora;
  try {
    corpora = {write_corpus(100'000), write_corpus(1'000'000), write_corpus(10'000'000)};
  } catch (const std::exception& e) {
    std::cerr << "corpus generation failed: " << e.what() << '\n';
  }
  report(8, "linear scaling", guarded([&] { return linear_scaling(corpora); }));
  report(9, "sampling speedup", guarded([&] { return sampling_speedup(corpora); }));
  report(10, "reference arithmetic fixtures", guarded(arithmetic_fixtures));
  report(11, "end-to-end determinism", guarded(determinism));

  std::error_code ec;
  fs::remove_all(scratch_dir(), ec);
  std::cout << fmt::format("{} of 11 criteria passed", 11 - failed) << std::endl;
  return failed == 0 ? 0 : 1;
}
