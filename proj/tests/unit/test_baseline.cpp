#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "entdiff/baseline.hpp"
#include "entdiff/errors.hpp"
#include "oracles.hpp"

using namespace entdiff;

namespace {

/// Window whose dst/src tables hold the given counts.
WindowAccumulator window_of(std::int64_t index, const std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
  WindowAccumulator w;
  w.window_index = index;
  for (std::size_t i = 0; i < dst.size(); ++i) w.dst_table.add("d" + std::to_string(i), dst[i]);
  for (std::size_t i = 0; i < src.size(); ++i) w.src_table.add("s" + std::to_string(i), src[i]);
  w.records_seen = w.dst_table.total();
  return w;
}

std::vector<BaselineStep> run(BaselineDetector& b, const std::vector<WindowAccumulator>& windows) {
  std::vector<BaselineStep> out;
  for (const auto& w : windows) out.push_back(b.update(w));
  return out;
}

std::vector<WindowAccumulator> random_windows(std::mt19937_64& rng, std::size_t n) {
  std::vector<WindowAccumulator> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint64_t> dst(1 + rng() % 30), src(1 + rng() % 30);
    for (auto& c : dst) c = 1 + rng() % 20;
    for (auto& c : src) c = 1 + rng() % 20;
    if (rng() % 10 == 0) dst = {50 + rng() % 100};
    out.push_back(window_of(static_cast<std::int64_t>(i), dst, src));
  }
  return out;
}

}  // namespace

TEST_CASE("running mean threshold") {
  RunningMeanThreshold t;
  CHECK_FALSE(t.current().has_value());
  t.ingest(10);
  t.ingest(10);
  t.ingest(10);
  CHECK(*t.current() == 10.0);
  t.ingest(2);
  CHECK(*t.current() == 8.0);
  CHECK(t.count() == 4);
}

TEST_CASE("running mean equals the exact mean of past values") {
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> dist(0.0, 1e6);
  RunningMeanThreshold t;
  oracle::Rational sum = 0;
  for (int i = 1; i <= 20000; ++i) {
    const double x = dist(rng);
    t.ingest(x);
    sum += oracle::Rational(x);
    if (i % 1000 == 0) {
      const double exact = static_cast<double>(sum / i);
      CHECK(*t.current() == doctest::Approx(exact).epsilon(1e-15));
    }
  }
}

TEST_CASE("strategy predicates") {
  ThresholdVector thr{1.0, 1.0, 1.0, 6.0};
  CHECK(evaluate_strategy(Strategy::s7, EntropyVector{0, 0, 0, 5}, thr));
  CHECK_FALSE(evaluate_strategy(Strategy::s3, EntropyVector{0.5, 0, 0, 7}, thr));
  CHECK_THROWS_AS(evaluate_strategy(Strategy::s1, EntropyVector{}, ThresholdVector{}), NotReadyError);
}

TEST_CASE("strategy truth table") {
  // Each of the four entropies either below (true) or above its threshold.
  const ThresholdVector thr{10.0, 20.0, 30.0, 40.0};
  for (int mask = 0; mask < 16; ++mask) {
    const bool dst_st = mask & 1, dst_lt = mask & 2, src_st = mask & 4, src_lt = mask & 8;
    const EntropyVector e{dst_st ? 5.0 : 15.0, dst_lt ? 15.0 : 25.0, src_st ? 25.0 : 35.0, src_lt ? 35.0 : 45.0};
    CHECK(evaluate_strategy(Strategy::s1, e, thr) == (dst_st && dst_lt));
    CHECK(evaluate_strategy(Strategy::s2, e, thr) == (src_st && src_lt));
    CHECK(evaluate_strategy(Strategy::s3, e, thr) == (dst_st && src_lt));
    CHECK(evaluate_strategy(Strategy::s4, e, thr) == dst_st);
    CHECK(evaluate_strategy(Strategy::s5, e, thr) == src_st);
    CHECK(evaluate_strategy(Strategy::s6, e, thr) == dst_lt);
    CHECK(evaluate_strategy(Strategy::s7, e, thr) == src_lt);
  }
  // equality is not below
  CHECK_FALSE(evaluate_strategy(Strategy::s4, EntropyVector{10.0, 0, 0, 0}, thr));
}

TEST_CASE("strategy names") {
  CHECK(parse_strategy("S3") == Strategy::s3);
  CHECK(parse_strategy("s7") == Strategy::s7);
  CHECK(to_string(Strategy::s5) == "S5");
  CHECK_THROWS_AS(parse_strategy("S8"), ConfigError);
  CHECK_THROWS_AS(parse_strategy(""), ConfigError);
}

TEST_CASE("stationary traffic never fires") {
  BaselineDetector b(EntropyMeasure::make_shannon());
  for (std::int64_t i = 0; i < 50; ++i) {
    const auto& step = b.update(window_of(i, {3, 3, 3, 3}, {2, 2, 2}));
    for (auto s : kAllStrategies) REQUIRE_FALSE(step.fired_for(s));
    CHECK(step.ready == (i > 0));
  }
}

TEST_CASE("S4 fires on a short-term entropy drop") {
  RunningMeanThreshold thr;
  std::vector<bool> fired;
  for (double e : {10.0, 10.0, 10.0, 2.0}) {
    const auto current = thr.current();
    fired.push_back(current && evaluate_strategy(Strategy::s4, EntropyVector{e, 0, 0, 0},
                                                 ThresholdVector{current, 0.0, 0.0, 0.0}));
    thr.ingest(e);
  }
  CHECK(fired == std::vector<bool>{false, false, false, true});

  BaselineDetector b(EntropyMeasure::make_tsallis_int_scaled(2, 100));
  // tsallis-int(q=2, precision=100) of k equal counts is floor(100 (1 - 1/k))
  const std::vector<std::vector<std::uint64_t>> dst = {
      std::vector<std::uint64_t>(10, 1), std::vector<std::uint64_t>(10, 1), std::vector<std::uint64_t>(10, 1), {1, 1}};
  std::vector<BaselineStep> steps;
  for (std::size_t i = 0; i < dst.size(); ++i) steps.push_back(b.update(window_of(i, dst[i], {1})));
  CHECK(steps[0].entropies->dst_ste == 90.0);
  CHECK(steps[3].entropies->dst_ste == 50.0);
  CHECK(*steps[3].thresholds.dst_stthr == 90.0);
  CHECK(steps[3].fired_for(Strategy::s4));
  CHECK_FALSE(steps[2].fired_for(Strategy::s4));
}

TEST_CASE("long-term entropy merges the last L windows") {
  BaselineDetector b(EntropyMeasure::make_shannon(), 2);
  b.update(window_of(0, {4}, {1}));
  auto w1 = window_of(1, {}, {1});
  w1.dst_table.add("d1", 4);
  CHECK(b.update(w1).entropies->dst_lte == doctest::Approx(std::log(2.0)));
  auto w2 = window_of(2, {}, {1});
  w2.dst_table.add("d1", 4);
  CHECK(b.update(w2).entropies->dst_lte == doctest::Approx(0.0));  // d0 has left the history
  CHECK_THROWS_AS(BaselineDetector(EntropyMeasure::make_shannon(), 0), InvalidParameterError);
}

TEST_CASE("thresholds never include the current window") {
  std::mt19937_64 rng(97);
  const auto windows = random_windows(rng, 200);
  BaselineDetector b(EntropyMeasure::make_renyi(2.0));
  std::vector<double> past;
  for (const auto& w : windows) {
    const auto& step = b.update(w);
    if (past.empty()) {
      CHECK_FALSE(step.thresholds.dst_stthr.has_value());
    } else {
      double sum = 0;
      for (double x : past) sum += x;
      CHECK(*step.thresholds.dst_stthr == doctest::Approx(sum / past.size()).epsilon(1e-12));
    }
    past.push_back(step.entropies->dst_ste);
  }
}

TEST_CASE("conjunction strategies fire on a subset of their components") {
  std::mt19937_64 rng(101);
  for (const auto& measure : {EntropyMeasure::make_shannon(), EntropyMeasure::make_renyi(0.0),
                              EntropyMeasure::make_tsallis_int_scaled(5, 1'000'000)}) {
    BaselineDetector b(measure);
    for (const auto& step : run(b, random_windows(rng, 300))) {
      if (step.fired_for(Strategy::s1)) CHECK((step.fired_for(Strategy::s4) && step.fired_for(Strategy::s6)));
      if (step.fired_for(Strategy::s2)) CHECK((step.fired_for(Strategy::s5) && step.fired_for(Strategy::s7)));
      if (step.fired_for(Strategy::s3)) CHECK((step.fired_for(Strategy::s4) && step.fired_for(Strategy::s7)));
    }
  }
}

TEST_CASE("empty windows repeat the previous entropies") {
  BaselineDetector b(EntropyMeasure::make_shannon());
  CHECK_FALSE(b.update(window_of(0, {}, {})).entropies.has_value());
  const auto first = *b.update(window_of(1, {1, 2}, {3})).entropies;
  const auto& repeated = b.update(window_of(2, {}, {}));
  REQUIRE(repeated.entropies.has_value());
  CHECK(repeated.entropies->dst_ste == first.dst_ste);
  CHECK(repeated.entropies->src_ste == first.src_ste);
}
