#include "doctest.h"
#include "entdiff/config.hpp"
#include "entdiff/errors.hpp"

using namespace entdiff;

TEST_CASE("defaults resolve from the sampling ratio and measure") {
  RunConfig c;
  CHECK(c.effective_q() == 5.0);
  CHECK(c.effective_mode() == ArithmeticMode::integer);
  CHECK(c.entropy_measure().name() == "tsallis-int(q=5,precision=1000000)");
  CHECK(c.unit_ms == 60000);
  CHECK(c.progression == 5);
  CHECK(c.detector_config().effective_warmup() == 5);
  CHECK(c.sampler_config().ratio_den == 20);
  c.sample_den = 1;
  CHECK(c.effective_q() == 8.0);
  c.q = 3;
  CHECK(c.effective_q() == 3.0);
  c.measure = MeasureKind::renyi;
  CHECK(c.effective_mode() == ArithmeticMode::real);
  CHECK(c.entropy_measure().name() == "renyi(alpha=0)");
  c.measure = MeasureKind::tsallis;
  c.mode = ArithmeticMode::real;
  CHECK(c.entropy_measure().name() == "tsallis(q=3)");
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("invalid combinations are rejected") {
  const auto invalid = [](auto change) {
    RunConfig c;
    change(c);
    CHECK_THROWS_AS(c.validate(), ConfigError);
  };
  invalid([](RunConfig& c) { c.q = 2.5; });
  invalid([](RunConfig& c) { c.q = 1.0; });
  invalid([](RunConfig& c) { c.progression = 3; });
  invalid([](RunConfig& c) {
    c.mode = ArithmeticMode::real;
    c.progression = 1;
  });
  invalid([](RunConfig& c) {
    c.measure = MeasureKind::shannon;
    c.mode = ArithmeticMode::integer;
  });
  invalid([](RunConfig& c) { c.unit_ms = 0; });
  invalid([](RunConfig& c) { c.sample_num = 0; });
  invalid([](RunConfig& c) { c.sample_num = 21; });
  invalid([](RunConfig& c) { c.precision = 0; });
  invalid([](RunConfig& c) {
    c.measure = MeasureKind::renyi;
    c.alpha = 1.0;
  });
  invalid([](RunConfig& c) { c.long_depth = 0; });
  invalid([](RunConfig& c) { c.tolerance_windows = -1; });

  RunConfig real_small;
  real_small.mode = ArithmeticMode::real;
  real_small.progression = 2;
  CHECK_NOTHROW(real_small.validate());
}

TEST_CASE("config documents overlay the defaults") {
  RunConfig c;
  apply_json(c, nlohmann::json::parse(R"({"measure":"shannon","unit_ms":1000,"check_mode":"listing","strategy":"s3"})"));
  CHECK(c.measure == MeasureKind::shannon);
  CHECK(c.unit_ms == 1000);
  CHECK(c.check_mode == CheckMode::listing);
  CHECK(c.strategy == Strategy::s3);
  CHECK(c.progression == 5);
  apply_json(c, nlohmann::json::parse(R"({"strategy":"all"})"));
  CHECK(c.all_strategies);

  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse(R"({"bogus":1})")), ConfigError);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse(R"({"unit_ms":"fast"})")), ConfigError);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse(R"({"progression":-4})")), ConfigError);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse(R"({"measure":"gini"})")), ConfigError);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json::parse("[1,2]")), ConfigError);
}

TEST_CASE("the resolved config round-trips") {
  RunConfig c;
  c.sample_den = 10;
  c.cooldown_windows = 2;
  c.seed = 99;
  const auto dumped = to_json(c);
  CHECK(dumped["q"] == 5.0);
  CHECK(dumped["mode"] == "integer");
  CHECK(dumped["warmup_min"] == 5);
  RunConfig back;
  apply_json(back, nlohmann::json::parse(dumped.dump()));
  CHECK(to_json(back) == dumped);
}

TEST_CASE("enum names") {
  CHECK(parse_measure("tsallis") == MeasureKind::tsallis);
  CHECK(parse_mode("float") == ArithmeticMode::real);
  CHECK(parse_mode("integer") == ArithmeticMode::integer);
  CHECK(to_string(MeasureKind::renyi) == "renyi");
  CHECK_THROWS_AS(parse_mode("double"), ConfigError);
}
