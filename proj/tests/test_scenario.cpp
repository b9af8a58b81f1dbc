#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "irslab/scenario.hpp"

using namespace irslab;
using nlohmann::json;

TEST_CASE("default preset matches the published layout") {
  const Scenario s = Scenario::preset("default");
  CHECK(s.num_irs == 3);
  CHECK(s.irs_elements == 36);
  CHECK(s.sbs_antennas == 6);
  CHECK(s.num_su == 2);
  CHECK(s.num_pu == 2);
  CHECK(s.num_subchannels == 2);
  CHECK(s.pbs_pos.x == 300.0);
  CHECK(s.sbs_pos.z == 50.0);
  CHECK(s.irs_pos[2].x == 80.0);
  CHECK(s.sampling_hz == doctest::Approx(6e6));
  CHECK(s.detection_target == doctest::Approx(0.9));
  CHECK(s.false_alarm_max == doctest::Approx(0.1));
  CHECK(s.idle_prior == doctest::Approx(0.8));
  CHECK(s.exp_bs_user == doctest::Approx(3.75));
  CHECK(s.exp_bs_irs == doctest::Approx(2.2));
  CHECK(s.sbs_power_budget_w == doctest::Approx(1.0));
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("tiny preset loads and validates") {
  const Scenario s = Scenario::preset("tiny");
  CHECK(s.num_irs == 2);
  CHECK(s.irs_elements == 4);
  CHECK(s.num_su == 2);
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("json round trip preserves the fingerprint") {
  const Scenario s = Scenario::preset("default");
  const Scenario back = Scenario::from_json(s.to_json());
  CHECK(back.fingerprint() == s.fingerprint());

  Scenario other = s;
  other.noise_su *= 2.0;
  CHECK(other.fingerprint() != s.fingerprint());
}

TEST_CASE("unknown keys are rejected by name") {
  json j = Scenario::preset("tiny").to_json();
  j["surprise"] = 1;
  try {
    Scenario::from_json(j);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("surprise") != std::string::npos);
  }
}

TEST_CASE("invalid field combinations are rejected") {
  Scenario s = Scenario::preset("tiny");
  s.num_su = 3;  // more users than subchannels
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  Scenario bad = Scenario::preset("tiny");
  bad.detection_target = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  Scenario neg = Scenario::preset("tiny");
  neg.noise_su = 0.0;
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}

TEST_CASE("missing schema tag is rejected") {
  json j = Scenario::preset("tiny").to_json();
  j.erase("schema");
  CHECK_THROWS_AS(Scenario::from_json(j), std::invalid_argument);
}
