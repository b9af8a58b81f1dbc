#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "irslab/constraints.hpp"
#include "test_util.hpp"

using namespace irslab;
using testutil::make_action;

TEST_CASE("a constructed feasible action has non-negative slacks") {
  const Scenario s = Scenario::preset("tiny");
  SeededRng rng(100);
  const ChannelSet ch = draw_channels(s, rng);
  const Action a = make_action(s, ch);
  const SensingReport rep = make_sensing_report(ch, a.theta, a.tau, s);
  const ConstraintReport c = check_constraints(ch, a, rep, s);
  CHECK(c.c2 >= 0.0);
  CHECK(c.c3 >= 0.0);
  CHECK(c.c4 >= 0.0);
  CHECK(c.c5 >= 0.0);
  CHECK(c.c6);
  CHECK(c.c7);
  CHECK(c.feasible());
  REQUIRE(static_cast<int>(c.c1.size()) == s.num_pu);
}

TEST_CASE("weak sensing violates the false-alarm cap on busy channels") {
  // The wide deployment senses an essentially zero SNR, so the false alarm
  // probability stays near its gamma = 0 plateau and breaches the cap.
  const Scenario s = Scenario::preset("default");
  SeededRng rng(101);
  ChannelSet ch = draw_channels(s, rng);
  ch.pu_active.assign(s.num_pu, 1);
  Action a = make_action(s, ch, 0.02);
  const SensingReport rep = make_sensing_report(ch, a.theta, a.tau, s);
  const ConstraintReport c = check_constraints(ch, a, rep, s);
  CHECK(c.c2 < 0.0);
}

TEST_CASE("beam energy beyond the budget flips the c3 slack") {
  const Scenario s = Scenario::preset("tiny");
  SeededRng rng(102);
  const ChannelSet ch = draw_channels(s, rng);
  Action a = make_action(s, ch);
  for (auto& f : a.beams) f *= 2.0;  // quadruples the energy
  const SensingReport rep = make_sensing_report(ch, a.theta, a.tau, s);
  const ConstraintReport c = check_constraints(ch, a, rep, s);
  CHECK(c.c3 < 0.0);
}

TEST_CASE("coefficient bounds show up in c4 and c5") {
  const Scenario s = Scenario::preset("tiny");
  SeededRng rng(103);
  const ChannelSet ch = draw_channels(s, rng);
  Action a = make_action(s, ch);
  a.theta.amplitude[0](1) = 1.5;
  const SensingReport rep = make_sensing_report(ch, a.theta, a.tau, s);
  ConstraintReport c = check_constraints(ch, a, rep, s);
  CHECK(c.c4 < 0.0);
  CHECK(c.c5 < 0.0);

  a.theta.amplitude[0](1) = 0.5;
  a.theta.phase[0](2) = 7.0;  // beyond 2*pi
  c = check_constraints(ch, a, make_sensing_report(ch, a.theta, a.tau, s), s);
  CHECK(c.c5 < 0.0);
}

TEST_CASE("combinatorial constraints are boolean checks") {
  const Scenario s = Scenario::preset("tiny");
  SeededRng rng(104);
  const ChannelSet ch = draw_channels(s, rng);
  Action a = make_action(s, ch);
  a.assign.su_channel[1] = a.assign.su_channel[0];
  const SensingReport rep = make_sensing_report(ch, a.theta, a.tau, s);
  ConstraintReport c = check_constraints(ch, a, rep, s);
  CHECK_FALSE(c.c6);

  Action b = make_action(s, ch);
  b.assign.su_irs[0] = 99;
  c = check_constraints(ch, b, rep, s);
  CHECK_FALSE(c.c7);
}

TEST_CASE("idle channels do not bind the false-alarm cap") {
  const Scenario s = Scenario::preset("default");
  SeededRng rng(105);
  ChannelSet ch = draw_channels(s, rng);
  ch.pu_active.assign(s.num_pu, 0);
  const Action a = make_action(s, ch);
  const SensingReport rep = make_sensing_report(ch, a.theta, a.tau, s);
  const ConstraintReport c = check_constraints(ch, a, rep, s);
  CHECK(c.c2 == doctest::Approx(s.false_alarm_max));
}
