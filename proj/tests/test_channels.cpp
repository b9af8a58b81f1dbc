#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "irslab/channels.hpp"

using namespace irslab;

TEST_CASE("channel dimensions follow the scenario") {
  const Scenario s = Scenario::preset("default");
  SeededRng rng(3);
  const ChannelSet ch = draw_channels(s, rng);
  REQUIRE(ch.pbs_to_irs.size() == 3);
  CHECK(ch.pbs_to_irs[0].rows() == 36);
  CHECK(ch.pbs_to_irs[0].cols() == s.pbs_antennas);
  CHECK(ch.irs_to_su[0][0].size() == 36);
  CHECK(ch.pbs_to_sbs.rows() == s.pbs_antennas);
  CHECK(ch.pbs_to_sbs.cols() == s.sbs_antennas);
  CHECK(ch.sbs_to_su.size() == 2);
  CHECK(ch.pbs_beam.size() == 2);
  for (const auto& f : ch.pbs_beam) {
    CHECK(f.squaredNorm() == doctest::Approx(s.pbs_subchannel_power_w));
  }
  for (const auto& m : ch.pbs_to_irs) CHECK(m.allFinite());
}

TEST_CASE("always-idle prior never activates a primary user") {
  Scenario s = Scenario::preset("tiny");
  s.idle_prior = 1.0 - 1e-15;
  SeededRng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const ChannelSet ch = draw_channels(s, rng);
    for (auto flag : ch.pu_active) CHECK(flag == 0);
  }
}

TEST_CASE("fixed seed reproduces the channel set") {
  const Scenario s = Scenario::preset("tiny");
  SeededRng a(99), b(99);
  const ChannelSet ca = draw_channels(s, a);
  const ChannelSet cb = draw_channels(s, b);
  CHECK((ca.pbs_to_irs[0] - cb.pbs_to_irs[0]).norm() == 0.0);
  CHECK((ca.sbs_to_su[1] - cb.sbs_to_su[1]).norm() == 0.0);
  CHECK(ca.pu_active == cb.pu_active);
  CHECK(ca.pu_channel == cb.pu_channel);
}

TEST_CASE("zero-amplitude coefficients leave only the direct path") {
  const Scenario s = Scenario::preset("tiny");
  SeededRng rng(5);
  const ChannelSet ch = draw_channels(s, rng);
  const Reflection off = Reflection::zero(s.num_irs, s.irs_elements);
  const CVec row = su_row_from_sbs(ch, off, 0, 1);
  CHECK((row - ch.sbs_to_su[0]).norm() == 0.0);
}

TEST_CASE("pu assist surface maximizes received power") {
  const Scenario s = Scenario::preset("tiny");
  SeededRng rng(6);
  const ChannelSet ch = draw_channels(s, rng);
  const Reflection theta = Reflection::identity(s.num_irs, s.irs_elements);
  const int z = pu_assist_irs(ch, theta, 0);
  const double p_star =
      received_power(pu_row_from_pbs(ch, theta, 0, z), ch.pbs_beam[0]);
  for (int other = 0; other < s.num_irs; ++other) {
    const double p =
        received_power(pu_row_from_pbs(ch, theta, 0, other), ch.pbs_beam[0]);
    CHECK(p <= p_star + 1e-15);
  }
}

TEST_CASE("designated channels partition the primary users") {
  const Scenario s = Scenario::preset("default");
  SeededRng rng(8);
  const ChannelSet ch = draw_channels(s, rng);
  CHECK(ch.pu_channel[0] == 0);
  CHECK(ch.pu_channel[1] == 1);
  // At most one active PU per subchannel.
  for (int c = 0; c < s.num_subchannels; ++c) {
    int active = 0;
    for (int d = 0; d < s.num_pu; ++d) {
      if (ch.pu_channel[d] == c && ch.pu_active[d]) ++active;
    }
    CHECK(active <= 1);
  }
}
