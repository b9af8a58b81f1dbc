#pragma once

#include "irslab/constraints.hpp"

namespace irslab {

struct RewardConfig {
  double nu_s = 1.0;      // weight of the per-user secrecy shortfall
  double nu_d = 1.0;      // weight of the primary rate shortfall
  double discount = 0.95;
};

struct StepInfo {
  SensingReport sensing;
  ConstraintReport constraints;
  AverageRates rates;
  std::vector<double> pu;  // average rate per PU
  double reward = 0.0;
};

// Block-fading decision process around the physical model. Channels are
// redrawn after every step; the state exposes the fresh channel features
// under the previously applied coefficients, the previous action, and the
// rates it achieved.
//
// State layout (sizes in parentheses):
//   per SU k, per IRS z: effective secondary row, Re then Im (2*N_s each)
//   per Eve m, per IRS z: same (2*N_s each)
//   previous action: channel one-hot (K*C), pairing one-hot (K*Z),
//     coefficients as b*cos(phi), b*sin(phi) (2*Z*N_n),
//     beams Re/Im (2*K*N_s), tau/T (1)
//   rates: per SU (K), per PU (D), best per Eve (M), secrecy sum (1)
class Environment {
 public:
  Environment(const Scenario& s, const RewardConfig& rc, std::uint64_t seed,
              RateMode mode = RateMode::kSharing);

  int state_dim() const;

  Vec reset();

  struct Step {
    Vec state;
    double reward = 0.0;
    StepInfo info;
  };
  Step step(const Action& a);

  // Scores an action against the current channels without advancing the
  // process; step() is evaluate + redraw.
  StepInfo evaluate(const Action& a) const;

  const Scenario& scenario() const { return scen_; }
  const RewardConfig& reward_config() const { return rcfg_; }
  const ChannelSet& channels() const { return chan_; }
  RateMode mode() const { return mode_; }

  // Neutral action used by reset: random feasible assignment and pairing,
  // identity coefficients, equal-power beams along each user's direct
  // channel, tau = T/10.
  Action neutral_action();

 private:
  Vec build_state(const Action& a, const StepInfo& info) const;

  Scenario scen_;
  RewardConfig rcfg_;
  RateMode mode_;
  SeededRng rng_;
  ChannelSet chan_;
  Mat su_scale_;   // (K, Z) feature normalizers
  Mat eve_scale_;  // (M, Z)
  double beam_scale_ = 1.0;
};

}  // namespace irslab
