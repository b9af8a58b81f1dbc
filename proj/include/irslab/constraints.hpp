#pragma once

#include <vector>

#include "irslab/rates.hpp"

namespace irslab {

// Signed slacks (>= 0 means satisfied) for the problem constraints, plus
// boolean validity of the combinatorial ones.
struct ConstraintReport {
  std::vector<double> c1;   // per PU: rate minus its floor
  double c2 = 0.0;          // false-alarm headroom on the worst sensed channel
  double c3 = 0.0;          // beam energy budget headroom
  double c4 = 0.0;          // 1 - max |b * exp(j*phi)|
  double c5 = 0.0;          // amplitude box headroom; negative if a phase
                            // leaves [0, 2*pi)
  bool c6 = false;          // one-to-one subchannel assignment
  bool c7 = false;          // exactly one surface per user

  // C2..C7 within tolerance (C1 is reported but not gated here; the primary
  // rate floor is enforced through the reward penalty).
  bool feasible(double tol = 0.0) const;
};

ConstraintReport check_constraints(const ChannelSet& ch, const Action& a,
                                   const SensingReport& sensing,
                                   const Scenario& s,
                                   RateMode mode = RateMode::kSharing);

}  // namespace irslab
