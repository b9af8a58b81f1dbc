#include "irslab/constraints.hpp"

#include <cmath>

namespace irslab {

bool ConstraintReport::feasible(double tol) const {
  return c2 >= -tol && c3 >= -tol && c4 >= -tol && c5 >= -tol && c6 && c7;
}

ConstraintReport check_constraints(const ChannelSet& ch, const Action& a,
                                   const SensingReport& sensing,
                                   const Scenario& s, RateMode mode) {
  ConstraintReport rep;

  // The rate slack is only defined for a usable assignment; combinatorial
  // violations are still reported through c6/c7 below.
  rep.c1.assign(s.num_pu, 0.0);
  if (a.assign.valid(s)) {
    for (int d = 0; d < s.num_pu; ++d) {
      rep.c1[d] = pu_rate(ch, a, sensing, d, s, mode) - s.pu_rate_min;
    }
  }

  // The false-alarm cap binds where a primary signal is present to sense;
  // idle subchannels carry zero sensing SNR by construction.
  rep.c2 = s.false_alarm_max;
  for (int c = 0; c < s.num_subchannels; ++c) {
    if (!ch.occupied(c)) continue;
    rep.c2 = std::min(rep.c2, s.false_alarm_max - sensing.channel[c].false_alarm);
  }

  rep.c3 = s.beam_budget() - a.beam_energy();

  double max_coeff = 0.0;
  double box = 1.0;
  bool phases_ok = true;
  for (int z = 0; z < a.theta.num_irs(); ++z) {
    const Vec& b = a.theta.amplitude[z];
    const Vec& p = a.theta.phase[z];
    for (int n = 0; n < b.size(); ++n) {
      max_coeff = std::max(max_coeff, std::abs(b(n)));
      box = std::min({box, b(n), 1.0 - b(n)});
      if (!(p(n) >= 0.0 && p(n) < 2.0 * M_PI)) phases_ok = false;
    }
  }
  rep.c4 = 1.0 - max_coeff;
  rep.c5 = phases_ok ? box : std::min(box, -1.0);

  rep.c6 = true;
  rep.c7 = true;
  if (static_cast<int>(a.assign.su_channel.size()) != s.num_su ||
      static_cast<int>(a.assign.su_irs.size()) != s.num_su) {
    rep.c6 = rep.c7 = false;
  } else {
    std::vector<int> ch_use(s.num_subchannels, 0);
    for (int k = 0; k < s.num_su; ++k) {
      const int c = a.assign.su_channel[k];
      if (c < 0 || c >= s.num_subchannels) {
        rep.c6 = false;
      } else if (++ch_use[c] > 1) {
        rep.c6 = false;
      }
      const int z = a.assign.su_irs[k];
      if (z < 0 || z >= s.num_irs) rep.c7 = false;
    }
  }
  return rep;
}

}  // namespace irslab
