#include "irslab/environment.hpp"

#include <cmath>

namespace irslab {

namespace {

double link_scale(const Scenario& s, const Vec3& user) {
  // Typical effective-channel magnitude: direct power plus the coherent
  // reflected power of the strongest surface.
  const double d0 = s.ref_distance_m;
  double direct = path_gain(std::max(distance(s.sbs_pos, user), d0),
                            s.exp_bs_user, s.ref_loss_db, d0);
  double best_cascade = 0.0;
  for (const auto& rp : s.irs_pos) {
    const double g1 = path_gain(std::max(distance(s.sbs_pos, rp), d0),
                                s.exp_bs_irs, s.ref_loss_db, d0);
    const double g2 = path_gain(std::max(distance(rp, user), d0),
                                s.exp_irs_user, s.ref_loss_db, d0);
    best_cascade = std::max(
        best_cascade, g1 * g2 * s.irs_elements * s.irs_elements);
  }
  return 1.0 / std::sqrt(direct + best_cascade);
}

}  // namespace

Environment::Environment(const Scenario& s, const RewardConfig& rc,
                         std::uint64_t seed, RateMode mode)
    : scen_(s), rcfg_(rc), mode_(mode), rng_(seed) {
  scen_.validate();
  su_scale_ = Mat::Zero(s.num_su, s.num_irs);
  for (int k = 0; k < s.num_su; ++k) {
    su_scale_.row(k).setConstant(link_scale(s, s.su_pos[k]));
  }
  eve_scale_ = Mat::Zero(s.num_eve, s.num_irs);
  for (int m = 0; m < s.num_eve; ++m) {
    eve_scale_.row(m).setConstant(link_scale(s, s.eve_pos[m]));
  }
  beam_scale_ = 1.0 / std::sqrt(s.beam_budget() / s.num_su);
  chan_ = draw_channels(scen_, rng_);
}

int Environment::state_dim() const {
  const Scenario& s = scen_;
  const int feats = 2 * s.sbs_antennas * s.num_irs * (s.num_su + s.num_eve);
  const int action = s.num_su * s.num_subchannels + s.num_su * s.num_irs +
                     2 * s.num_irs * s.irs_elements +
                     2 * s.num_su * s.sbs_antennas + 1;
  const int rates = s.num_su + s.num_pu + s.num_eve + 1;
  return feats + action + rates;
}

Action Environment::neutral_action() {
  const Scenario& s = scen_;
  Action a;
  std::vector<int> channels(s.num_subchannels);
  for (int c = 0; c < s.num_subchannels; ++c) channels[c] = c;
  a.assign.su_channel.resize(s.num_su);
  for (int k = 0; k < s.num_su; ++k) {
    const int pick = static_cast<int>(rng_.uniform_int(channels.size()));
    a.assign.su_channel[k] = channels[pick];
    channels.erase(channels.begin() + pick);
  }
  a.assign.su_irs.resize(s.num_su);
  for (int k = 0; k < s.num_su; ++k) {
    a.assign.su_irs[k] = static_cast<int>(rng_.uniform_int(s.num_irs));
  }
  a.theta = Reflection::identity(s.num_irs, s.irs_elements);
  const double per_beam = s.beam_budget() / s.num_su;
  for (int k = 0; k < s.num_su; ++k) {
    const CVec& h = chan_.sbs_to_su[k];
    const double nrm = h.norm();
    if (nrm > 0.0) {
      a.beams.push_back(std::sqrt(per_beam) * h.conjugate() / nrm);
    } else {
      a.beams.push_back(CVec::Zero(s.sbs_antennas));
    }
  }
  a.tau = s.frame_seconds / 10.0;
  return a;
}

Vec Environment::reset() {
  chan_ = draw_channels(scen_, rng_);
  const Action a0 = neutral_action();
  const StepInfo info = evaluate(a0);
  return build_state(a0, info);
}

StepInfo Environment::evaluate(const Action& a) const {
  const Scenario& s = scen_;
  if (!a.assign.valid(s)) {
    throw std::invalid_argument("environment: action assignment is invalid");
  }
  StepInfo info;
  info.sensing = make_sensing_report(chan_, a.theta, a.tau, s);
  info.rates = average_rates(chan_, a, info.sensing, s, mode_);
  info.pu.resize(s.num_pu);
  for (int d = 0; d < s.num_pu; ++d) {
    info.pu[d] = pu_rate(chan_, a, info.sensing, d, s, mode_);
  }
  info.constraints = check_constraints(chan_, a, info.sensing, s, mode_);

  double penalty = 0.0;
  for (int k = 0; k < s.num_su; ++k) {
    penalty += rcfg_.nu_s *
               std::min(info.rates.su_secrecy[k] - s.secrecy_min, 0.0);
  }
  for (int d = 0; d < s.num_pu; ++d) {
    penalty += rcfg_.nu_d * std::min(info.pu[d] - s.pu_rate_min, 0.0);
  }
  info.reward = info.rates.secrecy_unclamped + penalty;
  return info;
}

Environment::Step Environment::step(const Action& a) {
  Step out;
  out.info = evaluate(a);
  out.reward = out.info.reward;
  chan_ = draw_channels(scen_, rng_);
  out.state = build_state(a, out.info);
  return out;
}

Vec Environment::build_state(const Action& a, const StepInfo& info) const {
  const Scenario& s = scen_;
  Vec st(state_dim());
  int at = 0;
  auto put_row = [&](const CVec& row, double scale) {
    for (int i = 0; i < row.size(); ++i) st(at++) = scale * row(i).real();
    for (int i = 0; i < row.size(); ++i) st(at++) = scale * row(i).imag();
  };
  for (int k = 0; k < s.num_su; ++k) {
    for (int z = 0; z < s.num_irs; ++z) {
      put_row(su_row_from_sbs(chan_, a.theta, k, z), su_scale_(k, z));
    }
  }
  for (int m = 0; m < s.num_eve; ++m) {
    for (int z = 0; z < s.num_irs; ++z) {
      put_row(eve_row_from_sbs(chan_, a.theta, m, z), eve_scale_(m, z));
    }
  }
  for (int k = 0; k < s.num_su; ++k) {
    for (int c = 0; c < s.num_subchannels; ++c) {
      st(at++) = a.assign.su_channel[k] == c ? 1.0 : 0.0;
    }
  }
  for (int k = 0; k < s.num_su; ++k) {
    for (int z = 0; z < s.num_irs; ++z) {
      st(at++) = a.assign.su_irs[k] == z ? 1.0 : 0.0;
    }
  }
  for (int z = 0; z < s.num_irs; ++z) {
    const CVec coeff = a.theta.coefficients(z);
    for (int n = 0; n < coeff.size(); ++n) {
      st(at++) = coeff(n).real();
      st(at++) = coeff(n).imag();
    }
  }
  for (int k = 0; k < s.num_su; ++k) {
    for (int i = 0; i < s.sbs_antennas; ++i) {
      st(at++) = beam_scale_ * a.beams[k](i).real();
      st(at++) = beam_scale_ * a.beams[k](i).imag();
    }
  }
  st(at++) = a.tau / s.frame_seconds;
  for (int k = 0; k < s.num_su; ++k) st(at++) = info.rates.su[k];
  for (int d = 0; d < s.num_pu; ++d) st(at++) = info.pu[d];
  for (int m = 0; m < s.num_eve; ++m) {
    double best = 0.0;
    for (int k = 0; k < s.num_su; ++k) best = std::max(best, info.rates.eve(m, k));
    st(at++) = best;
  }
  st(at++) = info.rates.secrecy;
  return st;
}

}  // namespace irslab
