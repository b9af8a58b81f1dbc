#include "irslab/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace irslab {

namespace {

double log2p1(double snr) { return std::log2(1.0 + snr); }

// Interference received from the primary network on subchannel c, at a node
// whose PBS-side effective rows are produced by `row_of`. Each active PU
// arrives through the surface currently assisting it.
template <typename RowFn>
double primary_interference(const ChannelSet& ch, const Reflection& theta,
                            int c, RowFn row_of) {
  double acc = 0.0;
  for (int d = 0; d < static_cast<int>(ch.pu_channel.size()); ++d) {
    if (ch.pu_channel[d] != c || !ch.pu_active[d]) continue;
    const int zd = pu_assist_irs(ch, theta, d);
    acc += received_power(row_of(d, zd), ch.pbs_beam[d]);
  }
  return acc;
}

void check_assigned(const Action& a, int k, const Scenario& s) {
  if (k < 0 || k >= s.num_su || !a.assign.valid(s)) {
    throw std::invalid_argument("rates: SU lacks a valid channel/IRS assignment");
  }
}

}  // namespace

CaseRates su_rate_cases(const ChannelSet& ch, const Action& a, int k,
                        const Scenario& s) {
  check_assigned(a, k, s);
  const int c = a.assign.su_channel[k];
  const int z = a.assign.su_irs[k];
  const double pre = 1.0 - a.tau / s.frame_seconds;
  const double sig = received_power(su_row_from_sbs(ch, a.theta, k, z), a.beams[k]);
  const double interf = primary_interference(
      ch, a.theta, c,
      [&](int, int zd) { return su_row_from_pbs(ch, a.theta, k, zd); });
  CaseRates r;
  r.r00 = r.r10 = pre * log2p1(sig / s.noise_su);
  r.r01 = r.r11 = pre * log2p1(sig / (interf + s.noise_su));
  return r;
}

CaseRates eve_rate_cases(const ChannelSet& ch, const Action& a, int m, int k,
                         const Scenario& s) {
  check_assigned(a, k, s);
  if (m < 0 || m >= s.num_eve) throw std::invalid_argument("rates: bad eavesdropper index");
  const int c = a.assign.su_channel[k];
  const int zk = a.assign.su_irs[k];
  const double pre = 1.0 - a.tau / s.frame_seconds;
  const double sig =
      received_power(eve_row_from_sbs(ch, a.theta, m, zk), a.beams[k]);
  const double interf = primary_interference(
      ch, a.theta, c,
      [&](int, int zd) { return eve_row_from_pbs(ch, a.theta, m, zd); });
  CaseRates r;
  r.r00 = r.r10 = pre * log2p1(sig / s.noise_eve);
  r.r01 = r.r11 = pre * log2p1(sig / (interf + s.noise_eve));
  return r;
}

namespace {

// Scales a copy of the action's beams for the opportunistic mode: power not
// spent on sensed-busy verdicts is re-spread over the sensed-idle ones.
Action opportunistic_view(const Action& a, const SensingReport& sensing,
                          const Scenario& s) {
  Action v = a;
  for (int k = 0; k < s.num_su; ++k) {
    const int c = v.assign.su_channel[k];
    const ChannelProbs& p = sensing.channel[c].probs;
    const double idle_verdict = p.p00 + p.p01;
    if (idle_verdict < 1e-12) {
      v.beams[k].setZero();
    } else {
      v.beams[k] /= std::sqrt(idle_verdict);
    }
  }
  return v;
}

}  // namespace

AverageRates average_rates(const ChannelSet& ch, const Action& a,
                           const SensingReport& sensing, const Scenario& s,
                           RateMode mode) {
  const Action& eff =
      mode == RateMode::kOpportunistic ? opportunistic_view(a, sensing, s) : a;
  const Action eff_copy = eff;  // keep the view alive when opportunistic

  AverageRates out;
  out.su.resize(s.num_su, 0.0);
  out.eve = Mat::Zero(s.num_eve, s.num_su);
  out.eve_max.resize(s.num_su, 0.0);
  out.su_secrecy.resize(s.num_su, 0.0);

  for (int k = 0; k < s.num_su; ++k) {
    const int c = a.assign.su_channel[k];
    const ChannelProbs& p = sensing.channel[c].probs;
    const CaseRates rk = su_rate_cases(ch, eff_copy, k, s);
    double rbar;
    if (mode == RateMode::kOpportunistic) {
      rbar = p.p00 * rk.r00 + p.p01 * rk.r01;
    } else {
      rbar = p.p00 * rk.r00 + p.p10 * rk.r10 + p.p01 * rk.r01 + p.p11 * rk.r11;
    }
    out.su[k] = rbar;

    double emax = 0.0;
    for (int m = 0; m < s.num_eve; ++m) {
      const CaseRates rm = eve_rate_cases(ch, eff_copy, m, k, s);
      double ebar;
      if (mode == RateMode::kOpportunistic) {
        ebar = p.p00 * rm.r00 + p.p01 * rm.r01;
      } else {
        ebar = p.p00 * rm.r00 + p.p10 * rm.r10 + p.p01 * rm.r01 + p.p11 * rm.r11;
      }
      out.eve(m, k) = ebar;
      emax = std::max(emax, ebar);
    }
    out.eve_max[k] = emax;
    out.su_secrecy[k] = std::max(rbar - emax, 0.0);
    out.secrecy += out.su_secrecy[k];
    out.secrecy_unclamped += rbar - emax;
  }
  return out;
}

double secrecy_rate(const ChannelSet& ch, const Action& a,
                    const SensingReport& sensing, const Scenario& s,
                    RateMode mode) {
  return average_rates(ch, a, sensing, s, mode).secrecy;
}

double pu_rate(const ChannelSet& ch, const Action& a,
               const SensingReport& sensing, int d, const Scenario& s,
               RateMode mode) {
  if (d < 0 || d >= s.num_pu) throw std::invalid_argument("pu_rate: bad PU index");
  if (!a.assign.valid(s)) throw std::invalid_argument("pu_rate: invalid assignment");
  const Action& eff =
      mode == RateMode::kOpportunistic ? opportunistic_view(a, sensing, s) : a;
  const Action eff_copy = eff;

  const int c = ch.pu_channel[d];
  const ChannelProbs& p = sensing.channel[c].probs;
  const int zstar = pu_assist_irs(ch, a.theta, d);
  const double sig =
      received_power(pu_row_from_pbs(ch, a.theta, d, zstar), ch.pbs_beam[d]);

  double interf = 0.0;
  for (int k = 0; k < s.num_su; ++k) {
    if (a.assign.su_channel[k] != c) continue;
    const int zk = a.assign.su_irs[k];
    interf +=
        received_power(pu_row_from_sbs(ch, a.theta, d, zk), eff_copy.beams[k]);
  }

  if (mode == RateMode::kOpportunistic) {
    // Secondary interference only hits the missed-detection branch; on the
    // detected branch the SBS is silent.
    return p.p01 * std::log2(1.0 + sig / (interf + s.noise_pu)) +
           p.p11 * std::log2(1.0 + sig / s.noise_pu);
  }
  return (p.p01 + p.p11) * std::log2(1.0 + sig / (interf + s.noise_pu));
}

}  // namespace irslab
