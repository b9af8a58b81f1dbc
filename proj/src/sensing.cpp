#include "irslab/sensing.hpp"

#include <cmath>
#include <stdexcept>

namespace irslab {

double sensing_snr(const ChannelSet& ch, const Reflection& theta, int z, int c,
                   const Scenario& s) {
  const int d = ch.designated_pu(c);
  if (d < 0 || !ch.pu_active[d]) return 0.0;
  const double alpha = ch.pbs_beam[d].squaredNorm() / s.noise_sensing;
  const CMat combined =
      ch.pbs_to_sbs.adjoint() +
      ch.irs_to_sbs[z].adjoint() *
          CMat(theta.coefficients(z).asDiagonal()) * ch.pbs_to_irs[z];
  return combined.squaredNorm() * alpha;
}

double detection_threshold(double gamma, double tau, const Scenario& s) {
  if (!(tau > 0.0 && tau < s.frame_seconds)) {
    throw std::invalid_argument("detection_threshold: tau outside (0, T)");
  }
  if (tau * s.sampling_hz < 1.0) {
    throw std::invalid_argument("detection_threshold: fewer than one sample");
  }
  const double ns = static_cast<double>(s.sbs_antennas);
  return (q_inverse(s.detection_target) *
              std::sqrt((2.0 * gamma + ns) / (tau * s.sampling_hz)) +
          gamma + ns) *
         s.noise_sensing;
}

double false_alarm_prob(double gamma, double tau, const Scenario& s) {
  if (!(tau > 0.0 && tau < s.frame_seconds)) {
    throw std::invalid_argument("false_alarm_prob: tau outside (0, T)");
  }
  const double ns = static_cast<double>(s.sbs_antennas);
  return q_function(std::sqrt((2.0 * gamma + 1.0) / ns) *
                        q_inverse(s.detection_target) +
                    std::sqrt(tau * s.sampling_hz / ns) * gamma);
}

ChannelProbs joint_state_probs(double false_alarm, const Scenario& s,
                               double idle_prior) {
  if (false_alarm < 0.0 || false_alarm > 1.0) {
    throw std::invalid_argument("joint_state_probs: false alarm outside [0, 1]");
  }
  const double busy_prior = 1.0 - idle_prior;
  ChannelProbs p;
  p.p00 = idle_prior * (1.0 - false_alarm);
  p.p10 = idle_prior * false_alarm;
  p.p01 = busy_prior * (1.0 - s.detection_target);
  p.p11 = busy_prior * s.detection_target;
  return p;
}

SensingReport make_sensing_report(const ChannelSet& ch, const Reflection& theta,
                                  double tau, const Scenario& s) {
  SensingReport rep;
  rep.tau = tau;
  rep.channel.resize(s.num_subchannels);
  for (int c = 0; c < s.num_subchannels; ++c) {
    SubchannelSensing& sc = rep.channel[c];
    sc.irs = 0;
    sc.snr = sensing_snr(ch, theta, 0, c, s);
    for (int z = 1; z < s.num_irs; ++z) {
      const double g = sensing_snr(ch, theta, z, c, s);
      if (g > sc.snr + 1e-18) {
        sc.snr = g;
        sc.irs = z;
      }
    }
    sc.threshold = detection_threshold(sc.snr, tau, s);
    sc.false_alarm = false_alarm_prob(sc.snr, tau, s);
    sc.probs = joint_state_probs(sc.false_alarm, s, ch.idle_prior(s, c));
  }
  return rep;
}

}  // namespace irslab
