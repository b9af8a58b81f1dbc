#pragma once

#include <vector>

#include "irslab/channels.hpp"

namespace irslab {

// Joint probabilities of (sensing outcome, true occupancy) for one
// subchannel; first index is the sensing verdict, second the real state.
struct ChannelProbs {
  double p00 = 0.0;  // sensed idle, actually idle
  double p10 = 0.0;  // sensed busy, actually idle (false alarm)
  double p01 = 0.0;  // sensed idle, actually busy (missed detection)
  double p11 = 0.0;  // sensed busy, actually busy
  double sum() const { return p00 + p10 + p01 + p11; }
};

struct SubchannelSensing {
  int irs = 0;              // surface assisting the detector on this channel
  double snr = 0.0;         // sensing SNR gamma
  double threshold = 0.0;   // energy threshold meeting the detection target
  double false_alarm = 0.0;
  ChannelProbs probs;
};

struct SensingReport {
  double tau = 0.0;
  std::vector<SubchannelSensing> channel;
};

// Sensing SNR of subchannel c through surface z: the squared norm of the
// combined detector channel scaled by the primary beam power over the
// sensing noise. Idle subchannels sense zero SNR.
double sensing_snr(const ChannelSet& ch, const Reflection& theta, int z, int c,
                   const Scenario& s);

// Energy threshold achieving the configured detection target.
double detection_threshold(double gamma, double tau, const Scenario& s);

// False alarm probability at that threshold.
double false_alarm_prob(double gamma, double tau, const Scenario& s);

// Eq-of-total-probability split of (sensing verdict, true state) given the
// false alarm level and the channel's idle prior.
ChannelProbs joint_state_probs(double false_alarm, const Scenario& s,
                               double idle_prior);

// Full per-subchannel report; the assisting surface is the one maximizing
// the sensing SNR under the current reflection coefficients.
SensingReport make_sensing_report(const ChannelSet& ch, const Reflection& theta,
                                  double tau, const Scenario& s);

}  // namespace irslab
