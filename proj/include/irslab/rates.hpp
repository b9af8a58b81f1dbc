#pragma once

#include <vector>

#include "irslab/channels.hpp"
#include "irslab/sensing.hpp"

namespace irslab {

// Sharing: the secondary transmitter stays on regardless of the sensing
// verdict. Opportunistic: it transmits only on sensed-idle verdicts and
// re-spreads the saved power over those verdicts.
enum class RateMode { kSharing, kOpportunistic };

// Instantaneous rates for the four (sensing verdict, true state) cases.
struct CaseRates {
  double r00 = 0.0, r10 = 0.0, r01 = 0.0, r11 = 0.0;
};

CaseRates su_rate_cases(const ChannelSet& ch, const Action& a, int k,
                        const Scenario& s);

// Rate of eavesdropper m listening to SU k (through SU k's paired surface).
CaseRates eve_rate_cases(const ChannelSet& ch, const Action& a, int m, int k,
                         const Scenario& s);

struct AverageRates {
  std::vector<double> su;          // probability-weighted rate per SU
  Mat eve;                         // (m, k) average eavesdropping rate
  std::vector<double> eve_max;     // strongest eavesdropper per SU
  std::vector<double> su_secrecy;  // clamped per-SU secrecy
  double secrecy = 0.0;            // sum of clamped terms (the objective)
  double secrecy_unclamped = 0.0;  // sum without clamping (the reward core)
};

AverageRates average_rates(const ChannelSet& ch, const Action& a,
                           const SensingReport& sensing, const Scenario& s,
                           RateMode mode = RateMode::kSharing);

double secrecy_rate(const ChannelSet& ch, const Action& a,
                    const SensingReport& sensing, const Scenario& s,
                    RateMode mode = RateMode::kSharing);

// Average rate of PU d on its designated subchannel, assisted by whichever
// surface maximizes its received beam power under the current coefficients.
double pu_rate(const ChannelSet& ch, const Action& a,
               const SensingReport& sensing, int d, const Scenario& s,
               RateMode mode = RateMode::kSharing);

}  // namespace irslab
