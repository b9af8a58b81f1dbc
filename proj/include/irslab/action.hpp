#pragma once

#include <vector>

#include "irslab/numerics.hpp"
#include "irslab/scenario.hpp"

namespace irslab {

// Per-surface reflection coefficients: amplitude in [0, 1] and phase in
// [0, 2*pi) for each element.
struct Reflection {
  std::vector<Vec> amplitude;  // one vector of length irs_elements per IRS
  std::vector<Vec> phase;

  static Reflection identity(int num_irs, int elements);  // b = 1, phi = 0
  static Reflection zero(int num_irs, int elements);      // b = 0 (surface off)

  // Complex coefficients b * exp(j*phi) of surface z.
  CVec coefficients(int z) const;

  int num_irs() const { return static_cast<int>(amplitude.size()); }
  int elements() const {
    return amplitude.empty() ? 0 : static_cast<int>(amplitude[0].size());
  }
};

// Joint subchannel assignment (one channel per user, injective) and IRS
// pairing (exactly one surface per user; surfaces may be shared).
struct Assignment {
  std::vector<int> su_channel;  // channel index per SU
  std::vector<int> su_irs;      // IRS index per SU

  bool valid(const Scenario& s) const;

  // Dense indicator views of the two constraints for callers that want the
  // matrix form.
  Mat channel_matrix(const Scenario& s) const;  // K x C
  Mat pairing_matrix(const Scenario& s) const;  // K x Z
};

// The full decision evaluated by the environment each frame.
struct Action {
  Assignment assign;
  Reflection theta;
  std::vector<CVec> beams;  // transmit beam per SU, length sbs_antennas
  double tau = 0.0;         // sensing time, in (0, frame_seconds)

  double beam_energy() const;  // sum of squared beam norms (C3 left side)
};

}  // namespace irslab
