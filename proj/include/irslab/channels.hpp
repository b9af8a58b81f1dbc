#pragma once

#include <vector>

#include "irslab/action.hpp"
#include "irslab/numerics.hpp"
#include "irslab/scenario.hpp"

namespace irslab {

// One block-fading realization of every link in the network plus the fixed
// primary-side beams and the occupancy draw for this frame.
//
// Matrix orientation: rows index the receive side elements of the stored
// link, columns the transmit side (e.g. pbs_to_irs[z] is N_n x N_p).
// Single-antenna endpoints are stored as column vectors over the
// multi-element side.
struct ChannelSet {
  std::vector<CMat> pbs_to_irs;   // H_z: N_n x N_p
  std::vector<CMat> sbs_to_irs;   // G_z: N_n x N_s
  std::vector<CMat> irs_to_sbs;   // N_n x N_s
  CMat pbs_to_sbs;                // N_p x N_s

  std::vector<CVec> sbs_to_su;                // length N_s
  std::vector<std::vector<CVec>> irs_to_su;   // [z][k], length N_n
  std::vector<CVec> pbs_to_su;                // length N_p

  std::vector<CVec> sbs_to_eve;
  std::vector<std::vector<CVec>> irs_to_eve;  // [z][m]
  std::vector<CVec> pbs_to_eve;

  std::vector<CVec> pbs_to_pu;                // length N_p
  std::vector<CVec> sbs_to_pu;                // length N_s
  std::vector<std::vector<CVec>> irs_to_pu;   // [z][d]

  std::vector<CVec> pbs_beam;     // per PU, length N_p, fixed MRT
  std::vector<int> pu_channel;    // designated subchannel per PU
  std::vector<uint8_t> pu_active; // occupancy draw for this frame

  bool occupied(int c) const;          // some PU transmits on c this frame
  int designated_pu(int c) const;      // PU whose subchannel is c, or -1
  double idle_prior(const Scenario& s, int c) const;  // 1.0 if no PU on c
};

// Draws a full realization. Base-station/user links fade Rayleigh; links
// touching a surface fade Rician around a ULA line-of-sight component.
ChannelSet draw_channels(const Scenario& s, SeededRng& rng);

// Effective channels (length = transmit antenna count) combining the direct
// path with the reflection through surface z under coefficients theta.
// Stored as columns e with received = e.transpose() * beam. "from_sbs" rows
// multiply secondary beams; "from_pbs" rows multiply primary beams.
CVec su_row_from_sbs(const ChannelSet& ch, const Reflection& theta, int k, int z);
CVec eve_row_from_sbs(const ChannelSet& ch, const Reflection& theta, int m, int z);
CVec pu_row_from_sbs(const ChannelSet& ch, const Reflection& theta, int d, int z);
CVec su_row_from_pbs(const ChannelSet& ch, const Reflection& theta, int k, int z);
CVec eve_row_from_pbs(const ChannelSet& ch, const Reflection& theta, int m, int z);
CVec pu_row_from_pbs(const ChannelSet& ch, const Reflection& theta, int d, int z);

// |row^T beam|^2.
double received_power(const CVec& row, const CVec& beam);

// Surface giving PU d the strongest received beam power under theta.
int pu_assist_irs(const ChannelSet& ch, const Reflection& theta, int d);

}  // namespace irslab
