#include "irslab/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace irslab {

// Multi-element nodes are modeled as half-wavelength ULAs along the x axis;
// line-of-sight phases follow the directional cosine of the link.
namespace {

CVec ula_steer(int n, double cosine) {
  CVec a(n);
  for (int i = 0; i < n; ++i) {
    const double ph = M_PI * i * cosine;
    a(i) = Cplx(std::cos(ph), std::sin(ph));
  }
  return a;
}

double dir_cosine(const Vec3& from, const Vec3& to) {
  const double d = distance(from, to);
  if (d <= 0.0) throw std::invalid_argument("draw_channels: coincident nodes");
  return (to.x - from.x) / d;
}

CMat los_matrix(const Vec3& tx_pos, int tx_n, const Vec3& rx_pos, int rx_n) {
  const CVec rx = ula_steer(rx_n, dir_cosine(rx_pos, tx_pos));
  const CVec tx = ula_steer(tx_n, dir_cosine(tx_pos, rx_pos));
  return rx * tx.transpose();
}

CVec los_vector(const Vec3& elem_pos, int n, const Vec3& other) {
  return ula_steer(n, dir_cosine(elem_pos, other));
}

CMat apply_phase(const Reflection& theta, int z) {
  return theta.coefficients(z).asDiagonal();
}

}  // namespace

bool ChannelSet::occupied(int c) const {
  for (std::size_t d = 0; d < pu_channel.size(); ++d) {
    if (pu_channel[d] == c && pu_active[d]) return true;
  }
  return false;
}

int ChannelSet::designated_pu(int c) const {
  for (std::size_t d = 0; d < pu_channel.size(); ++d) {
    if (pu_channel[d] == c) return static_cast<int>(d);
  }
  return -1;
}

double ChannelSet::idle_prior(const Scenario& s, int c) const {
  return designated_pu(c) >= 0 ? s.idle_prior : 1.0;
}

ChannelSet draw_channels(const Scenario& s, SeededRng& rng) {
  ChannelSet ch;
  const int np = s.pbs_antennas, ns = s.sbs_antennas, nn = s.irs_elements;
  const double d0 = s.ref_distance_m;
  auto gain_bu = [&](const Vec3& a, const Vec3& b) {
    return path_gain(std::max(distance(a, b), d0), s.exp_bs_user, s.ref_loss_db, d0);
  };
  auto gain_br = [&](const Vec3& a, const Vec3& b) {
    return path_gain(std::max(distance(a, b), d0), s.exp_bs_irs, s.ref_loss_db, d0);
  };
  auto gain_ru = [&](const Vec3& a, const Vec3& b) {
    return path_gain(std::max(distance(a, b), d0), s.exp_irs_user, s.ref_loss_db, d0);
  };

  // Surface-side links (Rician). Draw order is fixed: per surface, then the
  // user blocks, then primary-side links, then beams and occupancy.
  for (int z = 0; z < s.num_irs; ++z) {
    const Vec3& rp = s.irs_pos[z];
    ch.pbs_to_irs.push_back(rician_channel(
        rng, nn, np, gain_br(s.pbs_pos, rp), s.rician_k,
        los_matrix(s.pbs_pos, np, rp, nn)));
    ch.sbs_to_irs.push_back(rician_channel(
        rng, nn, ns, gain_br(s.sbs_pos, rp), s.rician_k,
        los_matrix(s.sbs_pos, ns, rp, nn)));
    ch.irs_to_sbs.push_back(rician_channel(
        rng, nn, ns, gain_br(rp, s.sbs_pos), s.rician_k,
        los_matrix(s.sbs_pos, ns, rp, nn)));
  }
  ch.pbs_to_sbs = rayleigh_channel(rng, np, ns, gain_bu(s.pbs_pos, s.sbs_pos));

  for (int k = 0; k < s.num_su; ++k) {
    ch.sbs_to_su.push_back(
        rayleigh_channel(rng, ns, 1, gain_bu(s.sbs_pos, s.su_pos[k])).col(0));
    ch.pbs_to_su.push_back(
        rayleigh_channel(rng, np, 1, gain_bu(s.pbs_pos, s.su_pos[k])).col(0));
  }
  ch.irs_to_su.resize(s.num_irs);
  for (int z = 0; z < s.num_irs; ++z) {
    for (int k = 0; k < s.num_su; ++k) {
      ch.irs_to_su[z].push_back(
          rician_channel(rng, nn, 1, gain_ru(s.irs_pos[z], s.su_pos[k]),
                         s.rician_k,
                         los_vector(s.irs_pos[z], nn, s.su_pos[k]))
              .col(0));
    }
  }

  for (int m = 0; m < s.num_eve; ++m) {
    ch.sbs_to_eve.push_back(
        rayleigh_channel(rng, ns, 1, gain_bu(s.sbs_pos, s.eve_pos[m])).col(0));
    ch.pbs_to_eve.push_back(
        rayleigh_channel(rng, np, 1, gain_bu(s.pbs_pos, s.eve_pos[m])).col(0));
  }
  ch.irs_to_eve.resize(s.num_irs);
  for (int z = 0; z < s.num_irs; ++z) {
    for (int m = 0; m < s.num_eve; ++m) {
      ch.irs_to_eve[z].push_back(
          rician_channel(rng, nn, 1, gain_ru(s.irs_pos[z], s.eve_pos[m]),
                         s.rician_k,
                         los_vector(s.irs_pos[z], nn, s.eve_pos[m]))
              .col(0));
    }
  }

  for (int d = 0; d < s.num_pu; ++d) {
    ch.pbs_to_pu.push_back(
        rayleigh_channel(rng, np, 1, gain_bu(s.pbs_pos, s.pu_pos[d])).col(0));
    ch.sbs_to_pu.push_back(
        rayleigh_channel(rng, ns, 1, gain_bu(s.sbs_pos, s.pu_pos[d])).col(0));
  }
  ch.irs_to_pu.resize(s.num_irs);
  for (int z = 0; z < s.num_irs; ++z) {
    for (int d = 0; d < s.num_pu; ++d) {
      ch.irs_to_pu[z].push_back(
          rician_channel(rng, nn, 1, gain_ru(s.irs_pos[z], s.pu_pos[d]),
                         s.rician_k,
                         los_vector(s.irs_pos[z], nn, s.pu_pos[d]))
              .col(0));
    }
  }

  // Primary beams: maximum-ratio transmission toward each PU's direct
  // channel at fixed per-subchannel power.
  const double amp = std::sqrt(s.pbs_subchannel_power_w);
  for (int d = 0; d < s.num_pu; ++d) {
    const CVec& h = ch.pbs_to_pu[d];
    const double nrm = h.norm();
    CVec f = nrm > 0.0 ? CVec(amp * h.conjugate() / nrm)
                       : CVec(CVec::Zero(np));
    ch.pbs_beam.push_back(f);
  }

  // Each PU owns the subchannel d mod C; a channel is busy this frame with
  // probability 1 - idle_prior, and at most one of its PUs transmits.
  ch.pu_channel.resize(s.num_pu);
  for (int d = 0; d < s.num_pu; ++d) ch.pu_channel[d] = d % s.num_subchannels;
  ch.pu_active.assign(s.num_pu, 0);
  for (int c = 0; c < s.num_subchannels; ++c) {
    std::vector<int> here;
    for (int d = 0; d < s.num_pu; ++d) {
      if (ch.pu_channel[d] == c) here.push_back(d);
    }
    if (here.empty()) continue;
    const bool busy = rng.uniform() < (1.0 - s.idle_prior);
    if (busy) {
      const int pick = here[rng.uniform_int(here.size())];
      ch.pu_active[pick] = 1;
    }
  }
  return ch;
}

// The effective channels below are stored as columns e with the contract
// received = e.transpose() * beam (no conjugation), matching the row form
// h^T + g^T * Phi * M used throughout the rate expressions.
namespace {

CVec effective(const CVec& direct, const CVec& via_irs, const CMat& bs_to_irs,
               const Reflection& theta, int z) {
  return direct + bs_to_irs.transpose() * apply_phase(theta, z) * via_irs;
}

}  // namespace

CVec su_row_from_sbs(const ChannelSet& ch, const Reflection& theta, int k, int z) {
  return effective(ch.sbs_to_su[k], ch.irs_to_su[z][k], ch.sbs_to_irs[z], theta, z);
}

CVec eve_row_from_sbs(const ChannelSet& ch, const Reflection& theta, int m, int z) {
  return effective(ch.sbs_to_eve[m], ch.irs_to_eve[z][m], ch.sbs_to_irs[z], theta, z);
}

CVec pu_row_from_sbs(const ChannelSet& ch, const Reflection& theta, int d, int z) {
  return effective(ch.sbs_to_pu[d], ch.irs_to_pu[z][d], ch.sbs_to_irs[z], theta, z);
}

CVec su_row_from_pbs(const ChannelSet& ch, const Reflection& theta, int k, int z) {
  return effective(ch.pbs_to_su[k], ch.irs_to_su[z][k], ch.pbs_to_irs[z], theta, z);
}

CVec eve_row_from_pbs(const ChannelSet& ch, const Reflection& theta, int m, int z) {
  return effective(ch.pbs_to_eve[m], ch.irs_to_eve[z][m], ch.pbs_to_irs[z], theta, z);
}

CVec pu_row_from_pbs(const ChannelSet& ch, const Reflection& theta, int d, int z) {
  return effective(ch.pbs_to_pu[d], ch.irs_to_pu[z][d], ch.pbs_to_irs[z], theta, z);
}

double received_power(const CVec& row, const CVec& beam) {
  return std::norm((row.transpose() * beam).value());
}

int pu_assist_irs(const ChannelSet& ch, const Reflection& theta, int d) {
  int best = 0;
  double best_power = -1.0;
  for (int z = 0; z < static_cast<int>(ch.pbs_to_irs.size()); ++z) {
    const double p =
        received_power(pu_row_from_pbs(ch, theta, d, z), ch.pbs_beam[d]);
    if (p > best_power + 1e-18) {
      best_power = p;
      best = z;
    }
  }
  return best;
}

}  // namespace irslab
