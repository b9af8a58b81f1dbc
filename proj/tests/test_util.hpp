#pragma once

// Shared helpers for the unit and acceptance suites.

#include <vector>

#include "irslab/channels.hpp"
#include "irslab/mlp.hpp"

namespace irslab::testutil {

// Feasible reference action: users on their own subchannel, round-robin
// pairing, identity coefficients, equal-power MRT beams, tau = T/10.
inline Action make_action(const Scenario& s, const ChannelSet& ch,
                          double tau_frac = 0.1) {
  Action a;
  a.theta = Reflection::identity(s.num_irs, s.irs_elements);
  a.assign.su_channel.resize(s.num_su);
  a.assign.su_irs.resize(s.num_su);
  for (int k = 0; k < s.num_su; ++k) {
    a.assign.su_channel[k] = k;
    a.assign.su_irs[k] = k % s.num_irs;
  }
  const double per_beam = s.beam_budget() / s.num_su;
  for (int k = 0; k < s.num_su; ++k) {
    const CVec e = su_row_from_sbs(ch, a.theta, k, a.assign.su_irs[k]);
    const double nrm = e.norm();
    if (nrm > 0.0) {
      a.beams.push_back(std::sqrt(per_beam) * e.conjugate() / nrm);
    } else {
      a.beams.push_back(CVec::Zero(s.sbs_antennas));
    }
  }
  a.tau = tau_frac * s.frame_seconds;
  return a;
}

// Small randomized deployment for solver tests: nodes scattered near the
// secondary station, thermal-level noise, one primary transmitter per
// subchannel slot.
inline Scenario solver_instance(std::uint64_t seed, int Z, int Nn, int K,
                                int C, int M, int D) {
  SeededRng rng(seed);
  auto jitter = [&](double spread) { return spread * (2.0 * rng.uniform() - 1.0); };
  Scenario s = Scenario::preset("tiny");
  s.name = "solver-instance";
  s.num_irs = Z;
  s.irs_elements = Nn;
  s.num_su = K;
  s.num_subchannels = C;
  s.num_eve = M;
  s.num_pu = D;
  s.pbs_antennas = 2;
  s.sbs_antennas = 2;
  s.sbs_pos = {0.0, 0.0, 10.0};
  s.pbs_pos = {55.0 + jitter(10.0), jitter(10.0), 10.0};
  s.irs_pos.clear();
  for (int z = 0; z < Z; ++z) {
    s.irs_pos.push_back({6.0 + jitter(3.0), (z % 2 ? -8.0 : 8.0) + jitter(3.0),
                         5.0});
  }
  s.su_pos.clear();
  for (int k = 0; k < K; ++k) {
    s.su_pos.push_back({13.0 + jitter(4.0), (k % 2 ? -12.0 : 12.0) + jitter(4.0),
                        0.0});
  }
  s.eve_pos.clear();
  for (int m = 0; m < M; ++m) {
    s.eve_pos.push_back({16.0 + jitter(5.0), (m % 2 ? 10.0 : -10.0) + jitter(5.0),
                         0.0});
  }
  s.pu_pos.clear();
  for (int d = 0; d < D; ++d) {
    s.pu_pos.push_back({50.0 + jitter(6.0), (d % 2 ? -10.0 : 10.0) + jitter(6.0),
                        0.0});
  }
  s.validate();
  return s;
}

// Flattened parameter access for finite-difference gradient checks. The
// pointer order matches flatten_grads below.
inline std::vector<double*> param_ptrs(Mlp& net) {
  std::vector<double*> out;
  for (int l = 0; l < net.layers(); ++l) {
    for (int i = 0; i < net.w[l].rows(); ++i) {
      for (int j = 0; j < net.w[l].cols(); ++j) out.push_back(&net.w[l](i, j));
    }
    for (int i = 0; i < net.b[l].size(); ++i) out.push_back(&net.b[l](i));
  }
  return out;
}

inline std::vector<double> flatten_grads(const MlpGrads& g) {
  std::vector<double> out;
  for (std::size_t l = 0; l < g.w.size(); ++l) {
    for (int i = 0; i < g.w[l].rows(); ++i) {
      for (int j = 0; j < g.w[l].cols(); ++j) out.push_back(g.w[l](i, j));
    }
    for (int i = 0; i < g.b[l].size(); ++i) out.push_back(g.b[l](i));
  }
  return out;
}

// Central-difference check of `analytic` against `loss_fn` evaluated after
// perturbing each parameter; returns the worst relative error. Parameters
// whose two-step estimates disagree are skipped: there the perturbation
// straddles a ReLU/clamp/min kink and no two-sided derivative exists.
template <typename LossFn>
double max_grad_error(Mlp& net, const std::vector<double>& analytic,
                      LossFn loss_fn, double step = 1e-5) {
  const std::vector<double*> params = param_ptrs(net);
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = *params[i];
    auto fd_at = [&](double h) {
      *params[i] = saved + h;
      const double up = loss_fn();
      *params[i] = saved - h;
      const double down = loss_fn();
      *params[i] = saved;
      return (up - down) / (2.0 * h);
    };
    const double fd_full = fd_at(step);
    const double fd_half = fd_at(step / 2.0);
    if (std::abs(fd_full - fd_half) >
        1e-3 * std::max({1.0, std::abs(fd_full), std::abs(fd_half)})) {
      continue;
    }
    const double denom =
        std::max({std::abs(fd_half), std::abs(analytic[i]), 1e-4});
    worst = std::max(worst, std::abs(fd_half - analytic[i]) / denom);
  }
  return worst;
}

}  // namespace irslab::testutil
