#pragma once

#include <functional>

#include "irslab/constraints.hpp"

namespace irslab {

// Projected-subgradient multipliers for the beamforming subproblem.
struct DualVars {
  Vec omega;               // per subchannel, interference cap
  double varsigma = 0.0;   // energy budget
};

struct AoConfig {
  int outer_iters = 20;
  double outer_tol = 1e-4;
  int dual_iters = 40;
  double dual_step0 = 0.1;
  int sca_iters = 25;
  double sca_tol = 1e-6;
  int sca_inner_iters = 500;
  double sca_inner_tol = 1e-6;
  int tau_grid = 33;
  bool run_full_outer = false;  // ignore outer_tol (used for timing sweeps)
};

// Scalar data of one transmit-power optimality condition: user gain a and
// eavesdropper gain b along the beam direction, idle/busy denominators and
// branch weights, and the dual-driven linear price per unit power.
struct PowerTerm {
  double a = 0.0, b = 0.0;
  double u0 = 1.0, v0 = 1.0;  // idle-branch noise at user / eavesdropper
  double u1 = 1.0, v1 = 1.0;  // busy-branch denominators
  double w0 = 1.0, w1 = 0.0;  // branch weights
  double cost = 0.0;
};

// Unclamped per-term Lagrangian value at power x (rates in bits, price
// linear in x) and its derivative.
double power_objective(const PowerTerm& t, double x);
double power_objective_clamped(const PowerTerm& t, double x);
double power_derivative(const PowerTerm& t, double x);

// Non-negative stationary points of the per-term Lagrangian on [0, cap],
// found by sign-scanning the derivative (all poles are negative).
std::vector<double> stationary_powers(const PowerTerm& t, double cap);

// Best of {0, cap, stationary points} under the clamped value.
double best_power(const PowerTerm& t, double cap);

// Closed-form transmit solution for SU k on subchannel c: maximum-ratio
// direction along the user's effective channel plus the KKT-optimal power
// for each sensed state j in {0, 1}.
struct BeamSolution {
  CVec direction;        // unit norm
  double power[2] = {0.0, 0.0};
  PowerTerm term[2];
  int strongest_eve = -1;
};
BeamSolution beamforming_closed_form(const Scenario& s, const ChannelSet& ch,
                                     const Reflection& theta,
                                     const std::vector<int>& su_irs,
                                     const SensingReport& sensing,
                                     const DualVars& duals, int k, int c,
                                     double power_cap);

// Theorem-style assignment indicator: probability-weighted clamped secrecy
// minus the rate-derivative terms, per sensed state.
double subchannel_indicator(const Scenario& s, const SensingReport& sensing,
                            const BeamSolution& beam, int c, double tau);

// Maximizes sum indicator over one-to-one SU->channel maps. Uses the
// per-channel argmax when it is already injective, otherwise exhausts the
// (small) injective maps; ties resolve to the lexicographically first map.
std::vector<int> assign_subchannels(const Mat& indicators);

// omega_c <- max(0, omega_c + step * (interference_c - cap)), same for the
// energy multiplier.
DualVars update_duals(const DualVars& duals, const Vec& interference,
                      double energy, double interference_cap,
                      double energy_budget, double step);

// Per-user argmax over surfaces of the user's secrecy contribution,
// respecting the interference cap when any candidate satisfies it.
std::vector<int> pair_irs(const Scenario& s, const ChannelSet& ch,
                          const Action& current, const AoConfig& cfg);

// Successive convex approximation over the paired surfaces' coefficients:
// the user's own gain is replaced by its first-order lower bound around the
// expansion point and re-expanded while the true objective improves.
Reflection sca_reflection(const Scenario& s, const ChannelSet& ch,
                          const Action& current, const AoConfig& cfg);

// First-order surrogate of F(mu, lambda) = mu^2 + lambda^2 at a point.
double sca_surrogate(double mu, double lambda, double mu0, double lambda0);

// Lowest argmax over a uniform grid of a 1-D objective; grid points failing
// `feasible` are skipped unless none pass.
double grid_argmax(double lo, double hi, int n,
                   const std::function<double(double)>& objective,
                   const std::function<bool(double)>& feasible);

// Sensing-time line search under the false-alarm cap.
double search_sensing_time(const Scenario& s, const ChannelSet& ch,
                           const Action& current, const AoConfig& cfg);

// The maximized objective: sum clamped secrecy under a fresh sensing report
// for the action's tau and coefficients.
double p1_objective(const Scenario& s, const ChannelSet& ch, const Action& a);

struct AoResult {
  Action action;
  std::vector<double> trace;  // objective after every block
  bool converged = false;     // false when the iteration cap stopped it
};

// Alternating optimization: beams+assignment (dual loop), pairing, SCA over
// coefficients, sensing-time search. Every block is safeguarded so the
// trace never decreases.
AoResult ao_solve(const Scenario& s, const ChannelSet& ch, const AoConfig& cfg);

}  // namespace irslab
