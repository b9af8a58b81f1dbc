#include "irslab/ao.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace irslab {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double log2p1(double x) { return std::log2(1.0 + x); }

}  // namespace

double power_objective(const PowerTerm& t, double x) {
  return t.w0 * (log2p1(t.a * x / t.u0) - log2p1(t.b * x / t.v0)) +
         t.w1 * (log2p1(t.a * x / t.u1) - log2p1(t.b * x / t.v1)) -
         t.cost / kLn2 * x;
}

double power_objective_clamped(const PowerTerm& t, double x) {
  return t.w0 * std::max(log2p1(t.a * x / t.u0) - log2p1(t.b * x / t.v0), 0.0) +
         t.w1 * std::max(log2p1(t.a * x / t.u1) - log2p1(t.b * x / t.v1), 0.0) -
         t.cost / kLn2 * x;
}

double power_derivative(const PowerTerm& t, double x) {
  // d/dx of ln-domain secrecy minus price; bits conversion folded into cost.
  return t.w0 * (t.a / (t.u0 + t.a * x) - t.b / (t.v0 + t.b * x)) +
         t.w1 * (t.a / (t.u1 + t.a * x) - t.b / (t.v1 + t.b * x)) - t.cost;
}

namespace {

// Ascending-coefficient product of two polynomials.
std::vector<double> poly_mul(const std::vector<double>& p,
                             const std::vector<double>& q) {
  std::vector<double> out(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  }
  return out;
}

void poly_axpy(std::vector<double>& acc, double scale,
               const std::vector<double>& p) {
  if (acc.size() < p.size()) acc.resize(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += scale * p[i];
}

}  // namespace

std::vector<double> stationary_powers(const PowerTerm& t, double cap) {
  std::vector<double> roots;
  if (cap <= 0.0 || t.a <= 0.0) return roots;

  // Work in cap units with normalized SINR slopes so the quartic stays well
  // conditioned regardless of the absolute channel scale.
  const double a0 = t.a / t.u0 * cap;
  const double b0 = t.b / t.v0 * cap;
  const double a1 = t.a / t.u1 * cap;
  const double b1 = t.b / t.v1 * cap;
  const std::vector<double> pa0{1.0, a0}, pb0{1.0, b0};
  const std::vector<double> pa1{1.0, a1}, pb1{1.0, b1};

  // Derivative numerator: every pole is at negative t, so the real roots of
  // this polynomial on (0, 1] are exactly the stationary powers.
  std::vector<double> num{0.0};
  poly_axpy(num, t.w0 * a0, poly_mul(pb0, poly_mul(pa1, pb1)));
  poly_axpy(num, -t.w0 * b0, poly_mul(pa0, poly_mul(pa1, pb1)));
  poly_axpy(num, t.w1 * a1, poly_mul(pa0, poly_mul(pb0, pb1)));
  poly_axpy(num, -t.w1 * b1, poly_mul(pa0, poly_mul(pb0, pa1)));
  poly_axpy(num, -t.cost * cap,
            poly_mul(poly_mul(pa0, pb0), poly_mul(pa1, pb1)));

  double max_coeff = 0.0;
  for (double c : num) max_coeff = std::max(max_coeff, std::abs(c));
  if (max_coeff <= 0.0) return roots;
  while (num.size() > 1 && std::abs(num.back()) <= 1e-14 * max_coeff) {
    num.pop_back();
  }
  if (num.size() < 2) return roots;

  const int degree = static_cast<int>(num.size()) - 1;
  Eigen::VectorXcd croots;
  if (degree == 1) {
    croots.resize(1);
    croots(0) = Cplx(-num[0] / num[1], 0.0);
  } else {
    // Companion-matrix eigenvalues of the monic polynomial.
    Mat comp = Mat::Zero(degree, degree);
    for (int i = 0; i < degree; ++i) comp(i, degree - 1) = -num[i] / num[degree];
    for (int i = 1; i < degree; ++i) comp(i, i - 1) = 1.0;
    croots = Eigen::EigenSolver<Mat>(comp, false).eigenvalues();
  }

  for (int i = 0; i < croots.size(); ++i) {
    const double re = croots(i).real();
    if (std::abs(croots(i).imag()) > 1e-7 * (1.0 + std::abs(re))) continue;
    if (!(re > 1e-14 && re <= 1.0 + 1e-9)) continue;
    double x = std::min(re, 1.0) * cap;
    // Newton polish on the exact derivative.
    for (int it = 0; it < 4; ++it) {
      const double g = power_derivative(t, x);
      const double a_u0 = t.a / (t.u0 + t.a * x), b_v0 = t.b / (t.v0 + t.b * x);
      const double a_u1 = t.a / (t.u1 + t.a * x), b_v1 = t.b / (t.v1 + t.b * x);
      const double gp = -t.w0 * (a_u0 * a_u0 - b_v0 * b_v0) -
                        t.w1 * (a_u1 * a_u1 - b_v1 * b_v1);
      if (std::abs(gp) < 1e-300) break;
      const double next = x - g / gp;
      if (!(next > 0.0 && next <= cap)) break;
      x = next;
    }
    bool duplicate = false;
    for (double r : roots) {
      if (std::abs(r - x) <= 1e-9 * (1.0 + std::abs(x))) duplicate = true;
    }
    if (!duplicate) roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double best_power(const PowerTerm& t, double cap) {
  double best_x = 0.0;
  double best_v = power_objective_clamped(t, 0.0);
  auto consider = [&](double x) {
    const double v = power_objective_clamped(t, x);
    if (v > best_v + 1e-15) {
      best_v = v;
      best_x = x;
    }
  };
  // A branch's secrecy keeps one sign over all positive powers, so the
  // clamped optimum is a stationary point of the sub-objective restricted
  // to whichever branches stay active. Enumerate the patterns.
  auto add_roots = [&](double w0, double w1) {
    PowerTerm sub = t;
    sub.w0 = w0;
    sub.w1 = w1;
    for (double x : stationary_powers(sub, cap)) consider(x);
  };
  add_roots(t.w0, t.w1);
  if (t.w1 > 0.0) add_roots(t.w0, 0.0);
  if (t.w0 > 0.0) add_roots(0.0, t.w1);
  consider(cap);
  return best_x;
}

BeamSolution beamforming_closed_form(const Scenario& s, const ChannelSet& ch,
                                     const Reflection& theta,
                                     const std::vector<int>& su_irs,
                                     const SensingReport& sensing,
                                     const DualVars& duals, int k, int c,
                                     double power_cap) {
  BeamSolution sol;
  const int zk = su_irs.at(k);
  const CVec e_su = su_row_from_sbs(ch, theta, k, zk);
  const double a_gain = e_su.squaredNorm();
  if (a_gain <= 0.0) {
    sol.direction = CVec::Zero(s.sbs_antennas);
    return sol;
  }
  sol.direction = e_su.conjugate() / e_su.norm();

  double b_gain = 0.0;
  for (int m = 0; m < s.num_eve; ++m) {
    const double g =
        received_power(eve_row_from_sbs(ch, theta, m, zk), sol.direction);
    if (g > b_gain) {
      b_gain = g;
      sol.strongest_eve = m;
    }
  }

  // Busy-branch denominators from the primary signal arriving through the
  // surface currently assisting its PU.
  double i_su = 0.0, i_eve = 0.0;
  const int d = ch.designated_pu(c);
  if (d >= 0) {
    const int zd = pu_assist_irs(ch, theta, d);
    i_su = received_power(su_row_from_pbs(ch, theta, k, zd), ch.pbs_beam[d]);
    if (sol.strongest_eve >= 0) {
      i_eve = received_power(
          eve_row_from_pbs(ch, theta, sol.strongest_eve, zd), ch.pbs_beam[d]);
    }
  }

  // Per-unit-power interference gain toward the PU sharing this channel.
  double y_gain = 0.0;
  if (d >= 0) {
    y_gain = received_power(pu_row_from_sbs(ch, theta, d, zk), sol.direction);
  }

  const ChannelProbs& p = sensing.channel[c].probs;
  const double weights[2][2] = {{p.p00, p.p01}, {p.p10, p.p11}};
  for (int j = 0; j < 2; ++j) {
    PowerTerm t;
    t.a = a_gain;
    t.b = b_gain;
    t.u0 = s.noise_su;
    t.v0 = s.noise_eve;
    t.u1 = i_su + s.noise_su;
    t.v1 = i_eve + s.noise_eve;
    t.w0 = weights[j][0];
    t.w1 = weights[j][1];
    t.cost = kLn2 * (duals.omega(c) * y_gain * t.w1 +
                     duals.varsigma * (t.w0 + t.w1));
    sol.term[j] = t;
    sol.power[j] = best_power(t, power_cap);
  }
  return sol;
}

double subchannel_indicator(const Scenario& s, const SensingReport& sensing,
                            const BeamSolution& beam, int c, double tau) {
  const double pre = 1.0 - tau / s.frame_seconds;
  const ChannelProbs& p = sensing.channel[c].probs;
  const double weights[2][2] = {{p.p00, p.p01}, {p.p10, p.p11}};
  double h = 0.0;
  for (int j = 0; j < 2; ++j) {
    const PowerTerm& t = beam.term[j];
    const double x = beam.power[j];
    const double sec_idle =
        std::max(log2p1(t.a * x / t.u0) - log2p1(t.b * x / t.v0), 0.0);
    const double sec_busy =
        std::max(log2p1(t.a * x / t.u1) - log2p1(t.b * x / t.v1), 0.0);
    const double d_idle = t.a * x / (kLn2 * (t.u0 + t.a * x)) -
                          t.b * x / (kLn2 * (t.v0 + t.b * x));
    const double d_busy = t.a * x / (kLn2 * (t.u1 + t.a * x)) -
                          t.b * x / (kLn2 * (t.v1 + t.b * x));
    h += weights[j][0] * (sec_idle - d_idle) + weights[j][1] * (sec_busy - d_busy);
  }
  return pre * h;
}

namespace {

void injective_maps(int n_users, int n_channels, int k, std::vector<int>& used,
                    std::vector<int>& current,
                    const std::function<void(const std::vector<int>&)>& emit) {
  if (k == n_users) {
    emit(current);
    return;
  }
  for (int c = 0; c < n_channels; ++c) {
    if (used[c]) continue;
    used[c] = 1;
    current[k] = c;
    injective_maps(n_users, n_channels, k + 1, used, current, emit);
    used[c] = 0;
  }
}

}  // namespace

std::vector<int> assign_subchannels(const Mat& indicators) {
  const int K = static_cast<int>(indicators.rows());
  const int C = static_cast<int>(indicators.cols());

  // Fast path: per-channel argmax (lowest user index on ties).
  std::vector<int> winner(C, -1);
  for (int c = 0; c < C; ++c) {
    int best = 0;
    for (int k = 1; k < K; ++k) {
      if (indicators(k, c) > indicators(best, c)) best = k;
    }
    winner[c] = best;
  }
  std::vector<int> chosen(K, -1);
  bool injective = true;
  for (int c = 0; c < C && injective; ++c) {
    const int k = winner[c];
    if (chosen[k] == -1) {
      chosen[k] = c;
    } else {
      injective = false;
    }
  }
  if (injective) {
    for (int k = 0; k < K; ++k) {
      if (chosen[k] == -1) injective = false;  // some user got no channel
    }
  }
  if (injective && C == K) return chosen;

  // Exhaustive maximum-weight one-to-one map; the counts here are tiny.
  std::vector<int> best;
  double best_total = -std::numeric_limits<double>::infinity();
  std::vector<int> used(C, 0), current(K, 0);
  injective_maps(K, C, 0, used, current, [&](const std::vector<int>& map) {
    double total = 0.0;
    for (int k = 0; k < K; ++k) total += indicators(k, map[k]);
    if (total > best_total + 1e-15) {
      best_total = total;
      best = map;
    }
  });
  return best;
}

DualVars update_duals(const DualVars& duals, const Vec& interference,
                      double energy, double interference_cap,
                      double energy_budget, double step) {
  DualVars next = duals;
  for (int c = 0; c < next.omega.size(); ++c) {
    next.omega(c) =
        std::max(0.0, next.omega(c) + step * (interference(c) - interference_cap));
  }
  next.varsigma =
      std::max(0.0, next.varsigma + step * (energy - energy_budget));
  return next;
}

double p1_objective(const Scenario& s, const ChannelSet& ch, const Action& a) {
  const SensingReport rep = make_sensing_report(ch, a.theta, a.tau, s);
  return secrecy_rate(ch, a, rep, s);
}

namespace {

// Per-user secrecy contribution of the current action (clamped), used by
// the pairing subproblem.
double user_secrecy(const Scenario& s, const ChannelSet& ch, const Action& a,
                    int k) {
  const SensingReport rep = make_sensing_report(ch, a.theta, a.tau, s);
  const AverageRates rates = average_rates(ch, a, rep, s);
  return rates.su_secrecy[k];
}

// Expected interference pushed onto the subchannel's PU by SU k's beam.
double pu_interference(const Scenario& s, const ChannelSet& ch,
                       const Action& a, int k) {
  const int c = a.assign.su_channel[k];
  const int d = ch.designated_pu(c);
  if (d < 0) return 0.0;
  const double busy = 1.0 - ch.idle_prior(s, c);
  const double pre = 1.0 - a.tau / s.frame_seconds;
  const double y = received_power(
      pu_row_from_sbs(ch, a.theta, d, a.assign.su_irs[k]), a.beams[k]);
  return pre * busy * y;
}

}  // namespace

std::vector<int> pair_irs(const Scenario& s, const ChannelSet& ch,
                          const Action& current, const AoConfig& cfg) {
  (void)cfg;
  std::vector<int> pairing = current.assign.su_irs;
  for (int k = 0; k < s.num_su; ++k) {
    double best_obj = -std::numeric_limits<double>::infinity();
    int best_z = pairing[k];
    bool best_feasible = false;
    for (int z = 0; z < s.num_irs; ++z) {
      Action cand = current;
      cand.assign.su_irs = pairing;
      cand.assign.su_irs[k] = z;
      // Keep the optimized power but re-aim the beam at the candidate's
      // effective channel; the direction is not a free variable under
      // maximum-ratio transmission.
      const CVec e = su_row_from_sbs(ch, cand.theta, k, z);
      const double nrm = e.norm();
      const double power = std::sqrt(current.beams[k].squaredNorm());
      if (nrm > 0.0) {
        cand.beams[k] = power * e.conjugate() / nrm;
      }
      const bool feas =
          pu_interference(s, ch, cand, k) <= s.interference_cap + 1e-15;
      const double obj = user_secrecy(s, ch, cand, k);
      const bool better = (feas && !best_feasible) ||
                          (feas == best_feasible && obj > best_obj + 1e-12);
      if (better) {
        best_obj = obj;
        best_z = z;
        best_feasible = feas;
      }
    }
    pairing[k] = best_z;
  }
  return pairing;
}

double sca_surrogate(double mu, double lambda, double mu0, double lambda0) {
  return mu0 * mu0 + lambda0 * lambda0 + 2.0 * mu0 * (mu - mu0) +
         2.0 * lambda0 * (lambda - lambda0);
}

namespace {

// Reflection coefficients as one complex vector per optimized surface.
struct ScaVars {
  std::vector<int> surfaces;          // optimized surface ids
  std::vector<CVec> w;                // current coefficients per surface
  std::vector<int> index_of_surface;  // surface id -> position or -1
};

Reflection to_reflection(const Reflection& base, const ScaVars& vars) {
  Reflection theta = base;
  for (std::size_t i = 0; i < vars.surfaces.size(); ++i) {
    const int z = vars.surfaces[i];
    for (int n = 0; n < theta.amplitude[z].size(); ++n) {
      const Cplx c = vars.w[i](n);
      theta.amplitude[z](n) = std::abs(c);
      double ph = std::arg(c);
      if (ph < 0.0) ph += 2.0 * M_PI;
      if (ph >= 2.0 * M_PI) ph = 0.0;
      theta.phase[z](n) = ph;
    }
  }
  return theta;
}

// Affine dependence of one node's effective scalar on one surface's
// coefficients: scalar = base + phi . w  (complex dot, no conjugation).
struct AffineTerm {
  Cplx base;
  CVec phi;
  Cplx value(const CVec& w) const { return base + (phi.transpose() * w).value(); }
};

AffineTerm affine_scalar(const CVec& direct, const CVec& via_irs,
                         const CMat& bs_to_irs, const CVec& beam) {
  AffineTerm t;
  t.base = (direct.transpose() * beam).value();
  const CVec gf = bs_to_irs * beam;  // (N_n)
  t.phi = via_irs.cwiseProduct(gf);
  return t;
}

}  // namespace

Reflection sca_reflection(const Scenario& s, const ChannelSet& ch,
                          const Action& current, const AoConfig& cfg) {
  // Optimized set: the paired surfaces. Others keep their coefficients.
  ScaVars vars;
  vars.index_of_surface.assign(s.num_irs, -1);
  for (int k = 0; k < s.num_su; ++k) {
    const int z = current.assign.su_irs[k];
    if (vars.index_of_surface[z] < 0) {
      vars.index_of_surface[z] = static_cast<int>(vars.surfaces.size());
      vars.surfaces.push_back(z);
      vars.w.push_back(current.theta.coefficients(z));
    }
  }
  if (vars.surfaces.empty()) return current.theta;

  // Frozen context: sensing probabilities, PU-assist surfaces and the
  // primary interference arriving at each node (its surface is usually not
  // an optimized one; when it is, the term stays exact through the affine
  // form below).
  const SensingReport rep0 =
      make_sensing_report(ch, current.theta, current.tau, s);
  const double pre = 1.0 - current.tau / s.frame_seconds;

  struct UserCtx {
    AffineTerm own;          // through its paired surface
    int own_var = -1;        // index into vars
    std::vector<AffineTerm> eves;
    std::vector<int> eve_var;
    double w_idle = 0.0, w_busy = 0.0;
    double i_su = 0.0;                 // busy-branch interference at the user
    std::vector<double> i_eve;         // same per eavesdropper
  };
  std::vector<UserCtx> users(s.num_su);
  for (int k = 0; k < s.num_su; ++k) {
    UserCtx& u = users[k];
    const int c = current.assign.su_channel[k];
    const int zk = current.assign.su_irs[k];
    u.own = affine_scalar(ch.sbs_to_su[k], ch.irs_to_su[zk][k],
                          ch.sbs_to_irs[zk], current.beams[k]);
    u.own_var = vars.index_of_surface[zk];
    const ChannelProbs& p = rep0.channel[c].probs;
    u.w_idle = p.p00 + p.p10;
    u.w_busy = p.p01 + p.p11;
    const int d = ch.designated_pu(c);
    if (d >= 0 && ch.pu_active[d]) {
      const int zd = pu_assist_irs(ch, current.theta, d);
      u.i_su = received_power(su_row_from_pbs(ch, current.theta, k, zd),
                              ch.pbs_beam[d]);
      for (int m = 0; m < s.num_eve; ++m) {
        u.i_eve.push_back(received_power(
            eve_row_from_pbs(ch, current.theta, m, zd), ch.pbs_beam[d]));
      }
    } else {
      u.i_su = 0.0;
      u.i_eve.assign(s.num_eve, 0.0);
    }
    for (int m = 0; m < s.num_eve; ++m) {
      u.eves.push_back(affine_scalar(ch.sbs_to_eve[m], ch.irs_to_eve[zk][m],
                                     ch.sbs_to_irs[zk], current.beams[k]));
      u.eve_var.push_back(vars.index_of_surface[zk]);
    }
  }

  // Surrogate objective and complex gradient (dJ/dRe + j dJ/dIm per slot).
  // expansion[k] holds the user's own scalar at the expansion point.
  std::vector<Cplx> expansion(s.num_su);
  auto surrogate = [&](const std::vector<CVec>& w,
                       std::vector<CVec>* grad) -> double {
    if (grad) {
      for (std::size_t i = 0; i < vars.surfaces.size(); ++i) {
        (*grad)[i].setZero();
      }
    }
    double total = 0.0;
    for (int k = 0; k < s.num_su; ++k) {
      const UserCtx& u = users[k];
      const Cplx e_own = u.own.value(w[u.own_var]);
      const Cplx e0 = expansion[k];
      const double fbar = sca_surrogate(e_own.real(), e_own.imag(), e0.real(),
                                        e0.imag());
      const double sig = std::max(fbar, 0.0);
      const double r_user =
          pre * (u.w_idle * log2p1(sig / s.noise_su) +
                 u.w_busy * log2p1(sig / (u.i_su + s.noise_su)));

      int active_m = -1;
      double r_eve = 0.0;
      std::vector<double> eve_pow(s.num_eve, 0.0);
      for (int m = 0; m < s.num_eve; ++m) {
        const Cplx em = u.eves[m].value(w[u.eve_var[m]]);
        eve_pow[m] = std::norm(em);
        const double r =
            pre * (u.w_idle * log2p1(eve_pow[m] / s.noise_eve) +
                   u.w_busy * log2p1(eve_pow[m] / (u.i_eve[m] + s.noise_eve)));
        if (r > r_eve) {
          r_eve = r;
          active_m = m;
        }
      }
      const double term = r_user - r_eve;
      if (term <= 0.0) continue;  // clamped: no value, no gradient
      total += term;
      if (!grad) continue;

      // d r_user / d fbar, only where the bound is positive.
      if (fbar > 0.0) {
        const double dr_dsig =
            pre / kLn2 *
            (u.w_idle / (s.noise_su + sig) + u.w_busy / (u.i_su + s.noise_su + sig));
        // Linear bound: gradient direction is the (fixed) expansion scalar.
        (*grad)[u.own_var] +=
            (2.0 * dr_dsig) * (e0 * u.own.phi.conjugate());
      }
      if (active_m >= 0) {
        const UserCtx& uu = u;
        const Cplx em = uu.eves[active_m].value(w[uu.eve_var[active_m]]);
        const double bp = eve_pow[active_m];
        const double dr_db =
            pre / kLn2 *
            (uu.w_idle / (s.noise_eve + bp) +
             uu.w_busy / (uu.i_eve[active_m] + s.noise_eve + bp));
        (*grad)[uu.eve_var[active_m]] -=
            (2.0 * dr_db) * (em * uu.eves[active_m].phi.conjugate());
      }
    }
    return total;
  };

  auto project = [](CVec& w) {
    for (int n = 0; n < w.size(); ++n) {
      const double mag = std::abs(w(n));
      if (mag > 1.0) w(n) /= mag;
    }
  };

  // True objective of a candidate coefficient set.
  auto true_objective = [&](const std::vector<CVec>& w) {
    ScaVars probe = vars;
    probe.w = w;
    Action a = current;
    a.theta = to_reflection(current.theta, probe);
    return p1_objective(s, ch, a);
  };

  std::vector<CVec> w_best = vars.w;
  double j_best = true_objective(w_best);

  std::vector<CVec> w_cur = w_best;
  for (int round = 0; round < cfg.sca_iters; ++round) {
    // Expand at the current point.
    for (int k = 0; k < s.num_su; ++k) {
      expansion[k] = users[k].own.value(w_cur[users[k].own_var]);
    }
    // Inner projected gradient ascent on the surrogate.
    std::vector<CVec> grad(vars.surfaces.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
      grad[i] = CVec::Zero(s.irs_elements);
    }
    double step = 0.25;
    double j_sur = surrogate(w_cur, &grad);
    for (int it = 0; it < cfg.sca_inner_iters; ++it) {
      std::vector<CVec> w_try = w_cur;
      for (std::size_t i = 0; i < w_try.size(); ++i) {
        w_try[i] += step * grad[i];
        project(w_try[i]);
      }
      const double j_try = surrogate(w_try, nullptr);
      if (j_try > j_sur + cfg.sca_inner_tol) {
        w_cur = std::move(w_try);
        j_sur = surrogate(w_cur, &grad);
        step = std::min(step * 1.5, 64.0);
      } else {
        step *= 0.5;
        if (step < 1e-12) break;
      }
    }
    // Accept only true improvements; otherwise return the best iterate.
    const double j_true = true_objective(w_cur);
    if (j_true > j_best + 1e-12) {
      j_best = j_true;
      w_best = w_cur;
    } else {
      break;
    }
  }

  ScaVars out = vars;
  out.w = w_best;
  return to_reflection(current.theta, out);
}

double grid_argmax(double lo, double hi, int n,
                   const std::function<double(double)>& objective,
                   const std::function<bool(double)>& feasible) {
  double best_x = lo;
  double best_v = -std::numeric_limits<double>::infinity();
  bool best_feas = false;
  for (int i = 0; i < n; ++i) {
    const double x =
        n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    const bool f = !feasible || feasible(x);
    const double v = objective(x);
    const bool better =
        (f && !best_feas) || (f == best_feas && v > best_v + 1e-15);
    if (better) {
      best_x = x;
      best_v = v;
      best_feas = f;
    }
  }
  return best_x;
}

double search_sensing_time(const Scenario& s, const ChannelSet& ch,
                           const Action& current, const AoConfig& cfg) {
  auto with_tau = [&](double tau) {
    Action a = current;
    a.tau = tau;
    return a;
  };
  auto objective = [&](double tau) {
    return p1_objective(s, ch, with_tau(tau));
  };
  auto feasible = [&](double tau) {
    const SensingReport rep =
        make_sensing_report(ch, current.theta, tau, s);
    for (int c = 0; c < s.num_subchannels; ++c) {
      if (!ch.occupied(c)) continue;
      if (rep.channel[c].false_alarm > s.false_alarm_max) return false;
    }
    return true;
  };
  return grid_argmax(0.01 * s.frame_seconds, 0.99 * s.frame_seconds,
                     cfg.tau_grid, objective, feasible);
}

AoResult ao_solve(const Scenario& s, const ChannelSet& ch, const AoConfig& cfg) {
  AoResult res;

  // Feasible starting point: identity coefficients, users on their own
  // subchannel index, strongest-surface pairing, equal-power MRT beams.
  Action a;
  a.theta = Reflection::identity(s.num_irs, s.irs_elements);
  a.assign.su_channel.resize(s.num_su);
  for (int k = 0; k < s.num_su; ++k) a.assign.su_channel[k] = k;
  a.assign.su_irs.assign(s.num_su, 0);
  for (int k = 0; k < s.num_su; ++k) {
    double best = -1.0;
    for (int z = 0; z < s.num_irs; ++z) {
      const double g = su_row_from_sbs(ch, a.theta, k, z).squaredNorm();
      if (g > best) {
        best = g;
        a.assign.su_irs[k] = z;
      }
    }
  }
  const double budget = s.beam_budget();
  const double per_beam = budget / s.num_su;
  for (int k = 0; k < s.num_su; ++k) {
    const CVec e = su_row_from_sbs(ch, a.theta, k, a.assign.su_irs[k]);
    const double nrm = e.norm();
    a.beams.push_back(nrm > 0.0 ? CVec(std::sqrt(per_beam) * e.conjugate() / nrm)
                                : CVec(CVec::Zero(s.sbs_antennas)));
  }
  a.tau = s.frame_seconds / 10.0;

  double j_cur = p1_objective(s, ch, a);
  res.trace.push_back(j_cur);

  // Applies a block candidate only if it does not lose objective.
  auto safeguard = [&](const Action& cand) {
    const double j_new = p1_objective(s, ch, cand);
    if (j_new >= j_cur - 1e-12) {
      a = cand;
      j_cur = std::max(j_cur, j_new);
    }
    res.trace.push_back(j_cur);
  };

  for (int outer = 0; outer < cfg.outer_iters; ++outer) {
    const double j_outer_start = j_cur;

    // Block 1: transmit powers and assignment under dual ascent.
    {
      const SensingReport rep = make_sensing_report(ch, a.theta, a.tau, s);
      DualVars duals;
      duals.omega = Vec::Zero(s.num_subchannels);
      Mat indicators = Mat::Zero(s.num_su, s.num_subchannels);
      std::vector<std::vector<BeamSolution>> sols(
          s.num_su, std::vector<BeamSolution>(s.num_subchannels));
      std::vector<int> xi = a.assign.su_channel;
      for (int t = 1; t <= cfg.dual_iters; ++t) {
        for (int k = 0; k < s.num_su; ++k) {
          for (int c = 0; c < s.num_subchannels; ++c) {
            sols[k][c] = beamforming_closed_form(
                s, ch, a.theta, a.assign.su_irs, rep, duals, k, c, budget);
            indicators(k, c) =
                subchannel_indicator(s, rep, sols[k][c], c, a.tau);
          }
        }
        xi = assign_subchannels(indicators);

        // Constraint usage of the selected assignment.
        Vec interference = Vec::Zero(s.num_subchannels);
        double energy = 0.0;
        const double pre = 1.0 - a.tau / s.frame_seconds;
        for (int k = 0; k < s.num_su; ++k) {
          const int c = xi[k];
          const BeamSolution& bs = sols[k][c];
          const ChannelProbs& p = rep.channel[c].probs;
          const double x_mean = (p.p00 + p.p01) * bs.power[0] +
                                (p.p10 + p.p11) * bs.power[1];
          energy += x_mean;
          const int d = ch.designated_pu(c);
          if (d >= 0) {
            const double y = received_power(
                pu_row_from_sbs(ch, a.theta, d, a.assign.su_irs[k]),
                bs.direction);
            interference(c) += pre * y *
                               (p.p01 * bs.power[0] + p.p11 * bs.power[1]);
          }
        }
        duals = update_duals(duals, interference, energy, s.interference_cap,
                             budget, cfg.dual_step0 / std::sqrt(t));
      }

      Action cand = a;
      cand.assign.su_channel = xi;
      for (int k = 0; k < s.num_su; ++k) {
        const BeamSolution& bs = sols[k][xi[k]];
        const ChannelProbs& p = rep.channel[xi[k]].probs;
        const double x_mean = (p.p00 + p.p01) * bs.power[0] +
                              (p.p10 + p.p11) * bs.power[1];
        cand.beams[k] = std::sqrt(x_mean) * bs.direction;
      }
      const double energy = cand.beam_energy();
      if (energy > budget) {
        const double scale = std::sqrt(budget / energy) * (1.0 - 1e-12);
        for (auto& f : cand.beams) f *= scale;
      }
      safeguard(cand);
    }

    // Block 2: surface pairing.
    {
      Action cand = a;
      cand.assign.su_irs = pair_irs(s, ch, a, cfg);
      for (int k = 0; k < s.num_su; ++k) {
        const CVec e = su_row_from_sbs(ch, cand.theta, k, cand.assign.su_irs[k]);
        const double nrm = e.norm();
        const double power = std::sqrt(a.beams[k].squaredNorm());
        if (nrm > 0.0) cand.beams[k] = power * e.conjugate() / nrm;
      }
      safeguard(cand);
    }

    // Block 3: reflection coefficients by SCA.
    {
      Action cand = a;
      cand.theta = sca_reflection(s, ch, a, cfg);
      safeguard(cand);
    }

    // Block 4: sensing time.
    {
      Action cand = a;
      cand.tau = search_sensing_time(s, ch, a, cfg);
      safeguard(cand);
    }

    if (!cfg.run_full_outer && j_cur - j_outer_start < cfg.outer_tol) {
      res.converged = true;
      break;
    }
  }

  res.action = a;
  return res;
}

}  // namespace irslab
