#include "irslab/agent.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>

namespace irslab {

namespace {

double clamp_unit(double v) { return std::max(-1.0, std::min(1.0, v)); }

constexpr double kTauLow = 0.01;
constexpr double kTauHigh = 0.99;
constexpr double kBudgetMargin = 1.0 - 1e-12;

}  // namespace

ActionCodec::ActionCodec(const Scenario& s) : scen_(s) {
  dim_ = s.num_su * 2 * s.irs_elements + 2 * s.num_su * s.sbs_antennas + 1;
}

Action ActionCodec::decode(const Assignment& assign, const Vec& x) const {
  const Scenario& s = scen_;
  if (x.size() != dim_) throw std::invalid_argument("codec: bad vector length");
  Action a;
  a.assign = assign;
  a.theta = Reflection::identity(s.num_irs, s.irs_elements);

  // Paired-surface slots; when users share a surface the lowest-index
  // user's slot configures it.
  std::vector<bool> written(s.num_irs, false);
  int at = 0;
  for (int k = 0; k < s.num_su; ++k) {
    const int z = assign.su_irs[k];
    if (!written[z]) {
      written[z] = true;
      for (int n = 0; n < s.irs_elements; ++n) {
        a.theta.amplitude[z](n) = (clamp_unit(x(at + n)) + 1.0) / 2.0;
      }
      for (int n = 0; n < s.irs_elements; ++n) {
        const double ph = M_PI * (clamp_unit(x(at + s.irs_elements + n)) + 1.0);
        a.theta.phase[z](n) = ph >= 2.0 * M_PI ? 0.0 : ph;
      }
    }
    at += 2 * s.irs_elements;
  }

  for (int k = 0; k < s.num_su; ++k) {
    CVec f(s.sbs_antennas);
    for (int i = 0; i < s.sbs_antennas; ++i) {
      f(i) = Cplx(clamp_unit(x(at)), clamp_unit(x(at + 1)));
      at += 2;
    }
    a.beams.push_back(std::move(f));
  }
  const double energy = a.beam_energy();
  const double budget = s.beam_budget();
  if (energy > budget) {
    const double scale = std::sqrt(budget / energy) * kBudgetMargin;
    for (auto& f : a.beams) f *= scale;
  }

  const double t = (clamp_unit(x(at)) + 1.0) / 2.0;
  a.tau = s.frame_seconds * (kTauLow + (kTauHigh - kTauLow) * t);
  return a;
}

Vec ActionCodec::encode(const Action& a) const {
  const Scenario& s = scen_;
  Vec x = Vec::Zero(dim_);
  int at = 0;
  for (int k = 0; k < s.num_su; ++k) {
    const int z = a.assign.su_irs[k];
    for (int n = 0; n < s.irs_elements; ++n) {
      x(at + n) = 2.0 * a.theta.amplitude[z](n) - 1.0;
    }
    for (int n = 0; n < s.irs_elements; ++n) {
      x(at + s.irs_elements + n) = a.theta.phase[z](n) / M_PI - 1.0;
    }
    at += 2 * s.irs_elements;
  }
  for (int k = 0; k < s.num_su; ++k) {
    for (int i = 0; i < s.sbs_antennas; ++i) {
      x(at++) = a.beams[k](i).real();
      x(at++) = a.beams[k](i).imag();
    }
  }
  const double t = a.tau / s.frame_seconds;
  x(at) = 2.0 * (t - kTauLow) / (kTauHigh - kTauLow) - 1.0;
  return x;
}

H2dsAgent::H2dsAgent(const Scenario& s, const TrainConfig& cfg,
                     std::uint64_t seed)
    : config(cfg), scen_(s), catalog_(OptionCatalog::build(s)), codec_(s) {
  Environment probe(s, RewardConfig{}, 0);
  state_dim_ = probe.state_dim();
  SeededRng rng(seed);
  qnet = DuelingQNet(state_dim_, cfg.d3qn_hidden, catalog_.size(), rng);
  qnet_target = qnet;
  sac = SoftActorCritic(state_dim_ + catalog_.size(), codec_.dim(),
                        cfg.sac_hidden, cfg.init_alpha, rng);
  q_adam_ = AdamState::like(qnet.net);
}

Vec H2dsAgent::sac_input(const Vec& state, int option) const {
  Vec in = Vec::Zero(state_dim_ + catalog_.size());
  in.head(state_dim_) = state;
  in(state_dim_ + option) = 1.0;
  return in;
}

int H2dsAgent::select_option(const Vec& state, double eps,
                             SeededRng& rng) const {
  return epsilon_greedy_select(state, qnet, eps, rng);
}

Vec H2dsAgent::sample_continuous(const Vec& state, int option,
                                 SeededRng& rng) const {
  Mat eps(codec_.dim(), 1);
  for (int d = 0; d < eps.rows(); ++d) eps(d, 0) = rng.normal();
  const SacSample smp = sac.sample(sac_input(state, option), eps);
  return smp.action.col(0);
}

std::pair<int, Vec> H2dsAgent::greedy_decision(const Vec& state) const {
  const int option = argmax_option(qnet.q_values(state).col(0));
  return {option, sac.mean_action(sac_input(state, option))};
}

Action H2dsAgent::decode(int option, const Vec& x) const {
  return codec_.decode(catalog_.at(option), x);
}

void H2dsAgent::learn(const ReplayBuffer& buffer, SeededRng& rng) {
  const int B = config.batch_size;
  const auto batch = buffer.sample(B, rng);
  const int sdim = state_dim_;
  const int adim = codec_.dim();
  const int nopt = catalog_.size();

  Mat S(sdim, B), S2(sdim, B), X(adim, B);
  Mat IN(sdim + nopt, B), IN2(sdim + nopt, B);
  Vec R(B);
  std::vector<int> opts(B);
  IN.setZero();
  IN2.setZero();
  for (int i = 0; i < B; ++i) {
    const Experience& e = *batch[i];
    S.col(i) = e.state;
    S2.col(i) = e.next_state;
    X.col(i) = e.cont;
    R(i) = e.reward;
    opts[i] = e.option;
    IN.col(i).head(sdim) = e.state;
    IN(sdim + e.option, i) = 1.0;
    // Next-state continuous bootstrap keeps the sample's own option.
    IN2.col(i).head(sdim) = e.next_state;
    IN2(sdim + e.option, i) = 1.0;
  }

  auto draw_eps = [&] {
    Mat eps(adim, B);
    for (int i = 0; i < B; ++i) {
      for (int d = 0; d < adim; ++d) eps(d, i) = rng.normal();
    }
    return eps;
  };
  auto guard = [](double loss, const char* what) {
    if (!std::isfinite(loss)) {
      throw TrainingDiverged(std::string("training diverged in ") + what);
    }
  };

  const Vec yq = d3qn_target(S2, R, qnet, qnet_target, config.discount);
  const D3qnLoss ql = d3qn_loss(S, opts, yq, qnet);
  guard(ql.loss, "d3qn loss");
  adam_step(qnet.net, ql.grads, q_adam_, config.lr_d3qn);

  const Vec ys = sac.targets(R, IN2, draw_eps(), config.discount);
  for (int j = 0; j < 2; ++j) {
    const SacLoss cl = sac.critic_loss(j, IN, X, ys);
    guard(cl.loss, "critic loss");
    sac.apply_critic(j, cl.grads, config.lr_critic);
  }
  const SoftActorCritic::PolicyLoss pl = sac.policy_loss(IN, draw_eps());
  guard(pl.loss, "policy loss");
  sac.apply_policy(pl.grads, config.lr_policy);
  sac.update_alpha(pl.log_prob, config.lr_alpha);
  sac.soft_update(config.tau_soft);
}

void H2dsAgent::sync_targets_if_due(long env_step) {
  if (config.d3qn_sync_period > 0 &&
      env_step % config.d3qn_sync_period == 0) {
    qnet_target = qnet;
  }
}

void apply_theta_override(Action& a, ThetaOverride o, const Scenario& s) {
  switch (o) {
    case ThetaOverride::kNone:
      break;
    case ThetaOverride::kIdentity:
      a.theta = Reflection::identity(s.num_irs, s.irs_elements);
      break;
    case ThetaOverride::kOff:
      a.theta = Reflection::zero(s.num_irs, s.irs_elements);
      break;
  }
}

H2dsAgent train_agent(const Scenario& s, const TrainConfig& cfg,
                      const RewardConfig& rc, std::uint64_t seed,
                      const SchemeVariant& variant, RateMode mode,
                      const StepCallback& on_step,
                      bool measure_decision_time) {
  SeededRng root(seed);
  Environment env(s, rc, root.fork(1).seed(), mode);
  H2dsAgent agent(s, cfg, root.fork(2).seed());
  SeededRng expl = root.fork(3);
  ReplayBuffer buffer(cfg.buffer_capacity);

  long gstep = 0;
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    Vec state = env.reset();
    for (int st = 0; st < cfg.steps_per_episode; ++st) {
      const auto t0 = std::chrono::steady_clock::now();
      const double horizon = std::max(1, cfg.eps_anneal_steps);
      const double eps =
          std::max(cfg.eps_end,
                   cfg.eps_start - (cfg.eps_start - cfg.eps_end) *
                                       static_cast<double>(gstep) / horizon);
      const int option =
          variant.random_option
              ? static_cast<int>(expl.uniform_int(agent.catalog().size()))
              : agent.select_option(state, eps, expl);
      const Vec x = agent.sample_continuous(state, option, expl);
      Action act = agent.decode(option, x);
      apply_theta_override(act, variant.theta, s);
      double decision_seconds = 0.0;
      if (measure_decision_time) {
        decision_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
      }

      Environment::Step step = env.step(act);
      buffer.push(Experience{state, option, x, step.reward, step.state});
      if (buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
        for (int l = 0; l < cfg.updates_per_step; ++l) {
          agent.learn(buffer, expl);
        }
      }
      agent.sync_targets_if_due(gstep);

      if (on_step) {
        StepRecord rec;
        rec.episode = ep;
        rec.step = st;
        rec.reward = step.reward;
        rec.decision_seconds = decision_seconds;
        rec.info = &step.info;
        rec.action = &act;
        on_step(rec);
      }
      state = step.state;
      ++gstep;
    }
  }
  return agent;
}

namespace {

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_i32(std::ostream& out, std::int32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
std::int32_t read_i32(std::istream& in) {
  std::int32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
double read_f64(std::istream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_mlp(std::ostream& out, const Mlp& net) {
  write_i32(out, net.layers());
  for (int l = 0; l < net.layers(); ++l) {
    write_i32(out, static_cast<std::int32_t>(net.w[l].rows()));
    write_i32(out, static_cast<std::int32_t>(net.w[l].cols()));
    for (int i = 0; i < net.w[l].rows(); ++i) {
      for (int j = 0; j < net.w[l].cols(); ++j) write_f64(out, net.w[l](i, j));
    }
    for (int i = 0; i < net.b[l].size(); ++i) write_f64(out, net.b[l](i));
  }
}

void read_mlp(std::istream& in, Mlp& net) {
  const int layers = read_i32(in);
  net.w.assign(layers, Mat());
  net.b.assign(layers, Vec());
  for (int l = 0; l < layers; ++l) {
    const int rows = read_i32(in);
    const int cols = read_i32(in);
    net.w[l] = Mat(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) net.w[l](i, j) = read_f64(in);
    }
    net.b[l] = Vec(rows);
    for (int i = 0; i < rows; ++i) net.b[l](i) = read_f64(in);
  }
}

constexpr std::uint64_t kAgentMagic = 0x495253414754315FULL;  // "IRSAGT1_"

}  // namespace

void H2dsAgent::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("agent: cannot write " + path);
  write_u64(out, kAgentMagic);
  write_u64(out, scen_.fingerprint());
  write_i32(out, state_dim_);
  write_i32(out, catalog_.size());
  write_i32(out, codec_.dim());
  auto write_dims = [&](const std::vector<int>& v) {
    write_i32(out, static_cast<std::int32_t>(v.size()));
    for (int d : v) write_i32(out, d);
  };
  write_dims(config.d3qn_hidden);
  write_dims(config.sac_hidden);
  write_mlp(out, qnet.net);
  write_mlp(out, qnet_target.net);
  write_mlp(out, sac.policy);
  write_mlp(out, sac.critic[0]);
  write_mlp(out, sac.critic[1]);
  write_mlp(out, sac.target[0]);
  write_mlp(out, sac.target[1]);
  write_f64(out, sac.log_alpha);
}

H2dsAgent H2dsAgent::load(const std::string& path, const Scenario& s) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("agent: cannot open " + path);
  if (read_u64(in) != kAgentMagic) {
    throw std::runtime_error("agent: not an agent file (bad magic)");
  }
  const std::uint64_t fp = read_u64(in);
  if (fp != s.fingerprint()) {
    throw std::runtime_error(
        "agent: scenario fingerprint mismatch; refusing to load");
  }
  const int state_dim = read_i32(in);
  const int n_options = read_i32(in);
  const int adim = read_i32(in);
  auto read_dims = [&] {
    const int n = read_i32(in);
    std::vector<int> v(n);
    for (int& d : v) d = read_i32(in);
    return v;
  };
  TrainConfig cfg;
  cfg.d3qn_hidden = read_dims();
  cfg.sac_hidden = read_dims();

  H2dsAgent agent(s, cfg, 0);
  if (agent.state_dim_ != state_dim || agent.catalog_.size() != n_options ||
      agent.codec_.dim() != adim) {
    throw std::runtime_error("agent: stored dimensions do not match scenario");
  }
  read_mlp(in, agent.qnet.net);
  read_mlp(in, agent.qnet_target.net);
  read_mlp(in, agent.sac.policy);
  read_mlp(in, agent.sac.critic[0]);
  read_mlp(in, agent.sac.critic[1]);
  read_mlp(in, agent.sac.target[0]);
  read_mlp(in, agent.sac.target[1]);
  agent.sac.log_alpha = read_f64(in);
  if (!in) throw std::runtime_error("agent: truncated file " + path);
  return agent;
}

}  // namespace irslab
