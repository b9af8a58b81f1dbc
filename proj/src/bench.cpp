#include "irslab/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace irslab {

using nlohmann::json;

SchemeId parse_scheme(const std::string& name) {
  if (name == "proposed") return SchemeId::kProposed;
  if (name == "ao") return SchemeId::kAo;
  if (name == "without_irs") return SchemeId::kWithoutIrs;
  if (name == "random_choice") return SchemeId::kRandomChoice;
  if (name == "fixed_irs") return SchemeId::kFixedIrs;
  if (name == "opportunistic") return SchemeId::kOpportunistic;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::kProposed: return "proposed";
    case SchemeId::kAo: return "ao";
    case SchemeId::kWithoutIrs: return "without_irs";
    case SchemeId::kRandomChoice: return "random_choice";
    case SchemeId::kFixedIrs: return "fixed_irs";
    case SchemeId::kOpportunistic: return "opportunistic";
  }
  return "?";
}

const std::vector<SchemeId>& all_schemes() {
  static const std::vector<SchemeId> all = {
      SchemeId::kProposed,     SchemeId::kAo,       SchemeId::kWithoutIrs,
      SchemeId::kRandomChoice, SchemeId::kFixedIrs, SchemeId::kOpportunistic};
  return all;
}

namespace {

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw std::invalid_argument("config: unknown key '" + item.key() +
                                  "' in " + where);
    }
  }
}

}  // namespace

void overlay_train_config(TrainConfig& cfg, const json& j) {
  require_keys(j, "agent",
               {"episodes", "steps_per_episode", "updates_per_step",
                "batch_size", "buffer_capacity", "lr_d3qn", "lr_critic",
                "lr_policy", "lr_alpha", "discount", "tau_soft",
                "d3qn_sync_period", "eps_start", "eps_end", "eps_anneal_steps",
                "d3qn_hidden", "sac_hidden", "init_alpha"});
  cfg.episodes = j.value("episodes", cfg.episodes);
  cfg.steps_per_episode = j.value("steps_per_episode", cfg.steps_per_episode);
  cfg.updates_per_step = j.value("updates_per_step", cfg.updates_per_step);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.buffer_capacity = j.value("buffer_capacity", cfg.buffer_capacity);
  cfg.lr_d3qn = j.value("lr_d3qn", cfg.lr_d3qn);
  cfg.lr_critic = j.value("lr_critic", cfg.lr_critic);
  cfg.lr_policy = j.value("lr_policy", cfg.lr_policy);
  cfg.lr_alpha = j.value("lr_alpha", cfg.lr_alpha);
  cfg.discount = j.value("discount", cfg.discount);
  cfg.tau_soft = j.value("tau_soft", cfg.tau_soft);
  cfg.d3qn_sync_period = j.value("d3qn_sync_period", cfg.d3qn_sync_period);
  cfg.eps_start = j.value("eps_start", cfg.eps_start);
  cfg.eps_end = j.value("eps_end", cfg.eps_end);
  cfg.eps_anneal_steps = j.value("eps_anneal_steps", cfg.eps_anneal_steps);
  if (j.contains("d3qn_hidden")) {
    cfg.d3qn_hidden = j.at("d3qn_hidden").get<std::vector<int>>();
  }
  if (j.contains("sac_hidden")) {
    cfg.sac_hidden = j.at("sac_hidden").get<std::vector<int>>();
  }
  cfg.init_alpha = j.value("init_alpha", cfg.init_alpha);
}

void overlay_ao_config(AoConfig& cfg, const json& j) {
  require_keys(j, "ao",
               {"outer_iters", "outer_tol", "dual_iters", "dual_step0",
                "sca_iters", "sca_tol", "sca_inner_iters", "sca_inner_tol",
                "tau_grid", "run_full_outer"});
  cfg.outer_iters = j.value("outer_iters", cfg.outer_iters);
  cfg.outer_tol = j.value("outer_tol", cfg.outer_tol);
  cfg.dual_iters = j.value("dual_iters", cfg.dual_iters);
  cfg.dual_step0 = j.value("dual_step0", cfg.dual_step0);
  cfg.sca_iters = j.value("sca_iters", cfg.sca_iters);
  cfg.sca_tol = j.value("sca_tol", cfg.sca_tol);
  cfg.sca_inner_iters = j.value("sca_inner_iters", cfg.sca_inner_iters);
  cfg.sca_inner_tol = j.value("sca_inner_tol", cfg.sca_inner_tol);
  cfg.tau_grid = j.value("tau_grid", cfg.tau_grid);
  cfg.run_full_outer = j.value("run_full_outer", cfg.run_full_outer);
}

void overlay_reward_config(RewardConfig& cfg, const json& j) {
  require_keys(j, "reward", {"nu_s", "nu_d", "discount"});
  cfg.nu_s = j.value("nu_s", cfg.nu_s);
  cfg.nu_d = j.value("nu_d", cfg.nu_d);
  cfg.discount = j.value("discount", cfg.discount);
}

void RunConfig::validate() const {
  if (schemes.empty()) throw std::invalid_argument("config: no schemes listed");
  if (seeds.empty()) throw std::invalid_argument("config: no seeds listed");
  if (episodes < 0 || steps < 1) throw std::invalid_argument("config: bad horizon");
  if (final_window < 1) throw std::invalid_argument("config: bad final_window");
}

json RunConfig::to_json() const {
  json j;
  j["scenario"] = scenario;
  json sch = json::array();
  for (SchemeId id : schemes) sch.push_back(scheme_name(id));
  j["schemes"] = sch;
  j["seeds"] = seeds;
  j["episodes"] = episodes;
  j["steps"] = steps;
  j["final_window"] = final_window;
  j["out_dir"] = out_dir;
  j["measure_time"] = measure_time;
  j["agent"] = {{"episodes", agent.episodes},
                {"steps_per_episode", agent.steps_per_episode},
                {"updates_per_step", agent.updates_per_step},
                {"batch_size", agent.batch_size},
                {"buffer_capacity", agent.buffer_capacity},
                {"lr_d3qn", agent.lr_d3qn},
                {"lr_critic", agent.lr_critic},
                {"lr_policy", agent.lr_policy},
                {"lr_alpha", agent.lr_alpha},
                {"discount", agent.discount},
                {"tau_soft", agent.tau_soft},
                {"d3qn_sync_period", agent.d3qn_sync_period},
                {"eps_start", agent.eps_start},
                {"eps_end", agent.eps_end},
                {"eps_anneal_steps", agent.eps_anneal_steps},
                {"d3qn_hidden", agent.d3qn_hidden},
                {"sac_hidden", agent.sac_hidden},
                {"init_alpha", agent.init_alpha}};
  j["ao"] = {{"outer_iters", ao.outer_iters},
             {"outer_tol", ao.outer_tol},
             {"dual_iters", ao.dual_iters},
             {"dual_step0", ao.dual_step0},
             {"sca_iters", ao.sca_iters},
             {"sca_tol", ao.sca_tol},
             {"sca_inner_iters", ao.sca_inner_iters},
             {"sca_inner_tol", ao.sca_inner_tol},
             {"tau_grid", ao.tau_grid},
             {"run_full_outer", ao.run_full_outer}};
  j["reward"] = {{"nu_s", reward.nu_s},
                 {"nu_d", reward.nu_d},
                 {"discount", reward.discount}};
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  require_keys(j, "root",
               {"scenario", "schemes", "seeds", "episodes", "steps",
                "final_window", "out_dir", "measure_time", "agent", "ao",
                "reward"});
  RunConfig cfg;
  cfg.scenario = j.value("scenario", cfg.scenario);
  if (j.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& name : j.at("schemes")) {
      cfg.schemes.push_back(parse_scheme(name.get<std::string>()));
    }
  }
  if (j.contains("seeds")) {
    cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  }
  cfg.episodes = j.value("episodes", cfg.episodes);
  cfg.steps = j.value("steps", cfg.steps);
  cfg.final_window = j.value("final_window", cfg.final_window);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.measure_time = j.value("measure_time", cfg.measure_time);
  if (j.contains("agent")) overlay_train_config(cfg.agent, j.at("agent"));
  if (j.contains("ao")) overlay_ao_config(cfg.ao, j.at("ao"));
  if (j.contains("reward")) overlay_reward_config(cfg.reward, j.at("reward"));
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + path + ": " + e.what());
  }
  return from_json(j);
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string csv_header(const Scenario& s) {
  std::string h =
      "schema_version,run_id,scheme,seed,episode,step,reward,secrecy_rate,tau";
  for (int k = 0; k < s.num_su; ++k) h += ",su_rate_" + std::to_string(k + 1);
  for (int d = 0; d < s.num_pu; ++d) h += ",pu_rate_" + std::to_string(d + 1);
  for (int k = 0; k < s.num_su; ++k) {
    h += ",eve_max_rate_" + std::to_string(k + 1);
  }
  h += ",c1_slack_min,c2_slack,c3_slack,decision_ms";
  return h;
}

std::string csv_row(const MetricsRow& r) {
  std::string line = "1," + r.run_id + "," + r.scheme + "," +
                     std::to_string(r.seed) + "," + std::to_string(r.episode) +
                     "," + std::to_string(r.step) + "," + fmt(r.reward) + "," +
                     fmt(r.secrecy) + "," + fmt(r.tau);
  for (double v : r.su_rates) line += "," + fmt(v);
  for (double v : r.pu_rates) line += "," + fmt(v);
  for (double v : r.eve_max) line += "," + fmt(v);
  line += "," + fmt(r.c1_min) + "," + fmt(r.c2) + "," + fmt(r.c3) + "," +
          fmt(r.decision_ms);
  return line;
}

void emit_csv(const std::vector<MetricsRow>& rows, const Scenario& s,
              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot write " + path);
  out << csv_header(s) << "\n";
  for (const auto& r : rows) out << csv_row(r) << "\n";
}

namespace {

MetricsRow make_row(const Scenario& s, SchemeId id, std::uint64_t seed,
                    const StepRecord& rec) {
  MetricsRow row;
  row.scheme = scheme_name(id);
  row.run_id = row.scheme + ":" + std::to_string(seed);
  row.seed = seed;
  row.episode = rec.episode;
  row.step = rec.step;
  row.reward = rec.reward;
  row.secrecy = rec.info->rates.secrecy;
  row.tau = rec.action->tau;
  row.su_rates = rec.info->rates.su;
  row.pu_rates = rec.info->pu;
  row.eve_max = rec.info->rates.eve_max;
  row.c1_min = rec.info->constraints.c1.empty()
                   ? 0.0
                   : *std::min_element(rec.info->constraints.c1.begin(),
                                       rec.info->constraints.c1.end());
  row.c2 = rec.info->constraints.c2;
  row.c3 = rec.info->constraints.c3;
  row.decision_ms = rec.decision_seconds * 1e3;
  (void)s;
  return row;
}

std::vector<MetricsRow> run_ao_scheme(const Scenario& s, const RunConfig& cfg,
                                      std::uint64_t seed) {
  std::vector<MetricsRow> rows;
  Environment env(s, cfg.reward, SeededRng(seed).fork(1).seed());
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    env.reset();
    for (int st = 0; st < cfg.steps; ++st) {
      const auto t0 = std::chrono::steady_clock::now();
      const AoResult sol = ao_solve(s, env.channels(), cfg.ao);
      const double secs =
          cfg.measure_time
              ? std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count()
              : 0.0;
      Environment::Step step = env.step(sol.action);
      StepRecord rec;
      rec.episode = ep;
      rec.step = st;
      rec.reward = step.reward;
      rec.decision_seconds = secs;
      rec.info = &step.info;
      rec.action = &sol.action;
      rows.push_back(make_row(s, SchemeId::kAo, seed, rec));
    }
  }
  return rows;
}

}  // namespace

std::vector<MetricsRow> run_scheme(SchemeId id, const Scenario& s,
                                   const RunConfig& cfg, std::uint64_t seed) {
  s.validate();
  if (id == SchemeId::kAo) return run_ao_scheme(s, cfg, seed);

  SchemeVariant variant;
  RateMode mode = RateMode::kSharing;
  switch (id) {
    case SchemeId::kProposed:
      break;
    case SchemeId::kRandomChoice:
      variant.random_option = true;
      break;
    case SchemeId::kFixedIrs:
      variant.theta = ThetaOverride::kIdentity;
      break;
    case SchemeId::kWithoutIrs:
      variant.theta = ThetaOverride::kOff;
      break;
    case SchemeId::kOpportunistic:
      mode = RateMode::kOpportunistic;
      break;
    case SchemeId::kAo:
      break;
  }

  TrainConfig agent_cfg = cfg.agent;
  agent_cfg.episodes = cfg.episodes;
  agent_cfg.steps_per_episode = cfg.steps;

  std::vector<MetricsRow> rows;
  train_agent(s, agent_cfg, cfg.reward, seed, variant, mode,
              [&](const StepRecord& rec) {
                rows.push_back(make_row(s, id, seed, rec));
              },
              cfg.measure_time);
  return rows;
}

namespace {

int worker_count() {
  if (const char* env = std::getenv("IRSLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

CompareResult compare_schemes(const RunConfig& cfg) {
  cfg.validate();
  const Scenario s = Scenario::preset(cfg.scenario);

  struct Job {
    SchemeId scheme;
    std::uint64_t seed;
    std::vector<MetricsRow> rows;
  };
  std::vector<Job> jobs;
  for (SchemeId id : cfg.schemes) {
    for (std::uint64_t seed : cfg.seeds) {
      jobs.push_back(Job{id, seed, {}});
    }
  }

  const int workers = std::min<int>(worker_count(), static_cast<int>(jobs.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) break;
      jobs[i].rows = run_scheme(jobs[i].scheme, s, cfg, jobs[i].seed);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  CompareResult out;
  for (auto& job : jobs) {
    out.rows.insert(out.rows.end(), job.rows.begin(), job.rows.end());
  }

  for (SchemeId id : cfg.schemes) {
    SchemeSummary sum;
    sum.scheme = id;
    for (std::uint64_t seed : cfg.seeds) {
      const int first_ep = std::max(0, cfg.episodes - cfg.final_window);
      double acc = 0.0;
      int n = 0;
      for (const auto& job : jobs) {
        if (job.scheme != id || job.seed != seed) continue;
        for (const auto& row : job.rows) {
          if (row.episode >= first_ep) {
            acc += row.secrecy;
            ++n;
          }
        }
      }
      sum.per_seed.push_back(n > 0 ? acc / n : 0.0);
    }
    double mean = 0.0;
    for (double v : sum.per_seed) mean += v;
    mean /= sum.per_seed.size();
    double var = 0.0;
    for (double v : sum.per_seed) var += (v - mean) * (v - mean);
    sum.mean_secrecy = mean;
    sum.stddev = sum.per_seed.size() > 1
                     ? std::sqrt(var / (sum.per_seed.size() - 1))
                     : 0.0;
    out.table.push_back(sum);
  }
  std::stable_sort(out.table.begin(), out.table.end(),
                   [](const SchemeSummary& a, const SchemeSummary& b) {
                     return a.mean_secrecy > b.mean_secrecy;
                   });
  return out;
}

std::string machine_fingerprint() {
  std::string cpu = "unknown-cpu";
  std::ifstream info("/proc/cpuinfo");
  std::string line;
  while (std::getline(info, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto pos = line.find(':');
      if (pos != std::string::npos) cpu = line.substr(pos + 2);
      break;
    }
  }
  return cpu + " x" + std::to_string(std::thread::hardware_concurrency());
}

namespace {

TimingStats stats_from(std::vector<double>& ms) {
  TimingStats st;
  st.samples = static_cast<int>(ms.size());
  if (ms.empty()) return st;
  std::sort(ms.begin(), ms.end());
  st.median_ms = ms[ms.size() / 2];
  st.p95_ms = ms[static_cast<std::size_t>(
      std::min<double>(ms.size() - 1.0, std::ceil(0.95 * ms.size()) - 1.0))];
  return st;
}

}  // namespace

TimingReport time_decisions(const RunConfig& cfg, const std::vector<int>& caps,
                            int inference_samples, int ao_samples) {
  const Scenario s = Scenario::preset(cfg.scenario);
  TimingReport rep;
  rep.machine = machine_fingerprint();

  // Short training pass: decision latency does not depend on how long the
  // policy trained, only on the network shapes.
  TrainConfig tc = cfg.agent;
  tc.episodes = std::min(cfg.episodes, 5);
  tc.steps_per_episode = std::min(cfg.steps, 5);
  H2dsAgent agent = train_agent(s, tc, cfg.reward, cfg.seeds.front());

  Environment env(s, cfg.reward, SeededRng(cfg.seeds.front()).fork(9).seed());
  Vec state = env.reset();
  std::vector<double> ms;
  for (int i = 0; i < inference_samples; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto [option, x] = agent.greedy_decision(state);
    Action act = agent.decode(option, x);
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double>(t1 - t0).count() * 1e3);
    state = env.step(act).state;
  }
  rep.inference = stats_from(ms);

  for (int cap : caps) {
    AoConfig ac = cfg.ao;
    ac.outer_iters = cap;
    ac.run_full_outer = true;  // timing isolates per-iteration cost
    std::vector<double> ams;
    Environment aoenv(s, cfg.reward, SeededRng(cfg.seeds.front()).fork(10).seed());
    aoenv.reset();
    for (int i = 0; i < ao_samples; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      const AoResult sol = ao_solve(s, aoenv.channels(), ac);
      const auto t1 = std::chrono::steady_clock::now();
      ams.push_back(std::chrono::duration<double>(t1 - t0).count() * 1e3);
      aoenv.step(sol.action);
    }
    rep.ao.emplace_back(cap, stats_from(ams));
  }
  return rep;
}

}  // namespace irslab
