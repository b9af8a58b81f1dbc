// Command-line harness: train the hierarchical agent, evaluate stored
// policies, run the alternating-optimization baseline, compare schemes and
// time decisions. Exit codes: 0 success, 2 configuration error, 3 training
// divergence.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "irslab/bench.hpp"

namespace {

using namespace irslab;

struct CommonArgs {
  std::string config_path;
  std::string scenario;
  std::vector<std::string> schemes;
  std::vector<std::uint64_t> seeds;
  int episodes = -1;
  int steps = -1;
  std::string out_dir;
  bool measure_time = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Run-config JSON path");
  cmd->add_option("--scenario", args.scenario,
                  "Scenario preset name (default, tiny) or JSON path");
  cmd->add_option("--scheme", args.schemes,
                  "Scheme list: proposed, ao, without_irs, random_choice, "
                  "fixed_irs, opportunistic")
      ->delimiter(',');
  cmd->add_option("--seed", args.seeds, "Seed list")->delimiter(',');
  cmd->add_option("--episodes", args.episodes, "Episode count");
  cmd->add_option("--steps", args.steps, "Steps per episode");
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_flag("--measure-time", args.measure_time,
                "Record real per-decision latency in the CSV (breaks "
                "byte-for-byte reproducibility)");
}

RunConfig build_config(const CommonArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty()) cfg = RunConfig::load(args.config_path);
  if (!args.scenario.empty()) cfg.scenario = args.scenario;
  if (!args.schemes.empty()) {
    cfg.schemes.clear();
    for (const auto& name : args.schemes) cfg.schemes.push_back(parse_scheme(name));
  }
  if (!args.seeds.empty()) cfg.seeds = args.seeds;
  if (args.episodes >= 0) cfg.episodes = args.episodes;
  if (args.steps >= 1) cfg.steps = args.steps;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.measure_time) cfg.measure_time = true;
  cfg.validate();
  return cfg;
}

// Echo the fully resolved configuration next to the results so a run can be
// reproduced from its output directory alone.
void echo_config(const RunConfig& cfg) {
  if (cfg.out_dir.empty()) return;
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream out(cfg.out_dir + "/run_config.json");
  out << cfg.to_json().dump(2) << "\n";
}

std::string csv_path(const RunConfig& cfg, const std::string& stem) {
  const std::string dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
  std::filesystem::create_directories(dir);
  return dir + "/" + stem + ".csv";
}

int cmd_train(const CommonArgs& args) {
  RunConfig cfg = build_config(args);
  const Scenario s = Scenario::preset(cfg.scenario);
  echo_config(cfg);
  for (SchemeId id : cfg.schemes) {
    for (std::uint64_t seed : cfg.seeds) {
      if (id == SchemeId::kAo) {
        std::cerr << "train: scheme 'ao' has no trainable policy; use the "
                     "'ao' subcommand\n";
        return 2;
      }
      std::vector<MetricsRow> rows;
      SchemeVariant variant;
      RateMode mode = RateMode::kSharing;
      if (id == SchemeId::kRandomChoice) variant.random_option = true;
      if (id == SchemeId::kFixedIrs) variant.theta = ThetaOverride::kIdentity;
      if (id == SchemeId::kWithoutIrs) variant.theta = ThetaOverride::kOff;
      if (id == SchemeId::kOpportunistic) mode = RateMode::kOpportunistic;
      TrainConfig tc = cfg.agent;
      tc.episodes = cfg.episodes;
      tc.steps_per_episode = cfg.steps;
      H2dsAgent agent = train_agent(
          s, tc, cfg.reward, seed, variant, mode,
          [&](const StepRecord& rec) {
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
                             : *std::min_element(
                                   rec.info->constraints.c1.begin(),
                                   rec.info->constraints.c1.end());
            row.c2 = rec.info->constraints.c2;
            row.c3 = rec.info->constraints.c3;
            row.decision_ms = rec.decision_seconds * 1e3;
            rows.push_back(std::move(row));
          },
          cfg.measure_time);
      const std::string stem =
          "metrics_" + scheme_name(id) + "_" + std::to_string(seed);
      emit_csv(rows, s, csv_path(cfg, stem));
      const std::string agent_path =
          (cfg.out_dir.empty() ? "." : cfg.out_dir) + "/agent_" +
          scheme_name(id) + "_" + std::to_string(seed) + ".bin";
      agent.save(agent_path);
      std::cout << "trained " << scheme_name(id) << " seed " << seed << " -> "
                << agent_path << "\n";
    }
  }
  return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& agent_path) {
  RunConfig cfg = build_config(args);
  const Scenario s = Scenario::preset(cfg.scenario);
  H2dsAgent agent = H2dsAgent::load(agent_path, s);
  Environment env(s, cfg.reward, cfg.seeds.front());
  std::vector<MetricsRow> rows;
  Vec state = env.reset();
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    state = env.reset();
    for (int st = 0; st < cfg.steps; ++st) {
      const auto [option, x] = agent.greedy_decision(state);
      const Action act = agent.decode(option, x);
      Environment::Step step = env.step(act);
      MetricsRow row;
      row.scheme = "proposed";
      row.run_id = "eval:" + std::to_string(cfg.seeds.front());
      row.seed = cfg.seeds.front();
      row.episode = ep;
      row.step = st;
      row.reward = step.reward;
      row.secrecy = step.info.rates.secrecy;
      row.tau = act.tau;
      row.su_rates = step.info.rates.su;
      row.pu_rates = step.info.pu;
      row.eve_max = step.info.rates.eve_max;
      row.c2 = step.info.constraints.c2;
      row.c3 = step.info.constraints.c3;
      row.c1_min = step.info.constraints.c1.empty()
                       ? 0.0
                       : *std::min_element(step.info.constraints.c1.begin(),
                                           step.info.constraints.c1.end());
      rows.push_back(std::move(row));
      state = step.state;
    }
  }
  emit_csv(rows, s, csv_path(cfg, "metrics_eval"));
  std::cout << "evaluated " << agent_path << " for " << cfg.episodes
            << " episodes\n";
  return 0;
}

int cmd_ao(const CommonArgs& args) {
  RunConfig cfg = build_config(args);
  const Scenario s = Scenario::preset(cfg.scenario);
  echo_config(cfg);
  const std::vector<MetricsRow> rows =
      run_scheme(SchemeId::kAo, s, cfg, cfg.seeds.front());
  emit_csv(rows, s, csv_path(cfg, "metrics_ao"));

  // Convergence trace of one solve for plotting.
  Environment env(s, cfg.reward, cfg.seeds.front());
  env.reset();
  const AoResult sol = ao_solve(s, env.channels(), cfg.ao);
  std::ofstream trace(csv_path(cfg, "ao_trace"));
  trace << "block,objective\n";
  for (std::size_t i = 0; i < sol.trace.size(); ++i) {
    trace << i << "," << sol.trace[i] << "\n";
  }
  std::cout << "ao objective " << sol.trace.back()
            << (sol.converged ? " (converged)" : " (iteration cap)") << "\n";
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  RunConfig cfg = build_config(args);
  const Scenario s = Scenario::preset(cfg.scenario);
  echo_config(cfg);
  const CompareResult res = compare_schemes(cfg);
  emit_csv(res.rows, s, csv_path(cfg, "metrics_compare"));
  std::cout << "scheme ranking (final-window secrecy rate, mean +- std over "
               "seeds):\n";
  for (const auto& sum : res.table) {
    std::cout << "  " << scheme_name(sum.scheme) << ": " << sum.mean_secrecy
              << " +- " << sum.stddev << "\n";
  }
  return 0;
}

int cmd_time(const CommonArgs& args) {
  RunConfig cfg = build_config(args);
  echo_config(cfg);
  const TimingReport rep = time_decisions(cfg);
  std::cout << "machine: " << rep.machine << "\n";
  std::cout << "policy inference: median " << rep.inference.median_ms
            << " ms, p95 " << rep.inference.p95_ms << " ms over "
            << rep.inference.samples << " decisions\n";
  for (const auto& [cap, st] : rep.ao) {
    std::cout << "ao cap " << cap << ": median " << st.median_ms << " ms, p95 "
              << st.p95_ms << " ms over " << st.samples << " solves\n";
  }
  if (!cfg.out_dir.empty()) {
    std::ofstream out(cfg.out_dir + "/timing.csv");
    out << "machine,mode,cap,median_ms,p95_ms,samples\n";
    out << "\"" << rep.machine << "\",inference,0," << rep.inference.median_ms
        << "," << rep.inference.p95_ms << "," << rep.inference.samples << "\n";
    for (const auto& [cap, st] : rep.ao) {
      out << "\"" << rep.machine << "\",ao," << cap << "," << st.median_ms
          << "," << st.p95_ms << "," << st.samples << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-IRS sensing-enhanced secure spectrum sharing lab"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string agent_path;

  CLI::App* train = app.add_subcommand("train", "Train scheme policies");
  add_common(train, args);
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a stored agent");
  add_common(eval, args);
  eval->add_option("--agent", agent_path, "Trained agent file")->required();
  CLI::App* ao = app.add_subcommand("ao", "Run the AO baseline");
  add_common(ao, args);
  CLI::App* compare = app.add_subcommand("compare", "Compare schemes");
  add_common(compare, args);
  CLI::App* time_cmd = app.add_subcommand("time", "Per-decision latency");
  add_common(time_cmd, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (train->parsed()) return cmd_train(args);
    if (eval->parsed()) return cmd_eval(args, agent_path);
    if (ao->parsed()) return cmd_ao(args);
    if (compare->parsed()) return cmd_compare(args);
    if (time_cmd->parsed()) return cmd_time(args);
  } catch (const TrainingDiverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
