#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irslab/agent.hpp"
#include "irslab/ao.hpp"

namespace irslab {

enum class SchemeId {
  kProposed,
  kAo,
  kWithoutIrs,
  kRandomChoice,
  kFixedIrs,
  kOpportunistic,
};

SchemeId parse_scheme(const std::string& name);  // throws on unknown names
std::string scheme_name(SchemeId id);
const std::vector<SchemeId>& all_schemes();

struct MetricsRow {
  std::string run_id;
  std::string scheme;
  std::uint64_t seed = 0;
  int episode = 0;
  int step = 0;
  double reward = 0.0;
  double secrecy = 0.0;
  double tau = 0.0;
  std::vector<double> su_rates;
  std::vector<double> pu_rates;
  std::vector<double> eve_max;
  double c1_min = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double decision_ms = 0.0;  // stays 0 unless timing was requested
};

struct RunConfig {
  std::string scenario = "default";  // preset name or file path
  std::vector<SchemeId> schemes{SchemeId::kProposed};
  std::vector<std::uint64_t> seeds{1};
  int episodes = 300;
  int steps = 10;
  int final_window = 20;  // episodes scored by compare_schemes
  std::string out_dir;
  bool measure_time = false;
  TrainConfig agent;
  AoConfig ao;
  RewardConfig reward;

  void validate() const;
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
};

// Fixed, versioned column set; the layout depends only on the scenario
// counts so every scheme shares one header.
std::string csv_header(const Scenario& s);
std::string csv_row(const MetricsRow& row);
void emit_csv(const std::vector<MetricsRow>& rows, const Scenario& s,
              const std::string& path);

// One scheme, one seed, full metrics stream. Training schemes stream their
// training episodes; the AO scheme solves per decision.
std::vector<MetricsRow> run_scheme(SchemeId id, const Scenario& s,
                                   const RunConfig& cfg, std::uint64_t seed);

struct SchemeSummary {
  SchemeId scheme;
  double mean_secrecy = 0.0;   // final-window mean, averaged over seeds
  double stddev = 0.0;         // across seeds
  std::vector<double> per_seed;
};

struct CompareResult {
  std::vector<SchemeSummary> table;    // in ranking order, best first
  std::vector<MetricsRow> rows;        // all runs merged deterministically
};

// Fans (scheme, seed) pairs across workers; worker count comes from
// IRSLAB_THREADS when set. Results are merged in config order regardless
// of the execution schedule.
CompareResult compare_schemes(const RunConfig& cfg);

struct TimingStats {
  double median_ms = 0.0;
  double p95_ms = 0.0;
  int samples = 0;
};

struct TimingReport {
  TimingStats inference;                          // trained-policy decision
  std::vector<std::pair<int, TimingStats>> ao;    // per outer-iteration cap
  std::string machine;
};

TimingReport time_decisions(const RunConfig& cfg,
                            const std::vector<int>& caps = {20, 40, 60},
                            int inference_samples = 200, int ao_samples = 5);

std::string machine_fingerprint();

// Partial JSON overlays for the nested configs (unknown keys rejected).
void overlay_train_config(TrainConfig& cfg, const nlohmann::json& j);
void overlay_ao_config(AoConfig& cfg, const nlohmann::json& j);
void overlay_reward_config(RewardConfig& cfg, const nlohmann::json& j);

}  // namespace irslab
