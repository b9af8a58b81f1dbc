#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "irslab/d3qn.hpp"
#include "irslab/environment.hpp"
#include "irslab/options.hpp"
#include "irslab/replay.hpp"
#include "irslab/sac.hpp"

namespace irslab {

// Layout of the squashed continuous action, all entries in [-1, 1]:
//   per SU: irs_elements amplitude slots then irs_elements phase slots
//           (written onto the SU's paired surface; unpaired surfaces hold
//            the identity configuration),
//   per SU: sbs_antennas (Re, Im) beam pairs, jointly projected onto the
//           energy budget,
//   one tau slot mapped affinely onto [0.01 T, 0.99 T].
class ActionCodec {
 public:
  explicit ActionCodec(const Scenario& s);

  int dim() const { return dim_; }
  Action decode(const Assignment& assign, const Vec& x) const;
  // Exact inverse on feasible actions whose beams sit inside the budget.
  Vec encode(const Action& a) const;

 private:
  Scenario scen_;
  int dim_ = 0;
};

struct TrainConfig {
  int episodes = 300;
  int steps_per_episode = 10;
  int updates_per_step = 1;   // gradient rounds per environment step
  int batch_size = 64;
  std::size_t buffer_capacity = 20000;

  double lr_d3qn = 0.005;
  double lr_critic = 0.004;
  double lr_policy = 0.004;
  double lr_alpha = 0.004;

  double discount = 0.95;
  double tau_soft = 0.005;
  int d3qn_sync_period = 200;  // environment steps between hard target copies

  double eps_start = 1.0;
  double eps_end = 0.05;
  int eps_anneal_steps = 10000;

  std::vector<int> d3qn_hidden{128, 128, 128};
  std::vector<int> sac_hidden{256, 256, 256};
  double init_alpha = 0.1;
};

// How a benchmark scheme bends the proposed pipeline.
enum class ThetaOverride { kNone, kIdentity, kOff };
struct SchemeVariant {
  bool random_option = false;        // ignore the D3QN when acting
  ThetaOverride theta = ThetaOverride::kNone;
};

struct TrainingDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Hierarchical hybrid agent: a dueling double-Q learner picks the
// (assignment, pairing) option, a soft actor-critic conditioned on the
// option emits the continuous coefficients, beams and sensing time.
class H2dsAgent {
 public:
  H2dsAgent(const Scenario& s, const TrainConfig& cfg, std::uint64_t seed);

  const OptionCatalog& catalog() const { return catalog_; }
  const ActionCodec& codec() const { return codec_; }
  int state_dim() const { return state_dim_; }

  int select_option(const Vec& state, double eps, SeededRng& rng) const;
  Vec sample_continuous(const Vec& state, int option, SeededRng& rng) const;
  std::pair<int, Vec> greedy_decision(const Vec& state) const;
  Action decode(int option, const Vec& x) const;

  // One batch of gradient rounds for both learners. Throws
  // TrainingDiverged if any loss goes non-finite.
  void learn(const ReplayBuffer& buffer, SeededRng& rng);
  void sync_targets_if_due(long env_step);

  Vec sac_input(const Vec& state, int option) const;

  void save(const std::string& path) const;
  static H2dsAgent load(const std::string& path, const Scenario& s);

  TrainConfig config;
  DuelingQNet qnet;
  DuelingQNet qnet_target;
  SoftActorCritic sac;

 private:
  Scenario scen_;
  OptionCatalog catalog_;
  ActionCodec codec_;
  AdamState q_adam_;
  int state_dim_ = 0;
};

struct StepRecord {
  int episode = 0;
  int step = 0;
  double reward = 0.0;
  double decision_seconds = 0.0;
  const StepInfo* info = nullptr;
  const Action* action = nullptr;
};
using StepCallback = std::function<void(const StepRecord&)>;

// Full training loop: per episode a fresh reset, per step an option from
// the discrete learner (or uniform for the random-choice scheme), a
// conditioned continuous sample, an environment step, a buffer push and
// `updates_per_step` gradient rounds once the buffer can fill a batch.
H2dsAgent train_agent(const Scenario& s, const TrainConfig& cfg,
                      const RewardConfig& rc, std::uint64_t seed,
                      const SchemeVariant& variant = {},
                      RateMode mode = RateMode::kSharing,
                      const StepCallback& on_step = nullptr,
                      bool measure_decision_time = false);

// Applies a scheme's reflection override in place.
void apply_theta_override(Action& a, ThetaOverride o, const Scenario& s);

}  // namespace irslab
