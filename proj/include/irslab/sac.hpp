#pragma once

#include "irslab/mlp.hpp"

namespace irslab {

// Squashed-Gaussian policy sample. Batch variants store one column per
// sample; log_prob already includes the tanh change-of-variables term.
struct SacSample {
  Mat mean;       // (adim, batch)
  Mat log_std;    // clamped to [-20, 2]
  Mat pre;        // mean + std .* eps
  Mat action;     // tanh(pre), in (-1, 1)
  Vec log_prob;   // (batch)
};

struct SacLoss {
  double loss = 0.0;
  MlpGrads grads;
};

// Twin-critic soft actor-critic over a continuous action conditioned on the
// discrete option (the conditioning one-hot is part of the input columns).
class SoftActorCritic {
 public:
  SoftActorCritic() = default;
  SoftActorCritic(int input_dim, int action_dim,
                  const std::vector<int>& hidden, double init_alpha,
                  SeededRng& rng);

  int action_dim() const { return action_dim_; }
  int input_dim() const { return input_dim_; }
  double alpha() const;

  // Reparameterized sample with injected noise (one column per sample).
  SacSample sample(const Mat& inputs, const Mat& eps) const;
  SacSample sample(const Mat& inputs, const Mat& eps, Mlp::Cache& cache) const;

  // Deterministic action (tanh of the mean) for evaluation.
  Vec mean_action(const Vec& input) const;

  // Soft targets: r + gamma * (min_j Q'_j(s', a') - alpha * log pi(a'|s')),
  // a' freshly sampled with the provided noise.
  Vec targets(const Vec& rewards, const Mat& next_inputs, const Mat& eps,
              double gamma) const;

  // Mean squared Bellman error of critic j in {0, 1} plus its gradients.
  SacLoss critic_loss(int j, const Mat& inputs, const Mat& actions,
                      const Vec& targets) const;

  // Reparameterized policy objective: mean(alpha * log pi - min_j Q_j).
  // Also reports the sampled log-probs for the temperature update.
  struct PolicyLoss {
    double loss = 0.0;
    MlpGrads grads;
    Vec log_prob;
  };
  PolicyLoss policy_loss(const Mat& inputs, const Mat& eps) const;

  void apply_policy(const MlpGrads& g, double lr);
  void apply_critic(int j, const MlpGrads& g, double lr);

  // Targets <- tau * eval + (1 - tau) * targets.
  void soft_update(double tau);

  // Gradient step on alpha toward the entropy floor -action_dim.
  void update_alpha(const Vec& log_probs, double lr);

  Mlp policy;    // -> [mu; log_std]
  Mlp critic[2];
  Mlp target[2];
  double log_alpha = 0.0;
  double target_entropy = 0.0;

 private:
  int input_dim_ = 0;
  int action_dim_ = 0;
  AdamState policy_adam_;
  AdamState critic_adam_[2];
};

}  // namespace irslab
