#pragma once

#include "irslab/mlp.hpp"

namespace irslab {

// Mean-centered dueling combiner: Q(s,a) = V(s) + A(s,a) - mean_a' A(s,a').
// value is (batch), advantage is (n_options, batch).
Mat dueling_q(const Vec& value, const Mat& advantage);

// Q-network with a shared trunk emitting [V, A_1..A_n]; Q values come out
// of the dueling combiner.
class DuelingQNet {
 public:
  DuelingQNet() = default;
  DuelingQNet(int state_dim, const std::vector<int>& hidden, int n_options,
              SeededRng& rng);

  Mat q_values(const Mat& states) const;                    // (n_options, batch)
  Mat q_values(const Mat& states, Mlp::Cache& cache) const;

  // Chains dQ (n_options, batch) through the combiner into net gradients.
  MlpGrads backward_from_q(const Mlp::Cache& cache, const Mat& dq) const;

  int n_options() const { return n_options_; }

  Mlp net;

 private:
  int n_options_ = 0;
};

// Greedy option under q with ties broken toward the lowest index.
int argmax_option(const Vec& q);

// Double-Q targets: bootstrap value is the target net evaluated at the
// eval net's greedy option in the next state.
Vec d3qn_target(const Mat& next_states, const Vec& rewards,
                const DuelingQNet& eval_net, const DuelingQNet& target_net,
                double gamma);

struct D3qnLoss {
  double loss = 0.0;
  MlpGrads grads;
};

// Mean squared TD error over the batch plus exact parameter gradients.
D3qnLoss d3qn_loss(const Mat& states, const std::vector<int>& options,
                   const Vec& targets, const DuelingQNet& net);

// With probability eps a uniform option, otherwise greedy.
int epsilon_greedy_select(const Vec& state, const DuelingQNet& net, double eps,
                          SeededRng& rng);

}  // namespace irslab
