#include "irslab/d3qn.hpp"

#include <stdexcept>

namespace irslab {

Mat dueling_q(const Vec& value, const Mat& advantage) {
  if (value.size() != advantage.cols()) {
    throw std::invalid_argument("dueling_q: batch mismatch");
  }
  const Vec mean_adv = advantage.colwise().mean().transpose();
  Mat q = advantage;
  for (int i = 0; i < q.cols(); ++i) {
    q.col(i).array() += value(i) - mean_adv(i);
  }
  return q;
}

DuelingQNet::DuelingQNet(int state_dim, const std::vector<int>& hidden,
                         int n_options, SeededRng& rng)
    : net(state_dim, hidden, 1 + n_options, rng), n_options_(n_options) {
  if (n_options < 1) throw std::invalid_argument("d3qn: need at least one option");
}

Mat DuelingQNet::q_values(const Mat& states) const {
  Mlp::Cache cache;
  return q_values(states, cache);
}

Mat DuelingQNet::q_values(const Mat& states, Mlp::Cache& cache) const {
  const Mat out = net.forward(states, cache);
  return dueling_q(out.row(0).transpose(), out.bottomRows(n_options_));
}

MlpGrads DuelingQNet::backward_from_q(const Mlp::Cache& cache,
                                      const Mat& dq) const {
  // Q(a,i) = V(i) + A(a,i) - mean_a' A(a',i), so
  //   dV(i) = sum_a dQ(a,i),  dA(a,i) = dQ(a,i) - mean_a' dQ(a',i).
  Mat upstream(1 + n_options_, dq.cols());
  upstream.row(0) = dq.colwise().sum();
  const Vec col_mean = dq.colwise().mean().transpose();
  for (int i = 0; i < dq.cols(); ++i) {
    upstream.col(i).tail(n_options_) = (dq.col(i).array() - col_mean(i)).matrix();
  }
  return net.backward(cache, upstream);
}

int argmax_option(const Vec& q) {
  int best = 0;
  for (int a = 1; a < q.size(); ++a) {
    if (q(a) > q(best)) best = a;  // strict: ties keep the lowest index
  }
  return best;
}

Vec d3qn_target(const Mat& next_states, const Vec& rewards,
                const DuelingQNet& eval_net, const DuelingQNet& target_net,
                double gamma) {
  const Mat q_eval = eval_net.q_values(next_states);
  const Mat q_tgt = target_net.q_values(next_states);
  Vec y(rewards.size());
  for (int i = 0; i < rewards.size(); ++i) {
    const int a_star = argmax_option(q_eval.col(i));
    y(i) = rewards(i) + gamma * q_tgt(a_star, i);
  }
  return y;
}

D3qnLoss d3qn_loss(const Mat& states, const std::vector<int>& options,
                   const Vec& targets, const DuelingQNet& net) {
  const int n = static_cast<int>(options.size());
  if (states.cols() != n || targets.size() != n) {
    throw std::invalid_argument("d3qn_loss: batch mismatch");
  }
  Mlp::Cache cache;
  const Mat q = net.q_values(states, cache);
  D3qnLoss out;
  Mat dq = Mat::Zero(q.rows(), q.cols());
  for (int i = 0; i < n; ++i) {
    const double resid = q(options[i], i) - targets(i);
    out.loss += resid * resid;
    dq(options[i], i) = 2.0 * resid / n;
  }
  out.loss /= n;
  out.grads = net.backward_from_q(cache, dq);
  return out;
}

int epsilon_greedy_select(const Vec& state, const DuelingQNet& net, double eps,
                          SeededRng& rng) {
  if (rng.uniform() < eps) {
    return static_cast<int>(rng.uniform_int(net.n_options()));
  }
  return argmax_option(net.q_values(state).col(0));
}

}  // namespace irslab
