#include "irslab/sac.hpp"

#include <cmath>
#include <stdexcept>

namespace irslab {

namespace {

constexpr double kLogStdMin = -20.0;
constexpr double kLogStdMax = 2.0;
constexpr double kSquashEps = 1e-6;
constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * ln(2*pi)

}  // namespace

SoftActorCritic::SoftActorCritic(int input_dim, int action_dim,
                                 const std::vector<int>& hidden,
                                 double init_alpha, SeededRng& rng)
    : policy(input_dim, hidden, 2 * action_dim, rng),
      log_alpha(std::log(init_alpha)),
      target_entropy(-static_cast<double>(action_dim)),
      input_dim_(input_dim),
      action_dim_(action_dim) {
  for (int j = 0; j < 2; ++j) {
    critic[j] = Mlp(input_dim + action_dim, hidden, 1, rng);
    target[j] = critic[j];
    critic_adam_[j] = AdamState::like(critic[j]);
  }
  policy_adam_ = AdamState::like(policy);
}

double SoftActorCritic::alpha() const { return std::exp(log_alpha); }

SacSample SoftActorCritic::sample(const Mat& inputs, const Mat& eps) const {
  Mlp::Cache cache;
  return sample(inputs, eps, cache);
}

SacSample SoftActorCritic::sample(const Mat& inputs, const Mat& eps,
                                  Mlp::Cache& cache) const {
  const Mat out = policy.forward(inputs, cache);
  SacSample s;
  s.mean = out.topRows(action_dim_);
  s.log_std = out.bottomRows(action_dim_)
                  .cwiseMax(kLogStdMin)
                  .cwiseMin(kLogStdMax);
  if (eps.rows() != action_dim_ || eps.cols() != inputs.cols()) {
    throw std::invalid_argument("sac: noise shape mismatch");
  }
  const Mat std = s.log_std.array().exp().matrix();
  s.pre = s.mean + std.cwiseProduct(eps);
  s.action = s.pre.array().tanh().matrix();
  s.log_prob = Vec::Zero(inputs.cols());
  for (int i = 0; i < inputs.cols(); ++i) {
    double lp = 0.0;
    for (int d = 0; d < action_dim_; ++d) {
      lp += -kHalfLog2Pi - s.log_std(d, i) - 0.5 * eps(d, i) * eps(d, i);
      const double a = s.action(d, i);
      lp -= std::log(1.0 - a * a + kSquashEps);
    }
    s.log_prob(i) = lp;
  }
  return s;
}

Vec SoftActorCritic::mean_action(const Vec& input) const {
  const Mat out = policy.forward(input);
  return out.col(0).head(action_dim_).array().tanh().matrix();
}

Vec SoftActorCritic::targets(const Vec& rewards, const Mat& next_inputs,
                             const Mat& eps, double gamma) const {
  const SacSample nxt = sample(next_inputs, eps);
  Mat joined(input_dim_ + action_dim_, next_inputs.cols());
  joined.topRows(input_dim_) = next_inputs;
  joined.bottomRows(action_dim_) = nxt.action;
  const Mat q0 = target[0].forward(joined);
  const Mat q1 = target[1].forward(joined);
  const double a = alpha();
  Vec y(rewards.size());
  for (int i = 0; i < rewards.size(); ++i) {
    const double qmin = std::min(q0(0, i), q1(0, i));
    y(i) = rewards(i) + gamma * (qmin - a * nxt.log_prob(i));
  }
  return y;
}

SacLoss SoftActorCritic::critic_loss(int j, const Mat& inputs,
                                     const Mat& actions,
                                     const Vec& targets_y) const {
  const int n = static_cast<int>(inputs.cols());
  Mat joined(input_dim_ + action_dim_, n);
  joined.topRows(input_dim_) = inputs;
  joined.bottomRows(action_dim_) = actions;
  Mlp::Cache cache;
  const Mat q = critic[j].forward(joined, cache);
  SacLoss out;
  Mat dq(1, n);
  for (int i = 0; i < n; ++i) {
    const double resid = q(0, i) - targets_y(i);
    out.loss += resid * resid;
    dq(0, i) = 2.0 * resid / n;
  }
  out.loss /= n;
  out.grads = critic[j].backward(cache, dq);
  return out;
}

SoftActorCritic::PolicyLoss SoftActorCritic::policy_loss(const Mat& inputs,
                                                         const Mat& eps) const {
  const int n = static_cast<int>(inputs.cols());
  Mlp::Cache pol_cache;
  const SacSample smp = sample(inputs, eps, pol_cache);

  Mat joined(input_dim_ + action_dim_, n);
  joined.topRows(input_dim_) = inputs;
  joined.bottomRows(action_dim_) = smp.action;
  Mlp::Cache c_cache[2];
  const Mat q0 = critic[0].forward(joined, c_cache[0]);
  const Mat q1 = critic[1].forward(joined, c_cache[1]);

  const double a = alpha();
  PolicyLoss out;
  out.log_prob = smp.log_prob;
  Mat dq0 = Mat::Zero(1, n), dq1 = Mat::Zero(1, n);
  for (int i = 0; i < n; ++i) {
    const double qmin = std::min(q0(0, i), q1(0, i));
    out.loss += a * smp.log_prob(i) - qmin;
    // d(-qmin)/dq of the active critic.
    if (q0(0, i) <= q1(0, i)) {
      dq0(0, i) = -1.0 / n;
    } else {
      dq1(0, i) = -1.0 / n;
    }
  }
  out.loss /= n;

  // Gradient of -min_j Q_j w.r.t. the sampled action columns.
  const MlpGrads g0 = critic[0].backward(c_cache[0], dq0);
  const MlpGrads g1 = critic[1].backward(c_cache[1], dq1);
  const Mat dq_daction =
      g0.input.bottomRows(action_dim_) + g1.input.bottomRows(action_dim_);

  const Mat std = smp.log_std.array().exp().matrix();
  const Mat& raw_out = pol_cache.pre.back();  // pre-clamp policy output
  Mat up_mean(action_dim_, n);
  Mat up_logstd(action_dim_, n);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < action_dim_; ++d) {
      const double act = smp.action(d, i);
      const double one_minus_sq = 1.0 - act * act;
      // d log pi / d pre through the tanh correction.
      const double dlp_dpre = 2.0 * act * one_minus_sq / (one_minus_sq + kSquashEps);
      const double dact_dpre = one_minus_sq;
      const double dpre_dlogstd = std(d, i) * eps(d, i);
      const double from_q = dq_daction(d, i) * dact_dpre;
      up_mean(d, i) = (a / n) * dlp_dpre + from_q;
      // Gaussian part contributes -1 per dimension in d log pi / d log_std;
      // the clamp stops all log_std gradient outside its range.
      const double raw = raw_out(action_dim_ + d, i);
      const bool pass = raw > kLogStdMin && raw < kLogStdMax;
      up_logstd(d, i) =
          pass ? (a / n) * (-1.0 + dlp_dpre * dpre_dlogstd) +
                     dq_daction(d, i) * dact_dpre * dpre_dlogstd
               : 0.0;
    }
  }
  Mat upstream(2 * action_dim_, n);
  upstream.topRows(action_dim_) = up_mean;
  upstream.bottomRows(action_dim_) = up_logstd;
  out.grads = policy.backward(pol_cache, upstream);
  return out;
}

void SoftActorCritic::apply_policy(const MlpGrads& g, double lr) {
  adam_step(policy, g, policy_adam_, lr);
}

void SoftActorCritic::apply_critic(int j, const MlpGrads& g, double lr) {
  adam_step(critic[j], g, critic_adam_[j], lr);
}

void SoftActorCritic::soft_update(double tau) {
  target[0].blend_from(critic[0], tau);
  target[1].blend_from(critic[1], tau);
}

void SoftActorCritic::update_alpha(const Vec& log_probs, double lr) {
  const double mean_lp = log_probs.mean();
  // J(alpha) = -alpha * (E[log pi] + target_entropy).
  const double dj_dlog_alpha = -alpha() * (mean_lp + target_entropy);
  log_alpha -= lr * dj_dlog_alpha;
}

}  // namespace irslab
