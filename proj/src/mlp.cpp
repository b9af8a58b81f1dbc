#include "irslab/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace irslab {

Mlp::Mlp(int input, const std::vector<int>& hidden, int output, SeededRng& rng) {
  if (input < 1 || output < 1) throw std::invalid_argument("mlp: bad dims");
  std::vector<int> dims;
  dims.push_back(input);
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("mlp: bad hidden width");
    dims.push_back(h);
  }
  dims.push_back(output);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int in = dims[l], out = dims[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Mat wl(out, in);
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < in; ++j) {
        wl(i, j) = (2.0 * rng.uniform() - 1.0) * bound;
      }
    }
    Vec bl(out);
    for (int i = 0; i < out; ++i) bl(i) = (2.0 * rng.uniform() - 1.0) * bound;
    w.push_back(std::move(wl));
    b.push_back(std::move(bl));
  }
}

Mat Mlp::forward(const Mat& x) const {
  Cache cache;
  return forward(x, cache);
}

Mat Mlp::forward(const Mat& x, Cache& cache) const {
  if (x.rows() != input_dim()) throw std::invalid_argument("mlp: input dim mismatch");
  cache.pre.clear();
  cache.act.clear();
  cache.act.push_back(x);
  Mat h = x;
  for (int l = 0; l < layers(); ++l) {
    Mat z = (w[l] * h).colwise() + b[l];
    cache.pre.push_back(z);
    if (l + 1 < layers()) {
      h = z.cwiseMax(0.0);
      cache.act.push_back(h);
    } else {
      h = z;
    }
  }
  return h;
}

MlpGrads Mlp::backward(const Cache& cache, const Mat& upstream) const {
  const int nl = layers();
  if (static_cast<int>(cache.pre.size()) != nl) {
    throw std::invalid_argument("mlp: stale cache");
  }
  MlpGrads g;
  g.w.resize(nl);
  g.b.resize(nl);
  Mat delta = upstream;  // gradient at layer output (post linear)
  for (int l = nl - 1; l >= 0; --l) {
    if (l != nl - 1) {
      // ReLU mask of this layer's pre-activation.
      delta = ((cache.pre[l].array() > 0.0).cast<double>() * delta.array()).matrix();
    }
    g.w[l] = delta * cache.act[l].transpose();
    g.b[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = w[l].transpose() * delta;
    } else {
      g.input = w[0].transpose() * delta;
    }
  }
  return g;
}

bool Mlp::finite() const {
  for (const auto& m : w) {
    if (!m.allFinite()) return false;
  }
  for (const auto& v : b) {
    if (!v.allFinite()) return false;
  }
  return true;
}

void Mlp::blend_from(const Mlp& src, double tau) {
  for (int l = 0; l < layers(); ++l) {
    w[l] = tau * src.w[l] + (1.0 - tau) * w[l];
    b[l] = tau * src.b[l] + (1.0 - tau) * b[l];
  }
}

AdamState AdamState::like(const Mlp& net) {
  AdamState st;
  for (const auto& m : net.w) {
    st.mw.push_back(Mat::Zero(m.rows(), m.cols()));
    st.vw.push_back(Mat::Zero(m.rows(), m.cols()));
  }
  for (const auto& v : net.b) {
    st.mb.push_back(Vec::Zero(v.size()));
    st.vb.push_back(Vec::Zero(v.size()));
  }
  return st;
}

void adam_step(Mlp& net, const MlpGrads& g, AdamState& st, double lr,
               double beta1, double beta2, double eps) {
  st.step += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(st.step));
  for (int l = 0; l < net.layers(); ++l) {
    st.mw[l] = beta1 * st.mw[l] + (1.0 - beta1) * g.w[l];
    st.vw[l] = (beta2 * st.vw[l].array() + (1.0 - beta2) * g.w[l].array().square()).matrix();
    net.w[l].array() -=
        lr * (st.mw[l].array() / bc1) /
        ((st.vw[l].array() / bc2).sqrt() + eps);
    st.mb[l] = beta1 * st.mb[l] + (1.0 - beta1) * g.b[l];
    st.vb[l] = (beta2 * st.vb[l].array() + (1.0 - beta2) * g.b[l].array().square()).matrix();
    net.b[l].array() -=
        lr * (st.mb[l].array() / bc1) /
        ((st.vb[l].array() / bc2).sqrt() + eps);
  }
}

}  // namespace irslab
