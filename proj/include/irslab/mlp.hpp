#pragma once

#include <vector>

#include "irslab/numerics.hpp"

namespace irslab {

struct MlpGrads {
  std::vector<Mat> w;
  std::vector<Vec> b;
  Mat input;  // gradient w.r.t. the forward input, (in, batch)
};

// Fully connected net with ReLU hidden activations and a linear output
// layer. Batches are column-major: X is (input_dim, batch).
class Mlp {
 public:
  Mlp() = default;
  Mlp(int input, const std::vector<int>& hidden, int output, SeededRng& rng);

  struct Cache {
    std::vector<Mat> pre;  // pre-activations per layer
    std::vector<Mat> act;  // act[0] is the input
  };

  Mat forward(const Mat& x) const;
  Mat forward(const Mat& x, Cache& cache) const;

  // Exact gradients of sum(upstream .* output) w.r.t. parameters and input.
  MlpGrads backward(const Cache& cache, const Mat& upstream) const;

  int input_dim() const { return w.empty() ? 0 : static_cast<int>(w.front().cols()); }
  int output_dim() const { return w.empty() ? 0 : static_cast<int>(w.back().rows()); }
  int layers() const { return static_cast<int>(w.size()); }
  bool finite() const;

  // this <- tau * src + (1 - tau) * this, layerwise.
  void blend_from(const Mlp& src, double tau);

  std::vector<Mat> w;
  std::vector<Vec> b;
};

struct AdamState {
  std::vector<Mat> mw, vw;
  std::vector<Vec> mb, vb;
  long step = 0;
  static AdamState like(const Mlp& net);
};

void adam_step(Mlp& net, const MlpGrads& g, AdamState& st, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

}  // namespace irslab
