#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "irslab/mlp.hpp"
#include "test_util.hpp"

using namespace irslab;

TEST_CASE("zero parameters map everything to zero") {
  SeededRng rng(1);
  Mlp net(4, {6, 5}, 3, rng);
  for (auto& w : net.w) w.setZero();
  for (auto& b : net.b) b.setZero();
  const Mat x = Mat::Random(4, 7);
  CHECK(net.forward(x).norm() == 0.0);
}

TEST_CASE("forward is deterministic given parameters") {
  SeededRng a(3), b(3);
  Mlp na(5, {8}, 2, a);
  Mlp nb(5, {8}, 2, b);
  const Mat x = Mat::Random(5, 4);
  CHECK((na.forward(x) - nb.forward(x)).norm() == 0.0);
}

TEST_CASE("backward matches central finite differences") {
  SeededRng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Mlp net(4, {6, 5}, 3, rng);
    Mat x(4, 3);
    Mat g(3, 3);
    for (int i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    for (int i = 0; i < g.size(); ++i) g.data()[i] = rng.normal();

    Mlp::Cache cache;
    net.forward(x, cache);
    const MlpGrads grads = net.backward(cache, g);
    const auto flat = testutil::flatten_grads(grads);
    const double err = testutil::max_grad_error(net, flat, [&] {
      return (net.forward(x).array() * g.array()).sum();
    });
    CHECK(err <= 1e-4);
  }
}

TEST_CASE("backward reports the input gradient") {
  SeededRng rng(13);
  Mlp net(3, {5}, 2, rng);
  Mat x(3, 2);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  const Mat g = Mat::Ones(2, 2);

  Mlp::Cache cache;
  net.forward(x, cache);
  const MlpGrads grads = net.backward(cache, g);
  REQUIRE(grads.input.rows() == 3);
  const double step = 1e-6;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      Mat xp = x, xm = x;
      xp(i, j) += step;
      xm(i, j) -= step;
      const double fd =
          ((net.forward(xp) - net.forward(xm)).array() * g.array()).sum() /
          (2.0 * step);
      CHECK(grads.input(i, j) == doctest::Approx(fd).epsilon(1e-4));
    }
  }
}

TEST_CASE("adam reduces a quadratic objective") {
  SeededRng rng(17);
  Mlp net(2, {8}, 1, rng);
  AdamState adam = AdamState::like(net);
  Mat x(2, 16);
  Mat target(1, 16);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  for (int i = 0; i < target.size(); ++i) {
    target.data()[i] = x(0, i) - 0.3 * x(1, i);
  }
  auto loss = [&] {
    return (net.forward(x) - target).array().square().mean();
  };
  const double before = loss();
  for (int it = 0; it < 200; ++it) {
    Mlp::Cache cache;
    const Mat out = net.forward(x, cache);
    const Mat dq = 2.0 * (out - target) / target.size();
    adam_step(net, net.backward(cache, dq), adam, 0.01);
  }
  CHECK(loss() < 0.2 * before);
  CHECK(net.finite());
}

TEST_CASE("dimension mismatches are rejected") {
  SeededRng rng(19);
  Mlp net(4, {3}, 2, rng);
  CHECK_THROWS_AS(net.forward(Mat::Zero(5, 1)), std::invalid_argument);
  CHECK_THROWS_AS(Mlp(0, {3}, 2, rng), std::invalid_argument);
}

TEST_CASE("blend_from interpolates toward the source") {
  SeededRng rng(23);
  Mlp a(3, {4}, 2, rng);
  Mlp b(3, {4}, 2, rng);
  Mlp c = b;
  c.blend_from(a, 1.0);
  CHECK((c.w[0] - a.w[0]).norm() == 0.0);
  Mlp d = b;
  d.blend_from(a, 0.0);
  CHECK((d.w[0] - b.w[0]).norm() == 0.0);
}
