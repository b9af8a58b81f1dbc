#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace irslab {

using Cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Deterministic 64-bit generator (splitmix64 core). The draw sequence
// depends only on the seed, never on platform or libstdc++ internals, so
// every randomized result in the project is reproducible bit-for-bit.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();                            // [0, 1)
  double normal();                             // N(0, 1)
  Cplx cnormal();                              // CN(0, 1), unit power
  std::uint64_t uniform_int(std::uint64_t n);  // [0, n), n >= 1

  // Independent stream derived from this generator's seed; use one stream
  // per worker when fanning out.
  SeededRng fork(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

// Gaussian tail probability Q(x) = P(N(0,1) > x), via erfc.
double q_function(double x);

// Inverse of q_function on (0, 1). Rational initial guess polished with
// Newton steps; |q_function(q_inverse(p)) - p| <= 1e-10 over [1e-6, 1-1e-6].
double q_inverse(double p);

// Large-scale channel power gain (linear) at distance d:
//   gain_dB = -pl0_db - 10 * exponent * log10(d / d0).
// pl0_db is the loss at the reference distance d0. Requires d >= d0 > 0.
double path_gain(double d, double exponent, double pl0_db, double d0);

double db_to_linear(double db);
double dbm_to_watts(double dbm);

// Entries i.i.d. CN(0, gain), filled row-major. gain = 0 yields zeros.
CMat rayleigh_channel(SeededRng& rng, int rows, int cols, double gain);

// sqrt(gain) * (sqrt(K/(K+1)) * los + sqrt(1/(K+1)) * nlos), nlos unit-power
// Rayleigh. los entries must be unit modulus and match (rows, cols).
CMat rician_channel(SeededRng& rng, int rows, int cols, double gain,
                    double k_factor, const CMat& los);

}  // namespace irslab
