#include "irslab/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace irslab {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), state_(seed) {}

std::uint64_t SeededRng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double SeededRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  // Box-Muller on (0,1] x [0,1) uniforms.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(t);
  has_cached_ = true;
  return r * std::cos(t);
}

Cplx SeededRng::cnormal() {
  const double re = normal();
  const double im = normal();
  return Cplx(re * M_SQRT1_2, im * M_SQRT1_2);
}

std::uint64_t SeededRng::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be >= 1");
  // Multiply-shift mapping; bias is negligible for the n used here and the
  // result is platform-independent, unlike std::uniform_int_distribution.
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(next_u64()) * n;
  return static_cast<std::uint64_t>(wide >> 64);
}

SeededRng SeededRng::fork(std::uint64_t stream) const {
  return SeededRng(mix64(seed_ ^ (kGolden * (stream + 1))));
}

double q_function(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("q_function: non-finite input");
  return 0.5 * std::erfc(x * M_SQRT1_2);
}

namespace {

// Acklam's rational approximation of the standard normal quantile,
// |relative error| < 1.2e-9; used as the Newton starting point.
double norm_quantile_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

}  // namespace

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("q_inverse: p must lie in (0, 1)");
  }
  // Q(x) = 1 - Phi(x), so Q^{-1}(p) = -Phi^{-1}(p).
  double x = -norm_quantile_estimate(p);
  for (int i = 0; i < 3; ++i) {
    const double pdf = norm_pdf(x);
    if (pdf <= 0.0) break;
    x += (q_function(x) - p) / pdf;
  }
  return x;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double path_gain(double d, double exponent, double pl0_db, double d0) {
  if (!(d0 > 0.0) || d < d0) {
    throw std::invalid_argument("path_gain: requires d >= d0 > 0");
  }
  const double gain_db = -pl0_db - 10.0 * exponent * std::log10(d / d0);
  return db_to_linear(gain_db);
}

CMat rayleigh_channel(SeededRng& rng, int rows, int cols, double gain) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("rayleigh_channel: bad dims");
  if (gain < 0.0) throw std::invalid_argument("rayleigh_channel: negative gain");
  const double amp = std::sqrt(gain);
  CMat h(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      h(i, j) = amp * rng.cnormal();
    }
  }
  return h;
}

CMat rician_channel(SeededRng& rng, int rows, int cols, double gain,
                    double k_factor, const CMat& los) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("rician_channel: bad dims");
  if (gain < 0.0) throw std::invalid_argument("rician_channel: negative gain");
  if (k_factor < 0.0) throw std::invalid_argument("rician_channel: negative K");
  if (los.rows() != rows || los.cols() != cols) {
    throw std::invalid_argument("rician_channel: LOS dimension mismatch");
  }
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (std::abs(std::abs(los(i, j)) - 1.0) > 1e-9) {
        throw std::invalid_argument("rician_channel: LOS entries must be unit modulus");
      }
    }
  }
  const double w_los = std::sqrt(k_factor / (k_factor + 1.0));
  const double w_nlos = std::sqrt(1.0 / (k_factor + 1.0));
  const double amp = std::sqrt(gain);
  CMat h(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      h(i, j) = amp * (w_los * los(i, j) + w_nlos * rng.cnormal());
    }
  }
  return h;
}

}  // namespace irslab
