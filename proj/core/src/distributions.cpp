#include "stripsplit/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stripsplit {

namespace {

// Continued fraction of the incomplete beta (modified Lentz). Converges
// quickly for x below the symmetry switch point (a+1)/(a+b+2); the caller
// guarantees that.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr int max_iterations = 400;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (a <= 0.0 || b <= 0.0) {
    throw std::domain_error("incomplete beta needs positive parameters");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // front = x^a (1-x)^b / B(a,b), computed in logs; symmetric in the
  // (a,b,x) <-> (b,a,1-x) swap, so both branches share it.
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_upper_tail(double x, double d1, double d2) {
  if (d1 <= 0.0 || d2 <= 0.0) {
    throw std::domain_error("f_upper_tail needs positive df");
  }
  if (x < 0.0) {
    throw std::domain_error("f_upper_tail needs x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double z = d2 / (d2 + d1 * x);
  return regularized_incomplete_beta(z, d2 / 2.0, d1 / 2.0);
}

double f_lower_tail(double x, double d1, double d2) {
  if (d1 <= 0.0 || d2 <= 0.0) {
    throw std::domain_error("f_lower_tail needs positive df");
  }
  if (x < 0.0) {
    throw std::domain_error("f_lower_tail needs x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double w = d1 * x / (d2 + d1 * x);
  return regularized_incomplete_beta(w, d1 / 2.0, d2 / 2.0);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  // splitmix64 walk over a state derived from (seed, stream id).
  std::uint64_t sm = seed + kGolden * mix64(stream + kGolden);
  for (auto& word : state_) {
    sm += kGolden;
    word = mix64(sm);
  }
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
    state_[0] = 1;  // the all-zero xoshiro state is a fixed point
  }
}

RandomStream RandomStream::split(std::uint64_t child) const {
  return RandomStream(seed_, mix64(stream_ ^ (kGolden * (child + 1))));
}

std::uint64_t RandomStream::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 is kept strictly positive so the log is finite.
  const double u1 =
      (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * 3.14159265358979323846 * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

double sample_normal(double mean, double sd, RandomStream& stream) {
  if (sd < 0.0) {
    throw std::invalid_argument("sample_normal needs sd >= 0");
  }
  if (sd == 0.0) return mean;
  return mean + sd * stream.next_normal();
}

}  // namespace stripsplit
