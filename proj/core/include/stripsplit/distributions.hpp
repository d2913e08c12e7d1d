#ifndef STRIPSPLIT_DISTRIBUTIONS_HPP
#define STRIPSPLIT_DISTRIBUTIONS_HPP

#include <array>
#include <cstdint>

namespace stripsplit {

// P(F(d1, d2) > x), the upper tail of the F distribution, for real df > 0
// (fractional df are routine here because approximate df are fractional).
// Evaluated as the regularized incomplete beta I_z(d2/2, d1/2) at
// z = d2/(d2 + d1 x) by continued fraction, absolute error <= 1e-10.
// Throws std::domain_error if d1 <= 0, d2 <= 0 or x < 0.
double f_upper_tail(double x, double d1, double d2);

// P(F(d1, d2) <= x), computed through its own beta evaluation at
// I_{d1 x/(d2 + d1 x)}(d1/2, d2/2) rather than as 1 - f_upper_tail, so the
// complementarity of the two is a meaningful numerical check.
double f_lower_tail(double x, double d1, double d2);

// Regularized incomplete beta I_x(a, b), exposed because both F tails are
// thin wrappers over it. Continued-fraction evaluation with the usual
// symmetry switch at x = (a+1)/(a+b+2).
double regularized_incomplete_beta(double x, double a, double b);

// A small counter-seeded generator (xoshiro256++ seeded via splitmix64).
// A stream is identified by (seed, stream id); splitting derives a child id
// deterministically from the parent id, never from consumed state, so any
// worker can reconstruct the stream of any replicate independently of
// scheduling.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  RandomStream split(std::uint64_t child) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  std::uint64_t next_u64();
  double next_uniform();  // [0, 1), 53-bit resolution
  double next_normal();   // standard normal, Box-Muller with cached spare

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// One N(mean, sd^2) draw. sd = 0 returns mean without consuming randomness.
// Throws std::invalid_argument if sd < 0.
double sample_normal(double mean, double sd, RandomStream& stream);

}  // namespace stripsplit

#endif
