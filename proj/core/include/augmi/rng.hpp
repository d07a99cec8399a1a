#pragma once

#include <cstdint>
#include <span>

namespace augmi {

// Counter-based splittable random stream.  Each draw hashes a 64-bit counter
// that advances by a stream-specific odd increment, so a stream's sequence is
// a pure function of (seed, stream_id) and is reproducible across runs and
// across any parallel schedule.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  // Strictly inside (0,1).
  double uniform01();
  double uniform(double lo, double hi);

  double normal();  // standard normal (Marsaglia polar)
  double normal(double mean, double sd);

  bool bernoulli(double p);

  // Unbiased draw from {0, ..., n-1}; n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Index drawn with the given (not necessarily normalized) weights.
  std::size_t categorical(std::span<const double> probs);

  // Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  // Chi-square with df > 0 degrees of freedom.
  double chi_square(double df);

  // Child stream derived from (seed, stream_id, key) only; independent of
  // how much of this stream has been consumed.
  RngStream fork(std::uint64_t key) const;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t counter_ = 0;
  std::uint64_t gamma_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace augmi
