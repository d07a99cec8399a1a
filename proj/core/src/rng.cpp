#include "augmi/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace augmi {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  counter_ = mix64(seed ^ mix64(stream_id));
  gamma_ = mix64(stream_id ^ rotl(seed, 32)) | 1ull;
}

std::uint64_t RngStream::next_u64() {
  counter_ += gamma_;
  return mix64(counter_);
}

double RngStream::uniform01() {
  // 53-bit mantissa, offset by half an ulp so 0 and 1 are excluded.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double RngStream::normal(double mean, double sd) {
  return mean + sd * normal();
}

bool RngStream::bernoulli(double p) {
  return uniform01() <= p;
}

std::size_t RngStream::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  const std::uint64_t bound = ~0ull - ~0ull % n;
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r >= bound);
  return static_cast<std::size_t>(r % n);
}

std::size_t RngStream::categorical(std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("categorical: empty weights");
  double total = 0.0;
  for (double p : probs) total += p;
  double u = uniform01() * total;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    u -= probs[i];
    if (u <= 0.0) return i;
  }
  return probs.size() - 1;
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost to shape + 1 and scale back.
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform01(), 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::chi_square(double df) {
  return 2.0 * gamma(0.5 * df);
}

RngStream RngStream::fork(std::uint64_t key) const {
  const std::uint64_t child_seed = mix64(seed_ ^ rotl(stream_id_ + 0x632BE59BD9B4E019ull, 17));
  return RngStream(child_seed, mix64(key) ^ stream_id_);
}

}  // namespace augmi
