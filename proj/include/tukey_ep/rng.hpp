#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

namespace tukey_ep {

/// Smallest uniform draw handed to a quantile function; draws are clipped
/// into [kUniformEpsilon, 1 - kUniformEpsilon].
inline constexpr double kUniformEpsilon = 0x1p-53;

/// SplitMix64 finalizer, used to decorrelate (seed, stream) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Reproducible random stream keyed by (seed, stream id).
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard, so a given (seed, stream) pair yields the same variates on every
/// conforming platform. Real-valued draws are derived with hand-written
/// transforms rather than <random> distributions, whose algorithms are
/// implementation-defined.
///
/// Not thread-safe; give each concurrent caller its own stream.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), engine_(derive_state(seed, stream_id)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), clipped to [2^-53, 1 - 2^-53].
  double uniform() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1p-53;
    return std::clamp(u, kUniformEpsilon, 1.0 - kUniformEpsilon);
  }

  /// Unbiased integer in [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

 private:
  static std::uint64_t derive_state(std::uint64_t seed, std::uint64_t stream_id) {
    return splitmix64(seed ^ splitmix64(stream_id + 0x632BE59BD9B4E019ULL));
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Anything that yields open-interval uniforms.
template <class S>
concept UniformSource = requires(S& s) {
  { s.uniform() } -> std::convertible_to<double>;
};

/// Uniform plus standard-normal variates; RngStream models this, and tests
/// substitute scripted sources to force specific draws.
template <class S>
concept VariateSource = UniformSource<S> && requires(S& s) {
  { s.normal() } -> std::convertible_to<double>;
};

/// Sources that can also pick uniform indices (needed by tournament selection).
template <class S>
concept IndexSource = requires(S& s, std::uint64_t n) {
  { s.index(n) } -> std::convertible_to<std::uint64_t>;
};

}  // namespace tukey_ep
