#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace lambdap {

// Logical random streams. Draws from different streams never share
// generator state: the stream id is folded into the Philox key.
enum class Stream : std::uint64_t {
  omega = 1,
  omega1 = 2,
  omega2 = 3,
  omega3 = 4,
  tripartite = 5,
  restarts = 6,
  signs = 7,
  gaussian = 8,
  sphere = 9,
  cloud = 10,
  trials = 11,
  coefficients = 12,
};

/// Philox4x32-10 block function (Salmon et al. counter-based generator).
/// Pure: output depends only on (key, counter).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer, used to hash seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for a child stream of `master`.
std::uint64_t derive_seed(std::uint64_t master, Stream s, std::uint64_t index = 0);

/// Stateless view of a single Philox key.  Every draw is addressed by a
/// two-word counter (c0, c1); typically c0 = item index, c1 = trial.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key() const noexcept { return key_; }

  std::array<std::uint32_t, 4> block(std::uint64_t c0, std::uint64_t c1 = 0) const;

  /// Two uniforms in [0,1) with 53-bit resolution.
  std::pair<double, double> uniform2(std::uint64_t c0, std::uint64_t c1 = 0) const;
  double uniform(std::uint64_t c0, std::uint64_t c1 = 0) const {
    return uniform2(c0, c1).first;
  }
  /// Pair of independent standard normals (Box-Muller).
  std::pair<double, double> normal2(std::uint64_t c0, std::uint64_t c1 = 0) const;
  double normal(std::uint64_t c0, std::uint64_t c1 = 0) const {
    return normal2(c0, c1).first;
  }
  bool bernoulli(double p, std::uint64_t c0, std::uint64_t c1 = 0) const {
    return uniform(c0, c1) < p;
  }

 private:
  std::uint64_t key_;
};

/// Sequential cursor over a CounterRng, for code that just wants a stream
/// of draws.  Satisfies std::uniform_random_bit_generator.
class SequenceRng {
 public:
  using result_type = std::uint32_t;

  SequenceRng(std::uint64_t key, std::uint64_t lane = 0) noexcept
      : rng_(key), lane_(lane) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xFFFFFFFFu; }
  result_type operator()();

  double uniform() { return rng_.uniform(next_++, lane_); }
  double normal() { return rng_.normal(next_++, lane_); }
  bool bernoulli(double p) { return uniform() < p; }
  /// Rademacher sign.
  int sign() { return uniform() < 0.5 ? -1 : 1; }

 private:
  CounterRng rng_;
  std::uint64_t lane_;
  std::uint64_t next_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int left_ = 0;
};

}  // namespace lambdap
