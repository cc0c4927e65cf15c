#include "lambdap/rng.hpp"

#include <cmath>
#include <numbers>

namespace lambdap {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, Stream s, std::uint64_t index) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ (static_cast<std::uint64_t>(s) * 0xD6E8FEB86659FD93ull));
  return mix64(h ^ mix64(index + 0x632BE59BD9B4E019ull));
}

std::array<std::uint32_t, 4> CounterRng::block(std::uint64_t c0, std::uint64_t c1) const {
  return philox4x32({static_cast<std::uint32_t>(c0), static_cast<std::uint32_t>(c0 >> 32),
                     static_cast<std::uint32_t>(c1), static_cast<std::uint32_t>(c1 >> 32)},
                    {static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)});
}

std::pair<double, double> CounterRng::uniform2(std::uint64_t c0, std::uint64_t c1) const {
  const auto b = block(c0, c1);
  return {to_unit(b[0], b[1]), to_unit(b[2], b[3])};
}

std::pair<double, double> CounterRng::normal2(std::uint64_t c0, std::uint64_t c1) const {
  const auto [u1, u2] = uniform2(c0, c1);
  const double r = std::sqrt(-2.0 * std::log1p(-u1));  // 1 - u1 in (0, 1]
  const double th = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

SequenceRng::result_type SequenceRng::operator()() {
  if (left_ == 0) {
    buf_ = rng_.block(next_++, lane_);
    left_ = 4;
  }
  return buf_[--left_];
}

}  // namespace lambdap
