#include <gtest/gtest.h>

#include <concepts>
#include <random>
#include <set>

#include "lambdap/rng.hpp"

using namespace lambdap;

TEST(Philox, KnownAnswerVectors) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRng, PureFunctionOfCounter) {
  const CounterRng a(42), b(42);
  EXPECT_EQ(a.uniform2(7, 3), b.uniform2(7, 3));
  EXPECT_NE(a.uniform(7, 3), a.uniform(7, 4));
  EXPECT_NE(a.uniform(7, 3), CounterRng(43).uniform(7, 3));
}

TEST(CounterRng, UniformRangeAndMean) {
  const CounterRng r(1);
  double s = 0.0;
  constexpr int N = 20000;
  for (int i = 0; i < N; ++i) {
    const auto [u, v] = r.uniform2(static_cast<std::uint64_t>(i));
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
    s += u + v;
  }
  EXPECT_NEAR(s / (2 * N), 0.5, 4.0 * std::sqrt(1.0 / 12.0 / (2 * N)));
}

TEST(CounterRng, NormalMoments) {
  const CounterRng r(5);
  double s = 0.0, s2 = 0.0;
  constexpr int N = 20000;
  for (int i = 0; i < N; ++i) {
    const auto [x, y] = r.normal2(static_cast<std::uint64_t>(i));
    s += x + y;
    s2 += x * x + y * y;
  }
  EXPECT_NEAR(s / (2 * N), 0.0, 4.0 / std::sqrt(2.0 * N));
  EXPECT_NEAR(s2 / (2 * N), 1.0, 4.0 * std::sqrt(2.0 / (2 * N)));
}

TEST(Streams, DistinctStreamsGiveDistinctKeys) {
  std::set<std::uint64_t> keys;
  for (std::uint64_t s = 1; s <= 12; ++s)
    for (std::uint64_t i = 0; i < 4; ++i) keys.insert(derive_seed(99, static_cast<Stream>(s), i));
  EXPECT_EQ(keys.size(), 48u);
  EXPECT_NE(derive_seed(1, Stream::omega), derive_seed(2, Stream::omega));
}

TEST(SequenceRng, IsUniformRandomBitGenerator) {
  static_assert(std::uniform_random_bit_generator<SequenceRng>);
  SequenceRng a(3), b(3);
  std::uniform_int_distribution<int> d(0, 9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(d(a), d(b));
  SequenceRng c(3, 1);
  int same = 0;
  SequenceRng a2(3);
  for (int i = 0; i < 50; ++i) same += (a2() == c());
  EXPECT_LT(same, 3);
}
