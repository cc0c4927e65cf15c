#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lambdap/decompose.hpp"

using namespace lambdap;

TEST(Dyadic, NonnegReconstructsExactly) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int r = 0; r < 200; ++r) {
    std::vector<double> c(1 + r % 40);
    for (double& x : c) x = ud(gen);
    std::sort(c.begin(), c.end(), std::greater<>());
    double s = 0.0;
    for (double x : c) s += x;
    for (double& x : c) x /= s;
    const auto d = dyadic_decompose_nonneg(c);
    const auto back = d.reconstruct();
    for (std::size_t i = 0; i < c.size(); ++i) ASSERT_NEAR(back[i], c[i], 1e-12);
    const double g = d.weight_sum();
    EXPECT_GE(g, 1.0 - 1e-12);
    EXPECT_LE(g, 2.0 + 1e-12);
  }
}

TEST(Dyadic, GeometricSequenceExceedsOne) {
  std::vector<double> c;
  for (int i = 1; i <= 8; ++i) c.push_back(std::ldexp(1.0, -i));
  const auto d = dyadic_decompose_nonneg(c);
  // gamma_l = 2^l c at the block heads 0, 1, 3, 7: 1/2 + 1/2 + 1/4 + 1/32
  ASSERT_EQ(d.levels.size(), 4u);
  EXPECT_DOUBLE_EQ(d.weight_sum(), 1.28125);
}

TEST(Dyadic, BlocksAreDyadicAndNormalized) {
  const std::vector<double> c{0.3, 0.2, 0.2, 0.1, 0.1, 0.05, 0.05};
  const auto d = dyadic_decompose_nonneg(c);
  ASSERT_EQ(d.levels.size(), 3u);
  EXPECT_EQ(d.levels[1].block.support(), (IndexSet{1, 2}));
  EXPECT_EQ(d.levels[2].block.support(), (IndexSet{3, 4, 5, 6}));
  EXPECT_DOUBLE_EQ(d.levels[2].weight, 0.4);
  EXPECT_DOUBLE_EQ(d.levels[2].block[3], 0.25);
  EXPECT_THROW(dyadic_decompose_nonneg(std::vector<double>{0.1, 0.2}), std::invalid_argument);
  EXPECT_THROW(dyadic_decompose_nonneg(std::vector<double>{0.6, 0.5}), std::invalid_argument);
}

TEST(Dyadic, UnitReconstructsWithSigns) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> nd;
  for (int r = 0; r < 200; ++r) {
    std::vector<double> a(1 + r % 50);
    double s = 0.0;
    for (double& x : a) s += (x = nd(gen)) * x;
    for (double& x : a) x /= std::sqrt(s);
    const auto d = dyadic_decompose_unit(a);
    const auto back = d.reconstruct();
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(back[i], a[i], 1e-12);
    EXPECT_GE(d.weight_square_sum(), 1.0 - 1e-12);
    EXPECT_LE(d.weight_square_sum(), 2.0 + 1e-12);
    for (const auto& lv : d.levels)
      for (auto i : lv.block.support()) EXPECT_LE(std::abs(lv.block[i]), std::exp2(-lv.l / 2.0) + 1e-12);
  }
}

TEST(Bootstrap, SplitByPrefixMass) {
  const std::vector<double> a{std::sqrt(0.4), std::sqrt(0.3), std::sqrt(0.2), std::sqrt(0.1)};
  const auto s = bootstrap_split(a, std::sqrt(0.75));
  // prefix masses 0, 0.4, 0.7 are < 0.75; 0.9 is not
  EXPECT_EQ(s.m0, 2u);
  EXPECT_EQ(s.I, (IndexSet{0, 1}));
  EXPECT_EQ(s.dropped, 2u);
  EXPECT_EQ(s.J, (IndexSet{3}));
  EXPECT_NEAR(s.mass_I, 0.7, 1e-15);
  EXPECT_NEAR(s.mass_J, 0.1, 1e-15);
}

TEST(Bootstrap, SmallGammaKeepsLeadInJ) {
  // a_1^2 = 0.4 >= gamma^2 = 0.25, so I is empty and index 0 is dropped.
  const std::vector<double> a{std::sqrt(0.4), std::sqrt(0.3), std::sqrt(0.3)};
  const auto s = bootstrap_split(a, 0.5, 3.0);
  EXPECT_EQ(s.m0, 0u);
  EXPECT_TRUE(s.I.empty());
  EXPECT_EQ(s.J, (IndexSet{1, 2}));
  EXPECT_NEAR(s.mass_J, 0.6, 1e-15);
  EXPECT_THROW(bootstrap_split(a, 0.999, 3.0), std::invalid_argument);
  EXPECT_THROW(bootstrap_split(std::vector<double>{0.5, 0.5}, 0.5), std::invalid_argument);
}
