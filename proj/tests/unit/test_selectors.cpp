#include <gtest/gtest.h>

#include <cmath>

#include "lambdap/selectors.hpp"
#include "oracles.hpp"

using namespace lambdap;

TEST(Selectors, DeltaAndN0) {
  EXPECT_NEAR(selector_delta(256, 4.0), 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(selector_n0(256, 4.0), 16.0, 1e-12);
  EXPECT_NEAR(selector_delta(64, 3.0), std::pow(64.0, -1.0 / 3.0), 1e-15);
}

TEST(Selectors, SampleMatchesBitAddressing) {
  const auto s = sample_selectors(200, 0.3, 77);
  std::size_t c = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    EXPECT_EQ(s.bits[i], selector_bit(77, i, 0, 0.3));
    c += s.bits[i];
  }
  EXPECT_EQ(s.size, c);
  EXPECT_EQ(s.active().size(), c);
  EXPECT_EQ(selector_count(77, 200, 0, 0.3), c);
  EXPECT_THROW(sample_selectors(5, 1.5, 1), std::invalid_argument);
  EXPECT_EQ(SelectorSample::all_on(6).active().size(), 6u);
}

TEST(Selectors, BinomialMomentMatchesDirectSum) {
  for (double q : {1.0, 2.0, 3.0, 7.5, 32.0})
    EXPECT_NEAR(binomial_moment(16, 0.25, q) / oracle::binomial_moment(16, 0.25, q), 1.0, 1e-12) << q;
  EXPECT_NEAR(binomial_moment(10, 0.5, 1.0), 5.0, 1e-12);
  EXPECT_NEAR(binomial_moment(10, 0.5, 2.0), 27.5, 1e-12);  // var + mean^2
}

TEST(Selectors, MomentCheckWithinThreeSigma) {
  for (double q : {2.0, 3.0, 32.0}) {
    const auto m = selector_moment_check(16, 0.25, q, 20000, 5);
    const double exact = oracle::binomial_moment(16, 0.25, q);
    const double sigma = std::sqrt((oracle::binomial_moment(16, 0.25, 2 * q) - exact * exact) / 20000.0);
    EXPECT_LE(std::abs(m.moment_mean - exact), 3.0 * sigma) << q;
  }
}

TEST(Selectors, MomentBoundCalibrationIsFinite) {
  const double c = selector_moment_calibration();
  EXPECT_TRUE(std::isfinite(c));
  EXPECT_GT(c, 0.0);
}

TEST(Selectors, LargeDeviationTails) {
  const auto r = large_deviation_check(40, 0.1, 20000, 3);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.upper_bound, std::exp(-20.0), 1e-20);
  EXPECT_NEAR(r.lower_bound, std::exp(-2.0), 1e-15);
}

TEST(Tripartite, LabelFrequencies) {
  const std::size_t n = 30000;
  const auto t = sample_tripartite(n, 12);
  const auto sz = t.sizes();
  EXPECT_EQ(sz[0] + sz[1] + sz[2], n);
  const double sd = std::sqrt(n * (1.0 / 3.0) * (2.0 / 3.0));
  for (auto s : sz) EXPECT_LE(std::abs(static_cast<double>(s) - n / 3.0), 4.0 * sd);
  EXPECT_EQ(t.part(2).size(), sz[1]);
}

TEST(SupExchange, HoldsOnRandomFamily) {
  const auto r = sup_exchange_check(20, 4000, 8);
  EXPECT_TRUE(r.passed()) << r.lhs << " vs " << r.rhs;
  EXPECT_NEAR(r.q, std::log(20.0), 1e-15);
}
