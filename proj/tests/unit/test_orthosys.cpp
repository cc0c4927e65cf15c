#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lambdap/orthosys.hpp"
#include "oracles.hpp"

using namespace lambdap;

TEST(Walsh, MatchesRademacherProducts) {
  const auto sys = build_system(SystemKind::walsh, 13);
  const double G = static_cast<double>(sys.grid_size());
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t k = 0; k < sys.grid_size(); ++k)
      ASSERT_EQ(sys.value(i, k), oracle::walsh(i + 1, (static_cast<double>(k) + 0.5) / G)) << i << "," << k;
}

TEST(Walsh, GramIsExactIdentity) {
  const auto sys = build_system(SystemKind::walsh, 64);
  const auto G = gram_matrix(sys);
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = 0; j < 64; ++j) ASSERT_EQ(G[i * 64 + j], i == j ? 1.0 : 0.0);
  EXPECT_EQ(orthogonality_residual(sys), 0.0);
}

TEST(Trig, ValuesAndOrthogonality) {
  const auto sys = build_system(SystemKind::trig, 9);
  const double G = static_cast<double>(sys.grid_size());
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t k = 0; k < sys.grid_size(); k += 7)
      EXPECT_NEAR(sys.value(i, k), oracle::trig(i, static_cast<double>(k) / G), 1e-12);
  EXPECT_LT(orthogonality_residual(sys), 1e-12);
  for (double nrm : sys.normalization()) EXPECT_NEAR(nrm, std::sqrt(0.5), 1e-12);
}

TEST(Trig, UnderResolvedGridBreaksOrthogonality) {
  // On n nodes only the Nyquist pair aliases: sin vanishes, cos doubles.
  const auto bad = trig_system_on_grid(8, 8);
  const auto G = gram_matrix(bad);
  EXPECT_NEAR(G[6 * 8 + 6], 1.0, 1e-12);
  EXPECT_NEAR(G[7 * 8 + 7], 0.0, 1e-12);
  EXPECT_THROW(build_system(SystemKind::trig, 8, 1), std::invalid_argument);
}

TEST(Parseval, WalshRandomVectors) {
  const auto sys = build_system(SystemKind::walsh, 32);
  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd;
  for (int r = 0; r < 100; ++r) {
    std::vector<double> a(32);
    double s = 0.0;
    for (double& x : a) s += (x = nd(gen)) * x;
    const auto f = synthesize(sys, a);
    EXPECT_NEAR(lp_norm(f, 2.0), std::sqrt(s), 1e-12 * std::sqrt(s));
    const auto back = analyze(sys, f.values);
    for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(back[i], a[i], 1e-12);
  }
}

TEST(Norms, TrigL4MatchesQuadrupleSum) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  for (std::size_t n : {1u, 4u, 7u, 12u}) {
    const auto sys = build_system(SystemKind::trig, n);
    std::vector<double> a(n);
    for (double& x : a) x = nd(gen);
    EXPECT_NEAR(lp_norm(synthesize(sys, a), 4.0), oracle::trig_l4_quadruple(a), 1e-10) << n;
  }
}

TEST(Norms, SpecialExponents) {
  const std::vector<double> w{0.25, 0.25, 0.25, 0.25}, f{1.0, -2.0, 0.5, 0.0};
  EXPECT_DOUBLE_EQ(lp_norm(w, f, INFINITY), 2.0);
  EXPECT_NEAR(lp_norm(w, f, 3.0), std::cbrt((1 + 8 + 0.125) / 4.0), 1e-15);
  EXPECT_NEAR(lp_norm(w, f, 4.0), std::pow((1 + 16 + 0.0625) / 4.0, 0.25), 1e-15);
}

TEST(InnerProduct, MismatchedSystemsThrow) {
  const auto a = synthesize(build_system(SystemKind::walsh, 4), std::vector<double>{1, 0, 0, 0});
  const auto b = synthesize(build_system(SystemKind::trig, 4), std::vector<double>{1, 0, 0, 0});
  EXPECT_THROW(inner_product(a, b), std::invalid_argument);
  EXPECT_NEAR(inner_product(a, a), 1.0, 1e-15);
}

TEST(Dirichlet, L2AndClosedForms) {
  for (std::size_t n : {1u, 4u, 16u, 64u}) EXPECT_NEAR(dirichlet_norm(n, 2.0), std::sqrt(2.0 * n + 1.0), 1e-8);
  EXPECT_NEAR(dirichlet_norm(1, 1.0), oracle::dirichlet1_l1(), 1e-6);
  EXPECT_DOUBLE_EQ(dirichlet_norm(5, INFINITY), 11.0);
}

TEST(System, Validation) {
  EXPECT_THROW(parse_system_kind("haar"), std::invalid_argument);
  EXPECT_EQ(parse_system_kind("trig"), SystemKind::trig);
  EXPECT_THROW(OrthogonalSystem(SystemKind::walsh, 1, {0.5}, {1.0}, {2.0}), std::invalid_argument);
  EXPECT_THROW(OrthogonalSystem(SystemKind::walsh, 1, {0.5}, {0.5}, {1.0}), std::invalid_argument);
  EXPECT_THROW(build_system(SystemKind::walsh, 0), std::invalid_argument);
}
