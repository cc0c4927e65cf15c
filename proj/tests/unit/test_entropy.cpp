#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lambdap/entropy.hpp"
#include "lambdap/errors.hpp"
#include "oracles.hpp"

using namespace lambdap;

namespace {

std::vector<Point> random_cloud(std::size_t N, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<Point> pts(N, Point(dim));
  for (auto& p : pts)
    for (double& x : p) x = ud(gen);
  return pts;
}

std::vector<std::vector<double>> dist_matrix(const Norm& nrm, const std::vector<Point>& a,
                                             const std::vector<Point>& b) {
  std::vector<std::vector<double>> d(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      double s = 0.0;
      Point diff(a[i].size());
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = a[i][k] - b[j][k];
      s = nrm(diff);
      d[i][j] = s;
    }
  return d;
}

}  // namespace

TEST(Norm, TriangleInequalityOnLqCloud) {
  const auto sys = build_system(SystemKind::walsh, 6);
  const NormedCloud cloud{random_cloud(30, 6, 4), Norm::lq(sys, 3.0)};
  EXPECT_LE(triangle_excess(cloud, 100, 1), 1e-10);
}

TEST(Norm, UnitBallRadius) {
  const auto trig = build_system(SystemKind::trig, 4);
  EXPECT_NEAR(Norm::lq(trig, 4.0).unit_ball_radius(), std::sqrt(2.0), 1e-12);
  EXPECT_EQ(Norm::euclidean(3).unit_ball_radius(), 1.0);
  EXPECT_THROW(Norm::lq(trig, 1.5).unit_ball_radius(), std::invalid_argument);
}

TEST(ExactEntropy, MatchesBruteForce) {
  const auto sys = build_system(SystemKind::walsh, 4);
  for (std::uint64_t s = 0; s < 8; ++s) {
    const Norm nrm = (s % 2 == 0) ? Norm::euclidean(2) : Norm::lq(sys, 4.0);
    const auto pts = random_cloud(7, nrm.dim(), 100 + s);
    const double t = 0.3 + 0.1 * static_cast<double>(s % 4);
    const auto r = exact_entropy(NormedCloud{pts, nrm}, t);
    const auto dpp = dist_matrix(nrm, pts, pts);
    std::vector<Point> cand = pts;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        Point m(nrm.dim());
        for (std::size_t k = 0; k < m.size(); ++k) m[k] = 0.5 * (pts[i][k] + pts[j][k]);
        cand.push_back(m);
      }
    EXPECT_EQ(*r.D_exact, oracle::max_separated(dpp, t));
    EXPECT_EQ(*r.D_double_exact, oracle::max_separated(dpp, 2 * t));
    EXPECT_EQ(*r.Etilde_exact, oracle::min_cover(dpp, t));
    EXPECT_EQ(*r.Etilde_double_exact, oracle::min_cover(dpp, 2 * t));
    EXPECT_EQ(*r.E_exact, oracle::min_cover(dist_matrix(nrm, cand, pts), t));
    EXPECT_TRUE(r.chain_holds());
  }
}

TEST(ExactEntropy, SizeLimit) {
  EXPECT_THROW(exact_entropy(NormedCloud{random_cloud(16, 2, 1), Norm::euclidean(2)}, 0.5), SizeLimitError);
}

TEST(Greedy, CentersSeparatedAndCovering) {
  const auto pts = random_cloud(60, 3, 9);
  const Norm e = Norm::euclidean(3);
  const auto r = greedy_packing(NormedCloud{pts, e}, 0.5);
  for (std::size_t a = 0; a < r.centers.size(); ++a)
    for (std::size_t b = a + 1; b < r.centers.size(); ++b) EXPECT_GT(e.distance(r.centers[a], r.centers[b]), 0.5);
  for (const auto& p : pts) {
    double best = 1e9;
    for (const auto& c : r.centers) best = std::min(best, e.distance(p, c));
    EXPECT_LE(best, 0.5 * (1 + 1e-12));
  }
}

TEST(Volume, GreedyCountBelowVolumeBound) {
  const auto walsh = build_system(SystemKind::walsh, 3);
  for (std::size_t n : {1u, 2u, 3u})
    for (double t : {0.25, 0.5, 0.75}) {
      const auto v = volume_bound_check(Norm::euclidean(n), t, 1500, n);
      EXPECT_TRUE(v.passed()) << n << " " << t;
      EXPECT_DOUBLE_EQ(v.bound, std::pow(4.0 / t, static_cast<double>(n)));
    }
  EXPECT_TRUE(volume_bound_check(Norm::lq(walsh, 4.0), 0.5, 1500, 3).passed());
}

TEST(Levy, AlphaInvertsGaussianNormMean) {
  for (std::size_t n : {1u, 2u, 8u, 32u}) {
    // E|g| = sqrt(2) Gamma((n+1)/2) / Gamma(n/2)
    const double eg = std::sqrt(2.0) * std::tgamma((n + 1) / 2.0) / std::tgamma(n / 2.0);
    EXPECT_NEAR(levy_alpha(n) * eg, 1.0, 1e-12);
  }
  const auto m = levy_mean(Norm::euclidean(8), 20000, 2);
  EXPECT_LE(std::abs(m.M_X - 1.0), 3.0 * m.stderr_);
}

TEST(EntropyIntegral, StepFunction) {
  const std::vector<double> radii{1.0, 0.5}, counts{1.0, 4.0};
  EXPECT_NEAR(entropy_integral(radii, counts, 2.0), 0.5 * std::sqrt(std::log(4.0)), 1e-15);
  const std::vector<double> r3{1.0, 0.5, 0.25}, c3{2.0, 3.0, 9.0};
  const double want = 0.5 * std::sqrt(std::log(2.0)) + 0.25 * std::sqrt(std::log(3.0)) +
                      0.25 * std::sqrt(std::log(9.0));
  EXPECT_NEAR(entropy_integral(r3, c3, 1.0), want, 1e-15);
  EXPECT_THROW(entropy_integral(r3, std::vector<double>{3.0, 2.0, 9.0}, 1.0), std::invalid_argument);
}

namespace {
CoeffVector flat_unit(std::size_t n, std::size_t m) {
  CoeffVector f(n);
  for (std::size_t i = 0; i < m; ++i) f.set(i, (i % 3 == 0 ? -1.0 : 1.0) / std::sqrt(static_cast<double>(m)));
  return f;
}
}  // namespace

TEST(Reduction, Levels) {
  EXPECT_EQ(reduction_levels(4.0), 4u);
  EXPECT_EQ(reduction_levels(8.0), 6u);
  EXPECT_EQ(reduction_levels(3.0), 3u);
  EXPECT_THROW(reduction_levels(2.0), std::invalid_argument);
}

TEST(Reduction, IdentitiesAndExpectedSupport) {
  const auto sys = build_system(SystemKind::walsh, 64);
  const auto f = flat_unit(64, 32);
  const auto st = support_reduction_stats(sys, f, 4.0, 4.0, 2000, 5);
  EXPECT_LE(st.max_reconstruction_error, 1e-12);
  EXPECT_TRUE(st.multipliers_exact);
  EXPECT_DOUBLE_EQ(st.expected_support, 2.0);
  EXPECT_LE(std::abs(st.mean_support - st.expected_support), 3.0 * st.stderr_support);
}

TEST(Reduction, SupportReduceStopsAtAcceptance) {
  const auto sys = build_system(SystemKind::trig, 16);
  const auto f = flat_unit(16, 16);
  const auto r = support_reduce(sys, f, 3.0, 4.0, 50, 1);
  EXPECT_TRUE(r.accepted);
  EXPECT_LE(r.reconstruction_error, 1e-12);
  const auto again = reduction_draw(sys, f, 3.0, 4.0, 1, static_cast<std::uint64_t>(r.tries - 1));
  EXPECT_EQ(again.residual_support, r.residual_support);
  EXPECT_THROW(support_reduce(sys, CoeffVector(std::vector<double>(16, 0.5)), 3.0, 4.0, 5, 1),
               std::invalid_argument);
}

TEST(Chaining, FiniteRatio) {
  std::vector<Point> cloud = random_cloud(12, 10, 3);
  for (auto& p : cloud)
    for (double& x : p) x = std::abs(x);
  const auto c = chaining_bound_check(cloud, 3, 0.2, 2.0, 500, 4);
  EXPECT_EQ(c.count_kind, "exact_internal_cover");
  EXPECT_GT(c.lhs, 0.0);
  EXPECT_TRUE(std::isfinite(c.ratio));
  cloud.resize(20, cloud.front());
  EXPECT_EQ(chaining_bound_check(cloud, 3, 0.2, 2.0, 50, 4).count_kind, "greedy_packing");
}

TEST(ScalingScan, RowsAndBound) {
  const auto sys = build_system(SystemKind::walsh, 8);
  const std::vector<std::size_t> ms{2, 4};
  const std::vector<double> ts{0.25, 0.5, 1.0};
  const auto rows = entropy_scaling_scan(sys, ms, ts, 4.0, 400, 1);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_NEAR(rows[0].bound, 2.0 * std::log(5.0) * std::log(5.0), 1e-12);
  for (const auto& r : rows) EXPECT_GE(r.count, 1u);
  EXPECT_THROW(entropy_scaling_scan(build_system(SystemKind::walsh, 13), ms, ts, 4.0, 10, 1), SizeLimitError);
}

TEST(ProductEntropy, SumCoverBoundedByProduct) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto X = random_cloud(3, 2, 10 + s), Y = random_cloud(5, 2, 20 + s);
    EXPECT_TRUE(product_entropy_check(X, Y, 0.6).passed());
  }
}
