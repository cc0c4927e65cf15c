#include <algorithm>
#include <cmath>
#include <functional>

#include "lambdap/decompose.hpp"
#include "lambdap/entropy.hpp"
#include "lambdap/inequalities.hpp"
#include "lambdap/lab/lab.hpp"
#include "lambdap/lambda.hpp"
#include "lambdap/rng.hpp"
#include "lambdap/selectors.hpp"
#include "lab_internal.hpp"

namespace lambdap::lab {

namespace {

struct Suite {
  RunRecord& rec;
  Table& tab;

  void add(const std::string& name, bool ok, const std::string& anchor, double value, double threshold) {
    rec.check(name, ok, anchor, value, threshold);
    tab.add({name, static_cast<long long>(ok), value, threshold, anchor});
  }
};

std::vector<double> gaussian_vector(const CounterRng& rng, std::size_t n, std::uint64_t lane) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal(i, lane);
  return v;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<Point> cloud(const CounterRng& rng, std::size_t N, std::size_t dim, std::uint64_t lane) {
  std::vector<Point> pts(N, Point(dim));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < dim; ++k) pts[i][k] = 2.0 * rng.uniform(i * dim + k, lane) - 1.0;
  return pts;
}

}  // namespace

RunRecord run_verify_all(const ExperimentConfig& cfg) {
  validate(cfg);
  RunRecord rec;
  rec.config = cfg;
  Table tab{"verify_all", {"check", "passed", "value", "threshold", "anchor"}, {}};
  Suite S{rec, tab};
  const CounterRng rng(derive_seed(cfg.seed, Stream::coefficients));

  // ---- orthogonal systems
  const auto walsh64 = build_system(SystemKind::walsh, 64);
  {
    const auto G = gram_matrix(walsh64);
    double dev = 0.0;
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t j = 0; j < 64; ++j) dev = std::max(dev, std::abs(G[i * 64 + j] - (i == j ? 1.0 : 0.0)));
    S.add("walsh_gram_identity", dev == 0.0, "orthonormal_system", dev, 0.0);
  }
  ExperimentConfig trig_cfg = cfg;
  trig_cfg.system = SystemKind::trig;
  const auto trig16 = detail::make_system(trig_cfg, 16);
  {
    // Gram against diag(1/2): catches the Nyquist aliasing of a coarse grid.
    const auto G = gram_matrix(trig16);
    double res = 0.0;
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 16; ++j) res = std::max(res, std::abs(G[i * 16 + j] - (i == j ? 0.5 : 0.0)));
    S.add("trig_orthogonality", res <= 1e-12, "orthonormal_system", res, 1e-12);
    double dev = 0.0;
    for (double v : trig16.normalization()) dev = std::max(dev, std::abs(v - std::sqrt(0.5)));
    S.add("trig_normalization", dev <= 1e-12, "orthonormal_system", dev, 1e-12);
  }
  for (const auto* sys : {&walsh64, &trig16}) {
    double worst = 0.0;
    for (std::uint64_t r = 0; r < 100; ++r) {
      const auto a = gaussian_vector(rng, sys->size(), r);
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i] * sys->normalization()[i] * sys->normalization()[i];
      worst = std::max(worst, std::abs(lp_norm(synthesize(*sys, a), 2.0) - std::sqrt(s)) / std::sqrt(s));
    }
    S.add(std::string(to_string(sys->kind())) + "_parseval", worst <= 1e-12, "parseval", worst, 1e-12);
  }
  {
    double worst = 0.0;
    for (std::size_t n : {1u, 4u, 16u}) worst = std::max(worst, std::abs(dirichlet_norm(n, 2.0) - std::sqrt(2.0 * n + 1.0)));
    S.add("dirichlet_l2", worst <= 1e-8, "dirichlet_maximality", worst, 1e-8);
  }

  // ---- Lambda(p) estimation
  {
    const auto e = estimate_ks(walsh64, {1, 5, 9, 33}, 2.0);
    S.add("ks_p2_equals_one", std::abs(e.value - 1.0) <= 1e-12, "lambda_p_constant", std::abs(e.value - 1.0), 1e-12);
    KsOptions o;
    o.restarts = 4;
    o.seed = cfg.seed;
    const auto m = estimate_ks(walsh64, {0, 2, 3, 7, 12, 30, 41}, 4.0, o);
    S.add("ks_power_iteration_monotone", m.monotonicity_violations == 0, "lambda_p_constant",
          static_cast<double>(m.monotonicity_violations), 0.0);
    S.add("ks_at_least_l2", m.value >= 1.0 - 1e-12, "lambda_p_constant", m.value, 1.0);
  }
  {
    const auto b = interference_lower_bound(8, 4.0, 4.0);
    S.add("interference_set_size", b.set_size == 16, "constructive_interference", static_cast<double>(b.set_size), 16.0);
  }

  // ---- selectors
  {
    const auto m = selector_moment_check(16, 0.25, 3.0, 20000, derive_seed(cfg.seed, Stream::trials, 1));
    const double exact = binomial_moment(16, 0.25, 3.0);
    const double msd = std::sqrt((binomial_moment(16, 0.25, 6.0) - exact * exact) / 20000.0);
    S.add("selector_moment_exact", std::abs(m.moment_mean - exact) <= 3 * msd, "selector_moments",
          std::abs(m.moment_mean - exact), 3 * msd);
    const auto ld = large_deviation_check(40, 0.1, 20000, derive_seed(cfg.seed, Stream::omega, 1));
    S.add("large_deviation_n40", ld.passed(), "selector_large_deviation", ld.lower_freq, ld.lower_bound + 3 * ld.lower_sigma);
    const auto tp = sample_tripartite(30000, derive_seed(cfg.seed, Stream::tripartite));
    double dev = 0.0;
    for (auto s : tp.sizes()) dev = std::max(dev, std::abs(static_cast<double>(s) - 10000.0));
    const double sd = std::sqrt(30000.0 * 2.0 / 9.0);
    S.add("tripartite_part_means", dev <= 4 * sd, "decoupling_part_means", dev, 4 * sd);
    const auto bt = bernstein_tail(10, 0.5, 3.0, 20000, derive_seed(cfg.seed, Stream::trials, 2));
    S.add("bernstein_tail", bt.passed(), "bernstein_inequality", bt.empirical, bt.bound + 3 * bt.sigma);
    const auto se = sup_exchange_check(20, 4000, derive_seed(cfg.seed, Stream::trials, 3));
    S.add("sup_exchange", se.passed(), "sup_moment_exchange", se.lhs, se.rhs + 3 * se.sigma);
  }

  // ---- entropy
  {
    bool all = true;
    for (std::uint64_t i = 0; i < 20; ++i) {
      const auto pts = cloud(rng, 6 + i % 7, 2 + i % 3, 1000 + i);
      const double t = 0.2 + 0.05 * static_cast<double>(i % 6);
      all = all && exact_entropy(NormedCloud{pts, Norm::euclidean(pts.front().size())}, t).chain_holds();
    }
    S.add("entropy_chain", all, "packing_covering_chain", all, 1.0);
    bool vol = true;
    for (std::size_t n : {1u, 2u, 3u})
      for (double t : {0.25, 0.5, 0.75}) vol = vol && volume_bound_check(Norm::euclidean(n), t, 800, cfg.seed + n).passed();
    S.add("volume_bound", vol, "volume_packing_bound", vol, 1.0);
    const auto lm = levy_mean(Norm::euclidean(8), 20000, derive_seed(cfg.seed, Stream::gaussian, 1));
    S.add("levy_mean_euclidean", std::abs(lm.M_X - 1.0) <= 3 * lm.stderr_, "levy_mean", std::abs(lm.M_X - 1.0), 3 * lm.stderr_);
    const auto w5 = build_system(SystemKind::walsh, 5);
    const double ex = triangle_excess(NormedCloud{cloud(rng, 30, 5, 7), Norm::lq(w5, 3.0)}, 100, cfg.seed);
    S.add("norm_triangle_inequality", ex <= 1e-10, "normed_space", ex, 1e-10);
    const auto pe = product_entropy_check(cloud(rng, 3, 2, 8), cloud(rng, 4, 2, 9), 0.7);
    S.add("product_entropy", pe.passed(), "entropy_of_sums", static_cast<double>(pe.sum_cover),
          static_cast<double>(pe.left * pe.right));
  }

  // ---- support reduction
  {
    CoeffVector f(64);
    for (std::size_t i = 0; i < 32; ++i) f.set(i, (rng.uniform(i, 77) < 0.5 ? -1.0 : 1.0) / std::sqrt(32.0));
    const auto st = support_reduction_stats(walsh64, f, 4.0, 4.0, 1000, derive_seed(cfg.seed, Stream::signs));
    S.add("reduction_reconstruction", st.max_reconstruction_error <= 1e-12, "support_reduction",
          st.max_reconstruction_error, 1e-12);
    S.add("reduction_multipliers", st.multipliers_exact, "support_reduction", st.multipliers_exact, 1.0);
    S.add("reduction_expected_support", std::abs(st.mean_support - st.expected_support) <= 3 * st.stderr_support,
          "support_reduction_mean", std::abs(st.mean_support - st.expected_support), 3 * st.stderr_support);
  }

  // ---- dyadic decomposition
  {
    double rec_nn = 0.0, rec_u = 0.0;
    bool bounds = true;
    for (std::uint64_t r = 0; r < 1000; ++r) {
      const std::size_t n = 1 + r % 37;
      std::vector<double> c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = rng.uniform(i, 5000 + r);
      std::sort(c.begin(), c.end(), std::greater<>());
      double s = 0.0;
      for (double x : c) s += x;
      for (double& x : c) x /= s;
      const auto d = dyadic_decompose_nonneg(c);
      const auto back = d.reconstruct();
      for (std::size_t i = 0; i < n; ++i) rec_nn = std::max(rec_nn, std::abs(back[i] - c[i]));
      const double g = d.weight_sum();
      bounds = bounds && g >= 1.0 - 1e-12 && g <= 2.0 + 1e-12;
      auto a = gaussian_vector(rng, n, 9000 + r);
      const double na = norm2(a);
      for (double& x : a) x /= na;
      const auto du = dyadic_decompose_unit(a);
      const auto bu = du.reconstruct();
      for (std::size_t i = 0; i < n; ++i) rec_u = std::max(rec_u, std::abs(bu[i] - a[i]));
    }
    S.add("dyadic_nonneg_reconstruction", rec_nn <= 1e-12, "dyadic_decomposition", rec_nn, 1e-12);
    S.add("dyadic_unit_reconstruction", rec_u <= 1e-12, "dyadic_decomposition", rec_u, 1e-12);
    S.add("dyadic_weight_bounds", bounds, "dyadic_decomposition", bounds, 1.0);
    const std::vector<double> a{std::sqrt(0.4), std::sqrt(0.3), std::sqrt(0.2), std::sqrt(0.1)};
    const double g = solve_gamma(3.0).gamma;
    const auto bs = bootstrap_split(a, g, 3.0);
    // m0 is the last prefix with mass below gamma^2.
    const double next = bs.mass_I + a[bs.m0] * a[bs.m0];
    const bool ok = bs.mass_I < g * g && next >= g * g &&
                    std::abs(bs.mass_I + a[bs.m0] * a[bs.m0] + bs.mass_J - 1.0) <= 1e-15;
    S.add("bootstrap_split", ok, "bootstrap_split", static_cast<double>(bs.m0), g * g);
  }

  // ---- inequalities
  {
    std::size_t viol = 0;
    for (double p : {2.25, 2.5, 3.0}) viol += check_numerical(p, 10.0, 0.05).violations;
    S.add("numerical_split_low", viol == 0, "numerical_split", static_cast<double>(viol), 0.0);
    const auto c1 = check_numerical(3.5, 5.0, 0.1), c2 = check_numerical(3.5, 5.0, 0.05);
    const double drift = std::abs(*c2.fitted_constant / *c1.fitted_constant - 1.0);
    S.add("numerical_split_high_constant", drift < 0.1 && *c1.fitted_constant > 0, "numerical_split_high", drift, 0.1);
    const auto g3 = solve_gamma(3.0);
    S.add("gamma_condition_p3", g3.margin >= 0.009, "gamma_condition", g3.margin, 0.009);
    const auto g2 = solve_gamma(2.01);
    S.add("gamma_condition_near_two", std::isfinite(g2.log_margin) && g2.gamma > 0, "gamma_condition", g2.log_margin, 0.0);
    const std::vector<double> z(8, 0.0);
    const auto dz = decoupling_check(z, z, z, 3.0, 1000, cfg.seed);
    S.add("decoupling_zero", dz.lhs == 0.0, "decoupling", dz.lhs, 0.0);
    const std::vector<double> u1{0.6}, v1{-0.8}, w1{0.5};
    const auto d1 = decoupling_check(u1, v1, w1, 3.0, 10000, cfg.seed);
    // With one index, U and V are never both nonzero.
    S.add("decoupling_single_index", d1.mc_mean == 0.0, "decoupling", d1.mc_mean, 0.0);
    const auto mz2 = mz_check(2.0, 16, 10000, derive_seed(cfg.seed, Stream::trials, 4));
    S.add("mz_rademacher_p2", std::abs(mz2.lhs - 16.0) <= 3 * mz2.lhs_stderr, "marcinkiewicz_zygmund",
          std::abs(mz2.lhs - 16.0), 3 * mz2.lhs_stderr);
    const auto mz4 = mz_check(4.0, 8, 20000, derive_seed(cfg.seed, Stream::trials, 5));
    S.add("mz_rademacher_p4", std::abs(mz4.lhs - 176.0) <= 3 * mz4.lhs_stderr, "marcinkiewicz_zygmund",
          std::abs(mz4.lhs - 176.0), 3 * mz4.lhs_stderr);
    const auto um = unimodality_check(1.0, 2.0);
    S.add("unimodality", um.sign_changes == 1 && um.increasing_before && um.decreasing_after, "unimodality",
          static_cast<double>(um.sign_changes), 1.0);
    const auto sp = sumprod_check();
    S.add("sumprod", sp.violations == 0, "sum_product", static_cast<double>(sp.violations), 0.0);
    const auto w4 = build_system(SystemKind::walsh, 4);
    const CoeffVector b(std::vector<double>{0.5, -0.5, 0.3, 0.1});
    const auto bt = bilinear_terms(w4, {0, 1, 2, 3}, CoeffVector(4), b, {0, 1}, 3.0);
    S.add("bilinear_degenerate", std::abs(bt.T2 - 0.6) <= 1e-14 && bt.T1 == 0.0, "bilinear_terms",
          std::abs(bt.T2 - 0.6), 1e-14);
  }

  std::size_t passed = 0;
  for (const auto& c : rec.checks) passed += c.passed;
  rec.summary["checks"] = static_cast<double>(rec.checks.size());
  rec.summary["passed"] = static_cast<double>(passed);
  rec.tables = {std::move(tab)};
  return rec;
}

}  // namespace lambdap::lab
