#include <algorithm>
#include <cmath>
#include <limits>

#include "lambdap/decompose.hpp"
#include "lambdap/entropy.hpp"
#include "lambdap/errors.hpp"
#include "lambdap/inequalities.hpp"
#include "lambdap/lab/lab.hpp"
#include "lambdap/lambda.hpp"
#include "lambdap/parallel.hpp"
#include "lambdap/rng.hpp"
#include "lambdap/selectors.hpp"
#include "lab_internal.hpp"

namespace lambdap::lab {

namespace detail {

OrthogonalSystem make_system(const ExperimentConfig& cfg, std::size_t n) {
  if (cfg.system == SystemKind::walsh) return build_system(SystemKind::walsh, n);
  if (cfg.oversample >= 2) return build_system(SystemKind::trig, n, cfg.oversample);
  // Deliberately aliased grid (fault injection).
  return trig_system_on_grid(n, cfg.oversample * n);
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  if (q == 0.5) {
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
  }
  // nearest rank
  const auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(r, 1, v.size()) - 1];
}

}  // namespace detail

using detail::make_system;
using detail::quantile;

namespace {

std::vector<std::size_t> n_or(const ExperimentConfig& cfg, std::vector<std::size_t> fallback) {
  return cfg.n.empty() ? fallback : cfg.n;
}

long long ll(std::size_t v) { return static_cast<long long>(v); }

}  // namespace

void validate(const ExperimentConfig& cfg) {
  for (auto n : cfg.n)
    if (n == 0) throw ConfigError("n must be positive");
  if (cfg.trials && *cfg.trials == 0) throw ConfigError("trials must be positive");
  if (cfg.oversample == 0) throw ConfigError("oversample must be positive");
  const double p = cfg.p.value_or(0.0);
  switch (cfg.experiment) {
    case Experiment::k_omega:
      if (cfg.p && !(p > 2.0 && p <= 4.0)) throw ConfigError("k-omega: p must lie in (2, 4]");
      if (cfg.trials && *cfg.trials < 50) throw ConfigError("k-omega: trials must be >= 50");
      break;
    case Experiment::kest_scan:
      if (cfg.p && !(p > 2.0)) throw ConfigError("kest-scan: p must exceed 2");
      for (auto n : cfg.n)
        if (n > 64) throw SizeLimitError("kest-scan: n must be <= 64");
      break;
    case Experiment::entropy_scan:
      if (cfg.p && !(p >= 1.0)) throw ConfigError("entropy-scan: q must be >= 1");
      for (auto n : cfg.n)
        if (n > 12) throw SizeLimitError("entropy-scan: n must be <= 12");
      break;
    case Experiment::reduce_demo:
      if (cfg.p && !(p >= 2.0)) throw ConfigError("reduce-demo: q must be >= 2");
      for (auto n : cfg.n)
        if (n < 8) throw ConfigError("reduce-demo: n must be >= 8");
      break;
    case Experiment::decouple:
      if (cfg.p && !(p > 2.0 && p < 4.0)) throw ConfigError("decouple: p must lie in (2, 4)");
      if (cfg.trials && *cfg.trials < 10000) throw ConfigError("decouple: trials must be >= 10000");
      break;
    case Experiment::selectors:
      if (cfg.trials && *cfg.trials < 10000) throw ConfigError("selectors: trials must be >= 10000");
      break;
    case Experiment::verify_all:
      break;
  }
}

// ------------------------------------------------------------------ k_omega

RunRecord run_k_omega(const ExperimentConfig& cfg) {
  validate(cfg);
  RunRecord rec;
  rec.config = cfg;
  const double p = cfg.p.value_or(4.0);
  const std::size_t trials = cfg.trials.value_or(50);
  const int restarts = static_cast<int>(cfg.knob("restarts", 8));
  const auto ns = n_or(cfg, {64, 128, 256});

  Table draws{"k_omega_draws", {"n", "trial", "size", "kept", "khat", "anchor"}, {}};
  Table trend{"k_omega_trend",
              {"n", "delta", "n0", "kept_draws", "median_khat", "q90_khat", "flat_lower_bound", "anchor"},
              {}};
  std::map<std::size_t, double> median, flat;
  for (auto n : ns) {
    const auto sys = make_system(cfg, n);
    const double delta = selector_delta(n, p), n0 = selector_n0(n, p);
    struct Draw {
      std::size_t size = 0;
      bool kept = false;
      double khat = 0.0;
    };
    const auto res = parallel_map<Draw>(trials, [&](std::size_t t) {
      const std::uint64_t s = derive_seed(cfg.seed, Stream::omega, n * 1000003u + t);
      const auto sel = sample_selectors(n, delta, s);
      Draw d;
      d.size = sel.size;
      // Remark on large deviations: keep n0/10 < |S| <= 10 n0.
      d.kept = static_cast<double>(sel.size) > n0 / 10.0 && static_cast<double>(sel.size) <= 10.0 * n0;
      if (d.kept) {
        KsOptions o;
        o.restarts = restarts;
        o.seed = derive_seed(s, Stream::restarts);
        d.khat = estimate_ks(sys, sel.active(), p, o).value;
      }
      return d;
    });
    std::vector<double> kept;
    for (std::size_t t = 0; t < trials; ++t) {
      draws.add({ll(n), ll(t), ll(res[t].size), static_cast<long long>(res[t].kept),
                 res[t].kept ? Cell(res[t].khat) : Cell(std::string("")), "random_selector_lambda_p"});
      if (res[t].kept) kept.push_back(res[t].khat);
    }
    median[n] = quantile(kept, 0.5);
    const double q90 = quantile(kept, 0.9);
    flat[n] = ks_flat_lower_bound(n, n, p);
    trend.add({ll(n), delta, n0, ll(kept.size()), median[n], q90, flat[n], "random_selector_lambda_p"});
    rec.summary["median_khat_n" + std::to_string(n)] = median[n];
    rec.summary["q90_khat_n" + std::to_string(n)] = q90;
    rec.summary["flat_lower_bound_n" + std::to_string(n)] = flat[n];
    rec.check("kept_draws_n" + std::to_string(n), !kept.empty(), "large_deviation_restriction",
              static_cast<double>(kept.size()), 1.0);
  }
  const std::size_t lo = *std::min_element(ns.begin(), ns.end());
  const std::size_t hi = *std::max_element(ns.begin(), ns.end());
  if (hi >= 4 * lo) {
    const double ceiling = cfg.knob("median_ceiling", 3.0);
    const double mr = median[hi] / median[lo], fr = flat[hi] / flat[lo];
    rec.summary["median_ratio"] = mr;
    rec.summary["flat_growth"] = fr;
    rec.check("median_khat_bounded", mr <= ceiling, "random_selector_lambda_p", mr, ceiling);
    // n^{1/4} growth of the full-set bound over a factor 4 in n is sqrt 2.
    rec.check("flat_bound_grows", fr >= cfg.knob("flat_growth_floor", 1.3), "dirichlet_maximality", fr,
              cfg.knob("flat_growth_floor", 1.3));
  }
  rec.tables = {std::move(draws), std::move(trend)};
  return rec;
}

// ---------------------------------------------------------------- kest_scan

RunRecord run_kest_scan(const ExperimentConfig& cfg) {
  validate(cfg);
  RunRecord rec;
  rec.config = cfg;
  const double p = cfg.p.value_or(3.0);
  const std::size_t n = n_or(cfg, {32}).front();
  const std::size_t pairs = cfg.trials.value_or(2);
  const auto draws = static_cast<std::size_t>(cfg.knob("draws", 4));
  const double p1 = cfg.knob("p1", 0.0);
  const double delta = selector_delta(n, p), n0 = selector_n0(n, p);
  const KestVariant variant =
      p1 > 0.0 ? KestVariant::restricted_to(p1, std::pow(static_cast<double>(n), 2.0 / p - 2.0 / p1))
               : KestVariant::standard();
  const double sigma = cfg.knob("sigma", default_sigma(p, variant));
  const double m_max = cfg.knob("m_max", std::min<double>(9.0, static_cast<double>(n)));
  if (m_max > 10.0 * n0 || m_max > static_cast<double>(n))
    throw SizeLimitError("kest-scan: m_max must be <= min(n, 10 n0)");
  if (draws == 0) throw ConfigError("kest-scan: draws must be positive");
  std::vector<std::size_t> ms;
  for (std::size_t m = 1; static_cast<double>(m) <= m_max; m *= 3) ms.push_back(m);

  const auto sys = make_system(cfg, n);
  const char* anchor = variant.restricted ? "key_estimate_restricted" : "key_estimate";
  Table tab{"kest_scan",
            {"pair", "m1", "m2", "m3", "delta", "lhs", "K2", "K3", "sigma", "rhs", "ratio", "anchor"},
            {}};
  double worst = 0.0;
  for (std::size_t s = 0; s < pairs; ++s) {
    const auto x2 = sample_selectors(n, delta, derive_seed(cfg.seed, Stream::omega2, s));
    const auto x3 = sample_selectors(n, delta, derive_seed(cfg.seed, Stream::omega3, s));
    auto kval = [&](const SelectorSample& x, Stream st) {
      if (x.size == 0) return 1.0;
      KsOptions o;
      o.restarts = 8;
      o.seed = derive_seed(cfg.seed, st, s);
      // K is compared with 1 + K2 + K3, so values below 1 are lifted to 1.
      return std::max(1.0, estimate_ks(sys, x.active(), p, o).value);
    };
    const double K2 = kval(x2, Stream::omega2), K3 = kval(x3, Stream::omega3);
    std::vector<SelectorSample> x1;
    for (std::size_t d = 0; d < draws; ++d)
      x1.push_back(sample_selectors(n, delta, derive_seed(derive_seed(cfg.seed, Stream::omega1, s), Stream::trials, d)));

    struct CellSpec {
      std::size_t m1, m2, m3;
    };
    std::vector<CellSpec> cells;
    for (auto a : ms)
      for (auto b : ms)
        for (auto c : ms) cells.push_back({a, b, c});
    const auto vals = parallel_map<double>(cells.size(), [&](std::size_t i) {
      TripleConfig tc;
      tc.p = p;
      tc.m1 = cells[i].m1;
      tc.m2 = cells[i].m2;
      tc.m3 = cells[i].m3;
      tc.restarts = static_cast<int>(cfg.knob("restarts", 4));
      tc.max_iter = static_cast<int>(cfg.knob("max_iter", 30));
      tc.seed = derive_seed(cfg.seed, Stream::restarts, s);
      return estimate_k_triple(sys, x1, x2, x3, tc).value;
    });
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& c = cells[i];
      const double rhs = kest_rhs(c.m1, c.m2, c.m3, delta, p, K2, K3, sigma, variant);
      const double ratio = vals[i] / rhs;
      worst = std::max(worst, ratio);
      tab.add({ll(s), ll(c.m1), ll(c.m2), ll(c.m3), delta, vals[i], K2, K3, sigma, rhs, ratio, anchor});
    }
  }
  rec.summary["max_ratio"] = worst;
  rec.summary["delta"] = delta;
  rec.summary["n0"] = n0;
  const double ceiling = cfg.knob("ceiling", 1.0);
  rec.check("ratio_finite", std::isfinite(worst), anchor, worst, 0.0);
  rec.check("ratio_below_ceiling", worst <= ceiling, anchor, worst, ceiling);
  rec.tables = {std::move(tab)};
  return rec;
}

// ------------------------------------------------------------- entropy_scan

RunRecord run_entropy_scan(const ExperimentConfig& cfg) {
  validate(cfg);
  RunRecord rec;
  rec.config = cfg;
  const double q = cfg.p.value_or(4.0);
  const std::size_t n = n_or(cfg, {8}).front();
  const auto pool = static_cast<std::size_t>(cfg.knob("pool", 1000));
  std::vector<std::size_t> ms;
  for (std::size_t m = 1; m <= n; m *= 2) ms.push_back(m);
  const std::vector<double> ts{0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  const auto sys = make_system(cfg, n);
  const auto rows = entropy_scaling_scan(sys, ms, ts, q, pool, cfg.seed);
  Table tab{"entropy_scan", {"n", "m", "t", "q", "count_kind", "count", "bound", "ratio", "anchor"}, {}};
  bool finite = true;
  for (const auto& r : rows) {
    tab.add({ll(r.n), ll(r.m), r.t, r.q, r.count_kind, ll(r.count), r.bound, r.ratio, "pm_entropy_bound"});
    finite = finite && std::isfinite(r.ratio) && r.count >= 1;
  }
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.ratio);
  rec.summary["max_ratio"] = worst;
  Table fit{"entropy_fit", {"m", "exponent", "anchor"}, {}};
  for (auto m : ms) {
    std::vector<ScanRow> sub;
    for (const auto& r : rows)
      if (r.m == m) sub.push_back(r);
    const auto e = fit_entropy_exponent(sub);
    fit.add({ll(m), e ? Cell(*e) : Cell(std::string("")), "pm_entropy_bound"});
    if (e) rec.summary["exponent_m" + std::to_string(m)] = *e;
  }
  rec.check("counts_valid", finite, "pm_entropy_bound", worst, 0.0);
  rec.tables = {std::move(tab), std::move(fit)};
  return rec;
}

// -------------------------------------------------------------- reduce_demo

RunRecord run_reduce_demo(const ExperimentConfig& cfg) {
  validate(cfg);
  RunRecord rec;
  rec.config = cfg;
  const double q = cfg.p.value_or(4.0);
  const std::size_t n = n_or(cfg, {64}).front();
  const std::size_t draws = cfg.trials.value_or(1000);
  if (draws < 2) throw ConfigError("reduce-demo: need >= 2 draws");
  const auto sys = make_system(cfg, n);
  const CounterRng coef(derive_seed(cfg.seed, Stream::coefficients));
  const std::vector<std::pair<std::size_t, double>> cases{{n / 2, 4.0}, {n, 8.0}};
  Table tab{"reduce_demo",
            {"m", "t", "k", "draws", "mean_support", "stderr_support", "expected_support", "accept_freq",
             "max_reconstruction_error", "multipliers_exact", "anchor"},
            {}};
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto [m, t] = cases[c];
    CoeffVector f(n);
    const double v = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t i = 0; i < m; ++i) f.set(i, coef.uniform(i, c) < 0.5 ? -v : v);
    const auto st = support_reduction_stats(sys, f, t, q, draws, derive_seed(cfg.seed, Stream::signs, c));
    tab.add({ll(m), t, static_cast<long long>(st.k), ll(st.draws), st.mean_support, st.stderr_support,
             st.expected_support, st.accept_freq, st.max_reconstruction_error,
             static_cast<long long>(st.multipliers_exact), "support_reduction"});
    const std::string tag = "_m" + std::to_string(m) + "_t" + format_double(t);
    rec.check("expected_support" + tag,
              std::abs(st.mean_support - st.expected_support) <= 3.0 * st.stderr_support,
              "support_reduction_mean", std::abs(st.mean_support - st.expected_support), 3.0 * st.stderr_support);
    rec.check("reconstruction" + tag, st.max_reconstruction_error <= 1e-12, "support_reduction",
              st.max_reconstruction_error, 1e-12);
    rec.check("multipliers" + tag, st.multipliers_exact, "support_reduction", st.multipliers_exact, 1.0);
    rec.check("acceptance" + tag, st.accept_freq >= 0.25, "support_reduction_acceptance", st.accept_freq, 0.25);
    rec.summary["accept_freq" + tag] = st.accept_freq;
  }
  rec.tables = {std::move(tab)};
  return rec;
}

// ----------------------------------------------------------------- decouple

RunRecord run_decouple(const ExperimentConfig& cfg) {
  validate(cfg);
  RunRecord rec;
  rec.config = cfg;
  const double p = cfg.p.value_or(3.0);
  const std::size_t n = n_or(cfg, {30}).front();
  const std::size_t trials = cfg.trials.value_or(10000);
  const auto sets = static_cast<std::size_t>(cfg.knob("vectors", 50));
  const CounterRng rng(derive_seed(cfg.seed, Stream::coefficients));
  auto vec = [&](std::size_t set, std::size_t which) {
    std::vector<double> x(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (x[i] = rng.normal(i, set * 3 + which)) * x[i];
    const double r = rng.uniform(n + 1, set * 3 + which) / std::sqrt(s);
    for (double& e : x) e *= r;
    return x;
  };
  Table tab{"decouple",
            {"set", "sum_u", "sum_v", "sum_w", "mc_mean", "mc_stderr", "target", "lhs", "rhs", "ratio", "anchor"},
            {}};
  double worst = 0.0;
  std::array<double, 3> parts{};
  for (std::size_t s = 0; s < sets; ++s) {
    const auto u = vec(s, 0), v = vec(s, 1), w = vec(s, 2);
    const auto r = decoupling_check(u, v, w, p, trials, derive_seed(cfg.seed, Stream::tripartite, s));
    double su = 0, sv = 0, sw = 0;
    for (std::size_t i = 0; i < n; ++i) su += u[i], sv += v[i], sw += w[i];
    tab.add({ll(s), su, sv, sw, r.mc_mean, r.mc_stderr, r.target, r.lhs, r.rhs, r.ratio, "decoupling"});
    worst = std::max(worst, r.ratio);
    for (int j = 0; j < 3; ++j) parts[j] += r.mean_part_sizes[j] / static_cast<double>(sets);
  }
  rec.summary["fitted_ceiling"] = worst;
  const double sd = std::sqrt(static_cast<double>(n) * (2.0 / 9.0) / static_cast<double>(trials * sets));
  for (int j = 0; j < 3; ++j) {
    const double dev = std::abs(parts[j] - static_cast<double>(n) / 3.0);
    rec.check("part_mean_R" + std::to_string(j + 1), dev <= 4.0 * sd, "decoupling_part_means", dev, 4.0 * sd);
  }
  rec.check("ratio_finite", std::isfinite(worst), "decoupling", worst, 0.0);
  if (cfg.knobs.count("ceiling"))
    rec.check("ratio_below_ceiling", worst <= cfg.knobs.at("ceiling"), "decoupling", worst,
              cfg.knobs.at("ceiling"));
  rec.tables = {std::move(tab)};
  return rec;
}

// ---------------------------------------------------------------- selectors

RunRecord run_selectors(const ExperimentConfig& cfg) {
  validate(cfg);
  RunRecord rec;
  rec.config = cfg;
  const std::size_t trials = cfg.trials.value_or(100000);
  Table mom{"selector_moments",
            {"l", "delta", "q", "moment_mean", "moment_stderr", "exact_moment", "norm_q", "bound", "ratio", "anchor"},
            {}};
  for (double q : {2.0, 3.0, 32.0}) {
    const auto m = selector_moment_check(16, 0.25, q, trials, derive_seed(cfg.seed, Stream::trials, static_cast<std::uint64_t>(q)));
    const double exact = binomial_moment(16, 0.25, q);
    // sd of S^q from exact moments; the sample sd collapses at large q
    const double sd = std::sqrt((binomial_moment(16, 0.25, 2 * q) - exact * exact) / static_cast<double>(trials));
    mom.add({16LL, 0.25, q, m.moment_mean, m.moment_stderr, exact, m.empirical, m.bound, m.ratio, "selector_moments"});
    rec.check("moment_q" + format_double(q), std::abs(m.moment_mean - exact) <= 3.0 * sd,
              "selector_moments", std::abs(m.moment_mean - exact), 3.0 * sd);
  }
  rec.summary["moment_bound_calibration"] = selector_moment_calibration();

  Table ld{"large_deviations",
           {"n", "delta", "trials", "upper_freq", "upper_bound", "lower_freq", "lower_bound", "anchor"},
           {}};
  const std::pair<std::size_t, double> ldc[] = {{40, 0.1}, {1000, 0.05}};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto r = large_deviation_check(ldc[i].first, ldc[i].second, trials, derive_seed(cfg.seed, Stream::omega, i));
    ld.add({ll(r.n), r.delta, ll(r.trials), r.upper_freq, r.upper_bound, r.lower_freq, r.lower_bound,
            "selector_large_deviation"});
    rec.check("large_deviation_n" + std::to_string(r.n), r.passed(), "selector_large_deviation",
              std::max(r.upper_freq - r.upper_bound - 3 * r.upper_sigma, r.lower_freq - r.lower_bound - 3 * r.lower_sigma),
              0.0);
  }

  Table bern{"bernstein", {"l", "delta", "u", "trials", "empirical", "bound", "sigma", "anchor"}, {}};
  const std::array<std::tuple<std::size_t, double, double>, 5> bc{
      {{100, 0.1, 20.0}, {10, 0.5, 3.0}, {50, 0.2, 8.0}, {200, 0.05, 10.0}, {30, 0.3, 6.0}}};
  for (std::size_t i = 0; i < bc.size(); ++i) {
    const auto [l, d, u] = bc[i];
    const auto r = bernstein_tail(l, d, u, trials, derive_seed(cfg.seed, Stream::trials, 100 + i));
    bern.add({ll(l), d, u, ll(trials), r.empirical, r.bound, r.sigma, "bernstein_inequality"});
    rec.check("bernstein_" + std::to_string(i), r.passed(), "bernstein_inequality", r.empirical,
              r.bound + 3 * r.sigma);
  }

  const std::size_t tn = 30000;
  const auto tp = sample_tripartite(tn, derive_seed(cfg.seed, Stream::tripartite));
  const auto sz = tp.sizes();
  const double sd = std::sqrt(tn * 2.0 / 9.0);
  Table tri{"tripartite", {"n", "part", "size", "expected", "sd", "anchor"}, {}};
  for (int j = 0; j < 3; ++j) {
    tri.add({ll(tn), static_cast<long long>(j + 1), ll(sz[j]), tn / 3.0, sd, "decoupling_part_means"});
    rec.check("tripartite_R" + std::to_string(j + 1), std::abs(static_cast<double>(sz[j]) - tn / 3.0) <= 4 * sd,
              "decoupling_part_means", std::abs(static_cast<double>(sz[j]) - tn / 3.0), 4 * sd);
  }

  const auto se = sup_exchange_check(20, std::min<std::size_t>(trials, 20000), derive_seed(cfg.seed, Stream::trials, 999));
  rec.summary["sup_exchange_lhs"] = se.lhs;
  rec.summary["sup_exchange_rhs"] = se.rhs;
  rec.check("sup_exchange", se.passed(), "sup_moment_exchange", se.lhs, se.rhs + 3 * se.sigma);
  rec.tables = {std::move(mom), std::move(ld), std::move(bern), std::move(tri)};
  return rec;
}

}  // namespace lambdap::lab
