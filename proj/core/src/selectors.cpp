#include "lambdap/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lambdap/parallel.hpp"
#include "lambdap/rng.hpp"

namespace lambdap {

IndexSet SelectorSample::active() const {
  IndexSet s;
  s.reserve(size);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) s.push_back(i);
  return s;
}

SelectorSample SelectorSample::all_on(std::size_t n) {
  SelectorSample s;
  s.n = n;
  s.delta = 1.0;
  s.bits.assign(n, 1);
  s.size = n;
  return s;
}

IndexSet TripartiteSample::part(int label) const {
  IndexSet s;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) s.push_back(i);
  return s;
}

std::array<std::size_t, 3> TripartiteSample::sizes() const {
  std::array<std::size_t, 3> c{0, 0, 0};
  for (auto l : labels) ++c[l - 1];
  return c;
}

double selector_delta(std::size_t n, double p) {
  return std::pow(static_cast<double>(n), 2.0 / p - 1.0);
}

double selector_n0(std::size_t n, double p) { return std::pow(static_cast<double>(n), 2.0 / p); }

bool selector_bit(std::uint64_t seed, std::size_t i, std::uint64_t trial, double delta) {
  const CounterRng rng(derive_seed(seed, Stream::omega));
  const auto [u0, u1] = rng.uniform2(i / 2, trial);
  return ((i % 2 == 0) ? u0 : u1) < delta;
}

std::size_t selector_count(std::uint64_t seed, std::size_t l, std::uint64_t trial, double delta) {
  const CounterRng rng(derive_seed(seed, Stream::omega));
  std::size_t c = 0;
  for (std::size_t j = 0; 2 * j < l; ++j) {
    const auto [u0, u1] = rng.uniform2(j, trial);
    c += u0 < delta;
    if (2 * j + 1 < l) c += u1 < delta;
  }
  return c;
}

SelectorSample sample_selectors(std::size_t n, double delta, std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("sample_selectors: delta must lie in (0, 1)");
  SelectorSample s;
  s.n = n;
  s.delta = delta;
  s.seed = seed;
  s.bits.resize(n);
  const CounterRng rng(derive_seed(seed, Stream::omega));
  for (std::size_t j = 0; 2 * j < n; ++j) {
    const auto [u0, u1] = rng.uniform2(j, 0);
    s.bits[2 * j] = u0 < delta;
    if (2 * j + 1 < n) s.bits[2 * j + 1] = u1 < delta;
  }
  s.size = static_cast<std::size_t>(std::count(s.bits.begin(), s.bits.end(), 1));
  return s;
}

TripartiteSample sample_tripartite(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_tripartite: n must be positive");
  TripartiteSample t;
  t.n = n;
  t.seed = seed;
  t.labels.resize(n);
  const CounterRng rng(derive_seed(seed, Stream::tripartite));
  for (std::size_t i = 0; i < n; ++i) {
    const auto [u_eta, u_zeta] = rng.uniform2(i, 0);
    const bool eta = u_eta < 1.0 / 3.0;
    const bool zeta = u_zeta < 0.5;
    t.labels[i] = eta ? 1 : (zeta ? 2 : 3);
  }
  return t;
}

double selector_moment_bound(std::size_t l, double delta, double q) {
  const double dl = delta * static_cast<double>(l);
  return dl + q / std::log(2.0 + q / dl);
}

double binomial_moment(std::size_t l, double delta, double q) {
  if (delta <= 0.0 || delta > 1.0) throw std::invalid_argument("binomial_moment: bad delta");
  if (delta == 1.0) return std::pow(static_cast<double>(l), q);
  const double L = static_cast<double>(l);
  double s = 0.0;
  for (std::size_t k = 1; k <= l; ++k) {
    const double K = static_cast<double>(k);
    const double logc = std::lgamma(L + 1) - std::lgamma(K + 1) - std::lgamma(L - K + 1);
    s += std::exp(logc + K * std::log(delta) + (L - K) * std::log1p(-delta) + q * std::log(K));
  }
  return s;
}

double selector_moment_calibration() {
  double worst = 0.0;
  for (int q = 1; q <= 64; ++q) {
    const double m = std::pow(binomial_moment(16, 0.25, q), 1.0 / q);
    worst = std::max(worst, m / selector_moment_bound(16, 0.25, q));
  }
  return worst;
}

MomentCheck selector_moment_check(std::size_t l, double delta, double q, std::size_t trials,
                                  std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("selector_moment_check: delta must lie in (0, 1)");
  if (!(q >= 1.0)) throw std::invalid_argument("selector_moment_check: q must be >= 1");
  if (trials < 2) throw std::invalid_argument("selector_moment_check: need >= 2 trials");
  const auto counts = parallel_map<std::size_t>(
      trials, [&](std::size_t t) { return selector_count(seed, l, t, delta); });
  // Tabulate k^q once; S takes only l + 1 values.
  std::vector<double> hist(l + 1, 0.0);
  for (auto c : counts) hist[c] += 1.0;
  double mean = 0.0, sq = 0.0;
  for (std::size_t k = 0; k <= l; ++k) {
    const double v = std::pow(static_cast<double>(k), q);
    mean += hist[k] * v;
    sq += hist[k] * v * v;
  }
  const double T = static_cast<double>(trials);
  mean /= T;
  const double var = std::max(0.0, sq / T - mean * mean) * T / (T - 1.0);
  MomentCheck r;
  r.moment_mean = mean;
  r.moment_stderr = std::sqrt(var / T);
  r.empirical = std::pow(mean, 1.0 / q);
  r.bound = selector_moment_bound(l, delta, q);
  r.ratio = r.empirical / r.bound;
  r.exact = std::pow(binomial_moment(l, delta, q), 1.0 / q);
  return r;
}

LargeDeviationCheck large_deviation_check(std::size_t n, double delta, std::size_t trials,
                                          std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("large_deviation_check: delta must lie in (0, 1)");
  if (trials == 0) throw std::invalid_argument("large_deviation_check: trials must be positive");
  const double nd = static_cast<double>(n) * delta;
  const auto counts = parallel_map<std::size_t>(
      trials, [&](std::size_t t) { return selector_count(seed, n, t, delta); });
  LargeDeviationCheck r;
  r.n = n;
  r.delta = delta;
  r.trials = trials;
  for (auto c : counts) {
    const double s = static_cast<double>(c);
    r.upper_count += s > 10.0 * nd;
    r.lower_count += s < nd / 10.0;
  }
  const double T = static_cast<double>(trials);
  r.upper_freq = static_cast<double>(r.upper_count) / T;
  r.lower_freq = static_cast<double>(r.lower_count) / T;
  r.upper_bound = std::exp(-5.0 * nd);
  r.lower_bound = std::exp(-nd / 2.0);
  r.upper_sigma = std::sqrt(r.upper_bound * (1.0 - r.upper_bound) / T);
  r.lower_sigma = std::sqrt(r.lower_bound * (1.0 - r.lower_bound) / T);
  return r;
}

SupExchangeCheck sup_exchange_check(std::size_t n, std::size_t trials, std::uint64_t seed) {
  if (n < 2 || n > 100) throw std::invalid_argument("sup_exchange_check: need 2 <= n <= 100");
  if (trials < 2) throw std::invalid_argument("sup_exchange_check: need >= 2 trials");
  const CounterRng shape(derive_seed(seed, Stream::coefficients));
  std::vector<double> w(n), dj(n);
  std::vector<std::size_t> lj(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto [u0, u1] = shape.uniform2(j, 0);
    const auto [u2, u3] = shape.uniform2(j, 1);
    (void)u3;
    w[j] = 0.2 + 0.8 * u0;
    dj[j] = 0.02 + 0.48 * u1;
    lj[j] = 1 + static_cast<std::size_t>(u2 * 20.0);
  }
  const double q = std::log(static_cast<double>(n));
  const std::uint64_t key = derive_seed(seed, Stream::trials);
  struct Row {
    double sup;
    std::vector<double> xq;
  };
  const auto rows = parallel_map<Row>(trials, [&](std::size_t t) {
    Row r{0.0, std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
      // Lane j*trials + t keeps every (variable, trial) pair distinct.
      const std::size_t c = selector_count(key, lj[j], j * trials + t, dj[j]);
      const double x = w[j] * static_cast<double>(c) / static_cast<double>(lj[j]);
      r.sup = std::max(r.sup, x);
      r.xq[j] = std::pow(x, q);
    }
    return r;
  });
  const double T = static_cast<double>(trials);
  double mean = 0.0, sq = 0.0;
  std::vector<double> mom(n, 0.0);
  for (const auto& r : rows) {
    mean += r.sup;
    sq += r.sup * r.sup;
    for (std::size_t j = 0; j < n; ++j) mom[j] += r.xq[j];
  }
  mean /= T;
  SupExchangeCheck out;
  out.n = n;
  out.q = q;
  out.lhs = mean;
  out.sigma = std::sqrt(std::max(0.0, sq / T - mean * mean) / (T - 1.0));
  double best = 0.0;
  for (double m : mom) best = std::max(best, std::pow(m / T, 1.0 / q));
  out.rhs = std::numbers::e * best;
  return out;
}

}  // namespace lambdap
