#include "lambdap/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lambdap/errors.hpp"
#include "lambdap/parallel.hpp"
#include "lambdap/rng.hpp"
#include "lambdap/selectors.hpp"

namespace lambdap {

namespace {

bool violates(double lhs, double rhs) { return lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs)); }

struct RowScan {
  std::size_t violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  double cmax = 0.0;
};

}  // namespace

InequalityReport check_numerical(double p, double X, double step) {
  if (!(p > 2.0)) throw std::invalid_argument("check_numerical: p must exceed 2");
  if (!(X > 0.0) || !(step > 0.0) || step > X)
    throw std::invalid_argument("check_numerical: need X > 0 and 0 < step <= X");
  const std::size_t N = static_cast<std::size_t>(std::llround(2.0 * X / step));
  auto coord = [&](std::size_t i) { return -X + static_cast<double>(i) * step; };
  const bool low = p <= 3.0;

  // Pass 1 fits C for p > 3 (max of the required constant); pass 2 counts.
  auto scan = [&](double C) {
    const auto rows = parallel_map<RowScan>(N + 1, [&](std::size_t i) {
      RowScan r;
      const double x = coord(i), ax = std::abs(x);
      for (std::size_t j = 0; j <= N; ++j) {
        const double y = coord(j), ay = std::abs(y), s = x + y;
        const double lhs = std::pow(std::abs(s), p);
        double rhs;
        if (low) {
          const double b = 1.0 + ax;
          rhs = s * s * std::pow(ay, p - 2.0) + std::pow(b, p) + 2.0 * x * std::pow(b, p - 2.0) * y +
                std::pow(b, p - 2.0) * y * y;
        } else {
          const double rest = std::pow(std::abs(s), p - 2.0) * x * x +
                              2.0 * x * std::pow(ax, p - 2.0) * y +
                              (2.0 * p - 3.0) * std::pow(ax, p - 2.0) * y * y;
          const double cube = std::pow(ax + ay, p - 3.0) * ay * ay * ay;
          if (cube > 0.0) r.cmax = std::max(r.cmax, (lhs - rest) / cube);
          rhs = rest + C * cube;
        }
        if (violates(lhs, rhs)) ++r.violations;
        r.worst = std::min(r.worst, rhs - lhs);
      }
      return r;
    });
    return rows;
  };

  InequalityReport rep;
  rep.name = low ? "numerical_split_p_le_3" : "numerical_split_p_gt_3";
  rep.description = "grid [-X,X]^2, X=" + std::to_string(X) + ", step=" + std::to_string(step);
  rep.evaluations = (N + 1) * (N + 1);
  double C = 0.0;
  if (!low) {
    for (const auto& r : scan(0.0)) C = std::max(C, r.cmax);
    rep.fitted_constant = C;
  }
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : scan(C)) {
    rep.violations += r.violations;
    rep.worst_margin = std::min(rep.worst_margin, r.worst);
  }
  return rep;
}

namespace {

// log of the margin at g = e^s for the p-condition, robust as g -> 0.
double log_margin_p(double p, double s) {
  const double u = std::exp(2.0 * s);  // g^2, may underflow
  double A;
  if (u < 1e-300) {
    A = (p - 2.0) / 2.0;
  } else {
    A = -std::expm1((p - 2.0) / 2.0 * std::log1p(-u)) / u;
  }
  const double scaled = A - std::exp((p - 2.0) * s);  // margin / g^2
  if (!(scaled > 0.0)) return -std::numeric_limits<double>::infinity();
  return 2.0 * s + std::log(scaled);
}

double log_margin_c(double C, double s) {
  const double scaled = 1.0 - C * std::exp(s);  // (g^2 - C g^3) / g^2
  if (!(scaled > 0.0)) return -std::numeric_limits<double>::infinity();
  return 2.0 * s + std::log(scaled);
}

template <class F>
double maximize_log(F f, double lo, double hi) {
  // Coarse scan, then golden section inside the best bracket.
  constexpr int kGrid = 4000;
  int best = 0;
  double bv = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double s = lo + (hi - lo) * i / kGrid;
    const double v = f(s);
    if (v > bv) bv = v, best = i;
  }
  double a = lo + (hi - lo) * std::max(0, best - 1) / kGrid;
  double b = lo + (hi - lo) * std::min(kGrid, best + 1) / kGrid;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const double s = (a + b) / 2.0;
  return f(s) >= bv ? s : lo + (hi - lo) * best / kGrid;
}

}  // namespace

GammaSolution solve_gamma(double p, std::optional<double> C) {
  if (!(p > 2.0)) throw std::invalid_argument("solve_gamma: p must exceed 2");
  if (C && !(*C > 0.0) && !std::isnan(*C)) throw std::invalid_argument("solve_gamma: C must be positive");
  if (C && !std::isfinite(*C)) throw InfeasibleError("solve_gamma: C is not finite");
  // s = log gamma over [-740, 0); exp(-740) is still a normal double.
  constexpr double kLo = -740.0, kHi = -1e-12;
  GammaSolution out;
  double s;
  if (C) {
    s = maximize_log([&](double t) { return log_margin_c(*C, t); }, kLo, kHi);
    out.log_margin = log_margin_c(*C, s);
  } else {
    s = maximize_log([&](double t) { return log_margin_p(p, t); }, kLo, kHi);
    out.log_margin = log_margin_p(p, s);
  }
  if (!std::isfinite(out.log_margin)) throw InfeasibleError("solve_gamma: no feasible gamma");
  out.gamma = std::exp(s);
  out.margin = std::exp(out.log_margin);
  return out;
}

DecouplingResult decoupling_check(std::span<const double> u, std::span<const double> v,
                                  std::span<const double> w, double p, std::size_t trials,
                                  std::uint64_t seed) {
  const std::size_t n = u.size();
  if (n == 0 || v.size() != n || w.size() != n)
    throw std::invalid_argument("decoupling_check: u, v, w must have equal positive length");
  if (!(p > 2.0 && p < 4.0)) throw std::invalid_argument("decoupling_check: p must lie in (2, 4)");
  if (trials < 2) throw std::invalid_argument("decoupling_check: need >= 2 trials");
  auto norm = [](std::span<const double> x) {
    double s = 0.0;
    for (double e : x) s += e * e;
    return std::sqrt(s);
  };
  if (norm(u) > 1.0 + 1e-12 || norm(v) > 1.0 + 1e-12 || norm(w) > 1.0 + 1e-12)
    throw std::invalid_argument("decoupling_check: vectors must have norm <= 1");
  auto phi3 = [&](double x) { return std::pow(1.0 / 3.0 + std::abs(x), p - 2.0); };
  double su = 0, sv = 0, sw = 0;
  for (std::size_t i = 0; i < n; ++i) su += u[i], sv += v[i], sw += w[i];

  struct Draw {
    double value;
    std::array<std::size_t, 3> sizes;
  };
  const auto draws = parallel_map<Draw>(trials, [&](std::size_t t) {
    const auto part = sample_tripartite(n, derive_seed(seed, Stream::tripartite, t));
    double U = 0, V = 0, W = 0;
    for (std::size_t i = 0; i < n; ++i) {
      switch (part.labels[i]) {
        case 1: U += u[i]; break;
        case 2: V += v[i]; break;
        default: W += w[i]; break;
      }
    }
    return Draw{U * V * phi3(W), part.sizes()};
  });
  const double T = static_cast<double>(trials);
  double mean = 0.0, sq = 0.0;
  DecouplingResult r;
  for (const auto& d : draws) {
    mean += d.value;
    sq += d.value * d.value;
    for (int j = 0; j < 3; ++j) r.mean_part_sizes[j] += static_cast<double>(d.sizes[j]) / T;
  }
  mean /= T;
  r.mc_mean = mean;
  r.mc_stderr = std::sqrt(std::max(0.0, sq / T - mean * mean) / (T - 1.0));
  r.target = (su / 3.0) * (sv / 3.0) * phi3(sw / 3.0);
  r.lhs = std::abs(mean - r.target);
  const double base = 1.0 + std::abs(su) + std::abs(sv) + std::abs(sw);
  r.rhs = base * base;  // exponent p - delta with delta = p - 2
  r.ratio = r.lhs / r.rhs;
  return r;
}

BernsteinResult bernstein_tail(std::size_t l, double delta, double u, std::size_t trials,
                               std::uint64_t seed) {
  if (!(u > 0.0)) throw std::invalid_argument("bernstein_tail: u must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("bernstein_tail: delta must lie in (0, 1)");
  if (l == 0 || trials == 0) throw std::invalid_argument("bernstein_tail: l and trials must be positive");
  const double L = static_cast<double>(l);
  BernsteinResult r;
  r.bound = std::exp(-(u * u / 2.0) / (L * delta + u / 3.0));
  const double threshold = L * delta + u - 1e-9;
  const auto hits = parallel_map<std::uint8_t>(trials, [&](std::size_t t) {
    return static_cast<std::uint8_t>(static_cast<double>(selector_count(seed, l, t, delta)) >= threshold);
  });
  double c = 0.0;
  for (auto h : hits) c += h;
  const double T = static_cast<double>(trials);
  r.empirical = c / T;
  r.sigma = std::sqrt(r.bound * (1.0 - r.bound) / T);
  return r;
}

MzResult mz_check(double p, std::size_t n, std::size_t trials, std::uint64_t seed, MzVariables kind,
                  double delta) {
  if (!(p >= 1.0)) throw std::invalid_argument("mz_check: p must be >= 1");
  if (n == 0 || trials < 2) throw std::invalid_argument("mz_check: need n >= 1 and >= 2 trials");
  if (kind == MzVariables::centered_selectors && !(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("mz_check: delta must lie in (0, 1)");
  const double dsel = kind == MzVariables::rademacher ? 0.5 : delta;
  struct Pair {
    double a, b;
  };
  const auto vals = parallel_map<Pair>(trials, [&](std::size_t t) {
    const double S = static_cast<double>(selector_count(seed, n, t, dsel));
    const double N = static_cast<double>(n);
    double sum, sq;
    if (kind == MzVariables::rademacher) {
      sum = 2.0 * S - N;
      sq = N;
    } else {
      sum = S - N * delta;
      sq = S * (1 - delta) * (1 - delta) + (N - S) * delta * delta;
    }
    return Pair{std::pow(std::abs(sum), p), std::pow(sq, p / 2.0)};
  });
  const double T = static_cast<double>(trials);
  double ma = 0, qa = 0, mb = 0, qb = 0;
  for (const auto& v : vals) {
    ma += v.a;
    qa += v.a * v.a;
    mb += v.b;
    qb += v.b * v.b;
  }
  ma /= T;
  mb /= T;
  MzResult r;
  r.lhs = ma;
  r.rhs = mb;
  r.lhs_stderr = std::sqrt(std::max(0.0, qa / T - ma * ma) / (T - 1.0));
  r.rhs_stderr = std::sqrt(std::max(0.0, qb / T - mb * mb) / (T - 1.0));
  r.ratio = ma / mb;
  return r;
}

UnimodalityResult unimodality_check(double kappa, double q, std::size_t grid) {
  if (!(kappa > 0.0)) throw std::invalid_argument("unimodality_check: kappa must be positive");
  if (!(q > 1.0)) throw std::invalid_argument("unimodality_check: q must exceed 1");
  if (!(kappa < q)) throw std::invalid_argument("unimodality_check: need kappa < q");
  if (grid < 8) throw std::invalid_argument("unimodality_check: grid too coarse");
  const double L = std::log(10.0 * q);
  auto logF = [&](double x) { return x * std::log(kappa / x) + q * std::log(x); };
  std::vector<double> xs(grid - 1), d(grid - 2);
  for (std::size_t j = 1; j < grid; ++j) xs[j - 1] = std::exp(L * static_cast<double>(j) / static_cast<double>(grid));
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) d[j] = logF(xs[j + 1]) - logF(xs[j]);

  UnimodalityResult r;
  r.step = L / static_cast<double>(grid);
  std::size_t turn = 0;
  bool found = false;
  int prev = 0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const int sg = d[j] > 0 ? 1 : (d[j] < 0 ? -1 : 0);
    if (sg == 0) continue;
    if (prev != 0 && sg != prev) {
      ++r.sign_changes;
      if (prev > 0 && !found) {
        turn = j;
        found = true;
      }
    }
    prev = sg;
  }
  if (!found) turn = (d.front() < 0) ? 0 : xs.size() - 1;
  r.x0 = xs[turn];
  r.derivative = std::log(kappa / r.x0) - 1.0 + q / r.x0;
  r.increasing_before = std::all_of(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(std::min(turn, d.size())),
                                    [](double v) { return v > 0; });
  r.decreasing_after = std::all_of(d.begin() + static_cast<std::ptrdiff_t>(std::min(turn, d.size())), d.end(),
                                   [](double v) { return v < 0; });
  return r;
}

BilinearTerms bilinear_terms(const OrthogonalSystem& sys, const IndexSet& S, const CoeffVector& a,
                             const CoeffVector& b, const IndexSet& I, double p) {
  const std::size_t n = sys.size();
  if (!(p > 2.0)) throw std::invalid_argument("bilinear_terms: p must exceed 2");
  if (a.size() != n || b.size() != n) throw std::invalid_argument("bilinear_terms: length mismatch");
  check_index_set(S, n, "bilinear_terms S");
  check_index_set(I, n, "bilinear_terms I");
  IndexSet IS;
  std::set_intersection(I.begin(), I.end(), S.begin(), S.end(), std::back_inserter(IS));
  for (auto i : a.support())
    if (!std::binary_search(IS.begin(), IS.end(), i))
      throw std::invalid_argument("bilinear_terms: a must be supported on I cap S");
  for (auto i : b.support())
    if (!std::binary_search(S.begin(), S.end(), i))
      throw std::invalid_argument("bilinear_terms: b must be supported on S");
  if (a.norm() > 1.0 + 1e-12 || b.norm() > 1.0 + 1e-12)
    throw std::invalid_argument("bilinear_terms: |a| and |b| must be <= 1");
  if (!I.empty()) {
    const double cap = 1.0 / std::sqrt(static_cast<double>(I.size()));
    for (auto i : b.support())
      if (std::abs(b[i]) > cap + 1e-12)
        throw std::invalid_argument("bilinear_terms: max |b_i| must be <= |I|^{-1/2}");
  }
  const auto fb = synthesize(sys, b);
  const auto g = synthesize(sys, a);
  const auto w = sys.weights();
  double t1 = 0.0, t2 = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double wt = std::pow(1.0 + std::abs(g.values[k]), p - 2.0);
    t1 += w[k] * fb.values[k] * g.values[k] * wt;
    t2 += w[k] * fb.values[k] * fb.values[k] * wt;
  }
  return {std::abs(t1), std::abs(t2)};
}

InequalityReport sumprod_check(std::size_t N, double hi) {
  if (N < 2 || !(hi > 1.0)) throw std::invalid_argument("sumprod_check: need N >= 2 and hi > 1");
  InequalityReport rep;
  rep.name = "sum_le_twice_product";
  rep.description = std::to_string(N) + "x" + std::to_string(N) + " grid on [1," + std::to_string(hi) + "]^2";
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const double A = 1.0 + (hi - 1.0) * static_cast<double>(i) / static_cast<double>(N - 1);
      const double B = 1.0 + (hi - 1.0) * static_cast<double>(j) / static_cast<double>(N - 1);
      const double lhs = A + B, rhs = 2.0 * A * B;
      ++rep.evaluations;
      if (violates(lhs, rhs)) ++rep.violations;
      rep.worst_margin = std::min(rep.worst_margin, rhs - lhs);
    }
  return rep;
}

}  // namespace lambdap
