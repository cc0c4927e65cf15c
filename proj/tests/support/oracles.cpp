#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace oracle {

namespace {
constexpr double kPi = std::numbers::pi;
}

double walsh(std::size_t k, double x) {
  double v = 1.0;
  for (unsigned j = 0; (k >> j) != 0; ++j) {
    if (((k >> j) & 1U) == 0) continue;
    // r_j(x) = sign of sin(2^{j+1} pi x), i.e. -1 on odd 2^{-(j+1)} cells.
    const auto cell = static_cast<long long>(std::floor(x * std::ldexp(1.0, static_cast<int>(j) + 1)));
    v *= (cell % 2 == 0) ? 1.0 : -1.0;
  }
  return v;
}

double trig(std::size_t i, double u) {
  const double f = static_cast<double>(i / 2 + 1);
  return (i % 2 == 0) ? std::cos(2.0 * kPi * f * u) : std::sin(2.0 * kPi * f * u);
}

double family_norm(Family fam, const std::vector<double>& a, double p, std::size_t nodes) {
  double acc = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    const double x = (static_cast<double>(k) + 0.5) / static_cast<double>(nodes);
    double f = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      f += a[i] * (fam == Family::walsh ? walsh(i + 1, x) : trig(i, x));
    acc += std::pow(std::abs(f), p);
  }
  return std::pow(acc / static_cast<double>(nodes), 1.0 / p);
}

double sphere3_sup(Family fam, double p) {
  const std::size_t nodes = fam == Family::walsh ? 16 : 64;
  auto value = [&](double th, double ph) {
    const std::vector<double> a{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
    return family_norm(fam, a, p, nodes);
  };
  constexpr int kT = 200, kP = 400;
  double best = -1.0, bt = 0.0, bp = 0.0;
  for (int i = 0; i <= kT; ++i)
    for (int j = 0; j < kP; ++j) {
      const double th = kPi * i / kT, ph = 2.0 * kPi * j / kP;
      const double v = value(th, ph);
      if (v > best) best = v, bt = th, bp = ph;
    }
  // Pattern search from the best node.
  double h = kPi / kT;
  while (h > 1e-9) {
    bool moved = false;
    for (auto [dt, dp] : std::array<std::pair<double, double>, 4>{{{h, 0}, {-h, 0}, {0, h}, {0, -h}}}) {
      const double v = value(bt + dt, bp + dp);
      if (v > best) {
        best = v, bt += dt, bp += dp;
        moved = true;
      }
    }
    if (!moved) h /= 2.0;
  }
  return best;
}

double trig_l4_quadruple(const std::vector<double>& a) {
  const int K = static_cast<int>((a.size() + 1) / 2);
  std::vector<std::complex<double>> c(2 * K + 1);
  auto at = [&](int m) -> std::complex<double>& { return c[static_cast<std::size_t>(m + K)]; };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int f = static_cast<int>(i / 2 + 1);
    // cos = (e^{+} + e^{-})/2, sin = (e^{+} - e^{-})/(2i)
    if (i % 2 == 0) {
      at(f) += a[i] / 2.0;
      at(-f) += a[i] / 2.0;
    } else {
      at(f) += std::complex<double>(0.0, -a[i] / 2.0);
      at(-f) += std::complex<double>(0.0, a[i] / 2.0);
    }
  }
  std::complex<double> acc = 0.0;
  for (int m1 = -K; m1 <= K; ++m1)
    for (int m2 = -K; m2 <= K; ++m2)
      for (int m3 = -K; m3 <= K; ++m3) {
        const int m4 = m1 + m2 - m3;
        if (m4 < -K || m4 > K) continue;
        acc += at(m1) * at(m2) * std::conj(at(m3)) * std::conj(at(m4));
      }
  return std::pow(acc.real(), 0.25);
}

namespace {
long double binom_pmf(std::size_t l, double delta, std::size_t k) {
  long double c = 1.0L;
  for (std::size_t j = 0; j < k; ++j) c = c * static_cast<long double>(l - j) / static_cast<long double>(j + 1);
  return c * std::pow(static_cast<long double>(delta), static_cast<long double>(k)) *
         std::pow(1.0L - static_cast<long double>(delta), static_cast<long double>(l - k));
}
}  // namespace

double binomial_moment(std::size_t l, double delta, double q) {
  long double acc = 0.0L;
  for (std::size_t k = 1; k <= l; ++k)
    acc += binom_pmf(l, delta, k) * std::pow(static_cast<long double>(k), static_cast<long double>(q));
  return static_cast<double>(acc);
}

double binomial_upper_tail(std::size_t l, double delta, double x) {
  long double acc = 0.0L;
  for (std::size_t k = 0; k <= l; ++k)
    if (static_cast<double>(k) >= x) acc += binom_pmf(l, delta, k);
  return static_cast<double>(acc);
}

double unimodal_root(double kappa, double q) {
  const double target = q * std::numbers::e / kappa;
  double lo = 1.0, hi = 2.0;
  while (hi * std::log(hi) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::log(mid) < target ? lo : hi) = mid;
  }
  return q / std::log(0.5 * (lo + hi));
}

std::size_t max_separated(const std::vector<std::vector<double>>& d, double t) {
  const std::size_t N = d.size();
  std::size_t best = N ? 1 : 0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << N); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (size <= best) continue;
    bool ok = true;
    for (std::size_t i = 0; i < N && ok; ++i)
      for (std::size_t j = i + 1; j < N && ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) && !(d[i][j] > t * (1.0 + 1e-12))) ok = false;
    if (ok) best = size;
  }
  return best;
}

std::size_t min_cover(const std::vector<std::vector<double>>& dc, double t) {
  const std::size_t C = dc.size();
  const std::size_t N = C ? dc.front().size() : 0;
  if (N == 0) return 0;
  // Increasing size: the first size with a covering choice wins.
  for (std::size_t size = 1; size <= C; ++size) {
    std::vector<std::size_t> pick(size);
    std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
      if (pos == size) {
        for (std::size_t i = 0; i < N; ++i) {
          bool cov = false;
          for (auto c : pick)
            if (dc[c][i] <= t * (1.0 + 1e-12)) {
              cov = true;
              break;
            }
          if (!cov) return false;
        }
        return true;
      }
      for (std::size_t c = from; c < C; ++c) {
        pick[pos] = c;
        if (rec(pos + 1, c + 1)) return true;
      }
      return false;
    };
    if (rec(0, 0)) return size;
  }
  throw std::logic_error("min_cover: candidates do not cover the cloud");
}

namespace {

struct TripleEval {
  const TripleInstance& in;
  std::size_t g;
  std::vector<std::vector<std::size_t>> subsets;  // all A with |A| = min(m1, |B1|)

  explicit TripleEval(const TripleInstance& inst) : in(inst), g(inst.weights.size()) {
    const std::size_t k = std::min(in.m1, in.B1.size());
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      if (cur.size() == k) {
        subsets.push_back(cur);
        return;
      }
      for (std::size_t t = from; t < in.B1.size(); ++t) {
        cur.push_back(in.B1[t]);
        rec(t + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }

  double inner(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0.0;
    for (std::size_t k = 0; k < g; ++k) s += in.weights[k] * a[k] * b[k];
    return s;
  }

  // c given as coefficients over B3.
  double value(const std::vector<double>& c) const {
    std::vector<double> wt(g, 0.0);
    for (std::size_t t = 0; t < in.B3.size(); ++t)
      for (std::size_t k = 0; k < g; ++k) wt[k] += c[t] * in.rows[in.B3[t]][k];
    for (double& x : wt) x = std::pow(1.0 + std::abs(x), in.p - 2.0);
    double best = 0.0;
    std::vector<double> psi(g), v(in.B2.size());
    for (const auto& A : subsets) {
      const std::size_t k = A.size();
      for (std::size_t s = 0; s < (std::size_t{1} << k); ++s) {
        std::fill(psi.begin(), psi.end(), 0.0);
        for (std::size_t a = 0; a < k; ++a) {
          const double sg = (s >> a & 1) ? -1.0 : 1.0;
          for (std::size_t j = 0; j < g; ++j) psi[j] += sg * in.rows[A[a]][j] * wt[j];
        }
        for (std::size_t t = 0; t < in.B2.size(); ++t) v[t] = std::abs(inner(psi, in.rows[in.B2[t]]));
        // sup over unit b with m2 entries of <b, v> = norm of the top m2.
        std::vector<double> sorted = v;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        double ss = 0.0;
        for (std::size_t t = 0; t < std::min(in.m2, sorted.size()); ++t) ss += sorted[t] * sorted[t];
        best = std::max(best, std::sqrt(ss));
      }
    }
    return best;
  }
};

}  // namespace

double triple_sup(const TripleInstance& inst) {
  if (inst.m3 > 2) throw std::invalid_argument("triple_sup: m3 <= 2 only");
  const TripleEval ev(inst);
  const std::size_t nc = inst.B3.size();
  std::vector<double> c(nc, 0.0);
  double best = ev.value(c);
  if (nc == 0) return best;

  // Supports: pairs (or singletons when m3 = 1 or only one active index).
  std::vector<std::pair<std::size_t, std::size_t>> supports;
  if (inst.m3 == 1 || nc == 1) {
    for (std::size_t i = 0; i < nc; ++i) supports.emplace_back(i, i);
  } else {
    for (std::size_t i = 0; i < nc; ++i)
      for (std::size_t j = i + 1; j < nc; ++j) supports.emplace_back(i, j);
  }
  constexpr int kR = 16, kA = 64;
  for (auto [i, j] : supports) {
    auto at = [&, i = i, j = j](double r, double th) {
      std::vector<double> cc(nc, 0.0);
      r = std::clamp(r, 0.0, 1.0);
      if (i == j) {
        cc[i] = r * (std::cos(th) >= 0 ? 1.0 : -1.0);
      } else {
        cc[i] = r * std::cos(th);
        cc[j] = r * std::sin(th);
      }
      return ev.value(cc);
    };
    double lb = -1.0, br = 0.0, bth = 0.0;
    for (int a = 1; a <= kR; ++a)
      for (int b = 0; b < (i == j ? 2 : kA); ++b) {
        const double r = static_cast<double>(a) / kR;
        const double th = (i == j ? kPi * b : 2.0 * kPi * b / kA);
        const double v = at(r, th);
        if (v > lb) lb = v, br = r, bth = th;
      }
    double hr = 1.0 / kR, ht = 2.0 * kPi / kA;
    while (hr > 1e-6) {
      bool moved = false;
      for (auto [dr, dt] : std::array<std::pair<double, double>, 4>{{{hr, 0}, {-hr, 0}, {0, ht}, {0, -ht}}}) {
        const double r = std::clamp(br + dr, 0.0, 1.0);
        const double v = at(r, bth + dt);
        if (v > lb) {
          lb = v, br = r, bth += dt;
          moved = true;
        }
      }
      if (!moved) hr /= 2.0, ht /= 2.0;
    }
    best = std::max(best, lb);
  }
  return best;
}

double decoupling_expectation_n1(double u, double v, double w, double p) {
  // eta = 1 (prob 1/3) puts index 0 in R1; eta = 0, zeta = 1 in R2; else R3.
  // Only one of U, V, W is nonzero in each atom, so U V = 0 always.
  const std::array<double, 4> prob{1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0};
  const std::array<std::array<double, 3>, 4> uvw{{{u, 0, 0}, {u, 0, 0}, {0, v, 0}, {0, 0, w}}};
  double e = 0.0;
  for (std::size_t a = 0; a < 4; ++a)
    e += prob[a] * uvw[a][0] * uvw[a][1] * std::pow(1.0 / 3.0 + std::abs(uvw[a][2]), p - 2.0);
  return e;
}

double dirichlet1_l1() { return 1.0 / 3.0 + 2.0 * std::sqrt(3.0) / kPi; }

}  // namespace oracle
