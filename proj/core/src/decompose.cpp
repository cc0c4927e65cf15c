#include "lambdap/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lambdap {

std::vector<double> Decomposition::reconstruct() const {
  std::vector<double> out(n, 0.0);
  for (const auto& lv : levels)
    for (auto i : lv.block.support()) out[i] += lv.weight * lv.block[i];
  return out;
}

double Decomposition::weight_sum() const {
  double s = 0.0;
  for (const auto& lv : levels) s += lv.weight;
  return s;
}

double Decomposition::weight_square_sum() const {
  double s = 0.0;
  for (const auto& lv : levels) s += lv.weight * lv.weight;
  return s;
}

namespace {

// Dyadic levels of a nonincreasing nonnegative sequence given in sorted
// order; `index` maps sorted positions back to output positions.
template <class Leading, class Entry>
std::vector<DecompositionLevel> dyadic_levels(std::size_t n, const std::vector<std::size_t>& index,
                                              Leading leading, Entry entry) {
  std::vector<DecompositionLevel> levels;
  for (unsigned l = 0; (std::size_t{1} << l) <= n; ++l) {
    const std::size_t lo = (std::size_t{1} << l) - 1;  // 0-based start of block l
    const std::size_t hi = std::min(n, (std::size_t{1} << (l + 1)) - 1);
    const double weight = leading(l, lo);
    if (weight == 0.0) continue;
    std::vector<double> block(n, 0.0);
    for (std::size_t s = lo; s < hi; ++s) block[index[s]] = entry(l, s, weight);
    levels.push_back({l, weight, CoeffVector(std::move(block))});
  }
  return levels;
}

}  // namespace

Decomposition dyadic_decompose_nonneg(std::span<const double> c) {
  const std::size_t n = c.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(c[i] >= 0.0)) throw std::invalid_argument("dyadic_decompose_nonneg: entries must be >= 0");
    if (i > 0 && c[i] > c[i - 1])
      throw std::invalid_argument("dyadic_decompose_nonneg: sequence must be nonincreasing");
    sum += c[i];
  }
  if (sum > 1.0 + 1e-12) throw std::invalid_argument("dyadic_decompose_nonneg: sum must be <= 1");
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), std::size_t{0});
  Decomposition d;
  d.kind = DecompositionKind::nonneg;
  d.n = n;
  d.levels = dyadic_levels(
      n, id, [&](unsigned l, std::size_t lo) { return std::ldexp(c[lo], static_cast<int>(l)); },
      [&](unsigned, std::size_t s, double gamma) { return c[s] / gamma; });
  return d;
}

Decomposition dyadic_decompose_unit(std::span<const double> a) {
  const std::size_t n = a.size();
  double sq = 0.0;
  for (double v : a) {
    if (!std::isfinite(v)) throw std::invalid_argument("dyadic_decompose_unit: non-finite entry");
    sq += v * v;
  }
  if (std::sqrt(sq) > 1.0 + 1e-12) throw std::invalid_argument("dyadic_decompose_unit: |a| must be <= 1");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t x, std::size_t y) { return std::abs(a[x]) > std::abs(a[y]); });
  Decomposition d;
  d.kind = DecompositionKind::unit;
  d.n = n;
  d.levels = dyadic_levels(
      n, perm,
      [&](unsigned l, std::size_t lo) { return std::exp2(l / 2.0) * std::abs(a[perm[lo]]); },
      [&](unsigned, std::size_t s, double lambda) { return a[perm[s]] / lambda; });
  return d;
}

BootstrapSplit bootstrap_split(std::span<const double> a, double gamma, std::optional<double> p) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("bootstrap_split: gamma must lie in (0, 1)");
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("bootstrap_split: empty vector");
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && std::abs(a[i]) > std::abs(a[i - 1]))
      throw std::invalid_argument("bootstrap_split: entries must be sorted by decreasing magnitude");
    sq += a[i] * a[i];
  }
  if (std::abs(std::sqrt(sq) - 1.0) > 1e-9) throw std::invalid_argument("bootstrap_split: |a| must be 1");
  if (p) {
    if (!(*p > 2.0)) throw std::invalid_argument("bootstrap_split: p must exceed 2");
    const double lhs = std::pow(1.0 - gamma * gamma, (*p - 2.0) / 2.0) + std::pow(gamma, *p);
    if (!(lhs < 1.0)) throw std::invalid_argument("bootstrap_split: gamma violates the gamma condition");
  }
  BootstrapSplit s;
  s.gamma = gamma;
  const double g2 = gamma * gamma;
  double prefix = 0.0;
  while (s.m0 < n && prefix + a[s.m0] * a[s.m0] < g2) {
    prefix += a[s.m0] * a[s.m0];
    ++s.m0;
  }
  if (s.m0 >= n) throw std::invalid_argument("bootstrap_split: no index left to drop");
  s.mass_I = prefix;
  for (std::size_t i = 0; i < s.m0; ++i) s.I.push_back(i);
  s.dropped = s.m0;
  for (std::size_t i = s.m0 + 1; i < n; ++i) {
    s.J.push_back(i);
    s.mass_J += a[i] * a[i];
  }
  return s;
}

}  // namespace lambdap
