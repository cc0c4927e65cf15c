#include "lambdap/orthosys.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lambdap {

std::string_view to_string(SystemKind kind) { return kind == SystemKind::walsh ? "walsh" : "trig"; }

SystemKind parse_system_kind(std::string_view name) {
  if (name == "walsh") return SystemKind::walsh;
  if (name == "trig") return SystemKind::trig;
  throw std::invalid_argument("unknown system kind: " + std::string(name));
}

OrthogonalSystem::OrthogonalSystem(SystemKind kind, std::size_t n, std::vector<double> nodes,
                                   std::vector<double> weights, std::vector<double> values) {
  if (n == 0) throw std::invalid_argument("OrthogonalSystem: n must be positive");
  const std::size_t g = nodes.size();
  if (g == 0 || weights.size() != g || values.size() != n * g)
    throw std::invalid_argument("OrthogonalSystem: inconsistent grid shapes");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("OrthogonalSystem: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("OrthogonalSystem: weights must sum to 1");
  for (double v : values)
    if (!(std::abs(v) <= 1.0 + 1e-12))
      throw std::invalid_argument("OrthogonalSystem: system is not 1-bounded");

  auto d = std::make_shared<Data>();
  d->kind = kind;
  d->n = n;
  d->uniform = std::all_of(weights.begin(), weights.end(),
                           [&](double w) { return w == weights.front(); });
  d->norms.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < g; ++k) s += weights[k] * values[i * g + k] * values[i * g + k];
    d->norms[i] = std::sqrt(s);
  }
  d->nodes = std::move(nodes);
  d->weights = std::move(weights);
  d->values = std::move(values);
  data_ = std::move(d);
}

bool OrthogonalSystem::operator==(const OrthogonalSystem& other) const noexcept {
  if (data_ == other.data_) return true;
  return kind() == other.kind() && size() == other.size() && grid_size() == other.grid_size();
}

double walsh_value(std::size_t k, std::size_t cell, unsigned K) {
  // Bit j of k selects the Rademacher function r_{j+1}, which reads binary
  // digit j+1 of u = cell / 2^K, i.e. bit K-1-j of cell.
  unsigned parity = 0;
  for (unsigned j = 0; j < K && (k >> j) != 0; ++j)
    if ((k >> j) & 1u) parity ^= (cell >> (K - 1 - j)) & 1u;
  return parity ? -1.0 : 1.0;
}

namespace {

OrthogonalSystem build_walsh(std::size_t n) {
  const unsigned K = static_cast<unsigned>(std::bit_width(n - 1)) + 1;  // ceil(log2 n) + 1
  const std::size_t g = std::size_t{1} << K;
  std::vector<double> nodes(g), weights(g, 1.0 / static_cast<double>(g)), values(n * g);
  for (std::size_t c = 0; c < g; ++c) nodes[c] = static_cast<double>(c) / static_cast<double>(g);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < g; ++c) values[i * g + c] = walsh_value(i + 1, c, K);
  return OrthogonalSystem(SystemKind::walsh, n, std::move(nodes), std::move(weights),
                          std::move(values));
}

}  // namespace

OrthogonalSystem trig_system_on_grid(std::size_t n, std::size_t g) {
  if (n == 0) throw std::invalid_argument("trig system: n must be positive");
  if (g == 0) throw std::invalid_argument("trig system: empty grid");
  std::vector<double> nodes(g), weights(g, 1.0 / static_cast<double>(g)), values(n * g);
  for (std::size_t k = 0; k < g; ++k) nodes[k] = static_cast<double>(k) / static_cast<double>(g);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t freq = i / 2 + 1;
    for (std::size_t k = 0; k < g; ++k) {
      // Reduce the phase exactly in integers before scaling.
      const double phase = 2.0 * std::numbers::pi *
                           static_cast<double>((freq * k) % g) / static_cast<double>(g);
      values[i * g + k] = (i % 2 == 0) ? std::cos(phase) : std::sin(phase);
    }
  }
  return OrthogonalSystem(SystemKind::trig, n, std::move(nodes), std::move(weights),
                          std::move(values));
}

OrthogonalSystem build_system(SystemKind kind, std::size_t n, std::size_t oversample) {
  if (n == 0) throw std::invalid_argument("build_system: n must be positive");
  if (kind == SystemKind::walsh) return build_walsh(n);
  if (oversample < 2) throw std::invalid_argument("build_system: oversample must be >= 2");
  return trig_system_on_grid(n, oversample * n);
}

void synthesize_into(const OrthogonalSystem& sys, std::span<const double> coeffs,
                     std::span<double> out, const IndexSet& indices) {
  const std::size_t n = sys.size(), g = sys.grid_size();
  if (coeffs.size() != n) throw std::invalid_argument("synthesize: coefficient length mismatch");
  if (out.size() != g) throw std::invalid_argument("synthesize: output length mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  auto add = [&](std::size_t i) {
    const double a = coeffs[i];
    if (a == 0.0) return;
    const auto r = sys.row(i);
    for (std::size_t k = 0; k < g; ++k) out[k] += a * r[k];
  };
  if (indices.empty()) {
    for (std::size_t i = 0; i < n; ++i) add(i);
  } else {
    for (std::size_t i : indices) {
      if (i >= n) throw std::invalid_argument("synthesize: index out of range");
      add(i);
    }
  }
}

FunctionSamples synthesize(const OrthogonalSystem& sys, std::span<const double> coeffs) {
  FunctionSamples f{std::vector<double>(sys.grid_size()), sys};
  synthesize_into(sys, coeffs, f.values);
  return f;
}

FunctionSamples synthesize(const OrthogonalSystem& sys, const CoeffVector& coeffs) {
  if (coeffs.size() != sys.size())
    throw std::invalid_argument("synthesize: coefficient length mismatch");
  FunctionSamples f{std::vector<double>(sys.grid_size()), sys};
  synthesize_into(sys, coeffs.entries(), f.values, coeffs.support());
  return f;
}

double analyze_one(const OrthogonalSystem& sys, std::size_t i, std::span<const double> f) {
  const auto r = sys.row(i);
  const auto w = sys.weights();
  double s = 0.0;
  if (sys.uniform_weights()) {
    for (std::size_t k = 0; k < r.size(); ++k) s += r[k] * f[k];
    return s * w[0];
  }
  for (std::size_t k = 0; k < r.size(); ++k) s += w[k] * r[k] * f[k];
  return s;
}

std::vector<double> analyze(const OrthogonalSystem& sys, std::span<const double> f) {
  if (f.size() != sys.grid_size()) throw std::invalid_argument("analyze: length mismatch");
  std::vector<double> out(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) out[i] = analyze_one(sys, i, f);
  return out;
}

double lp_norm(std::span<const double> w, std::span<const double> f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (w.size() != f.size()) throw std::invalid_argument("lp_norm: length mismatch");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  if (p == 2.0) {
    for (std::size_t k = 0; k < f.size(); ++k) s += w[k] * f[k] * f[k];
    return std::sqrt(s);
  }
  if (p == 4.0) {
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double q = f[k] * f[k];
      s += w[k] * q * q;
    }
    return std::sqrt(std::sqrt(s));
  }
  for (std::size_t k = 0; k < f.size(); ++k) s += w[k] * std::pow(std::abs(f[k]), p);
  return std::pow(s, 1.0 / p);
}

double lp_norm(const FunctionSamples& f, double p) {
  if (f.values.size() != f.system.grid_size())
    throw std::invalid_argument("lp_norm: samples do not match the system grid");
  return lp_norm(f.system.weights(), f.values, p);
}

double inner_product(const FunctionSamples& f, const FunctionSamples& g) {
  if (!(f.system == g.system)) throw std::invalid_argument("inner_product: system mismatch");
  const auto w = f.system.weights();
  if (f.values.size() != w.size() || g.values.size() != w.size())
    throw std::invalid_argument("inner_product: samples do not match the system grid");
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * f.values[k] * g.values[k];
  return s;
}

std::vector<double> gram_matrix(const OrthogonalSystem& sys) {
  const std::size_t n = sys.size();
  std::vector<double> G(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = analyze_one(sys, i, sys.row(j));
      G[i * n + j] = G[j * n + i] = v;
    }
  return G;
}

double orthogonality_residual(const OrthogonalSystem& sys) {
  const auto G = gram_matrix(sys);
  const std::size_t n = sys.size();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) m = std::max(m, std::abs(G[i * n + j]));
  return m;
}

double dirichlet_norm(std::size_t n, double r, std::size_t grid) {
  if (!(r >= 1.0)) throw std::invalid_argument("dirichlet_norm: r must be >= 1");
  if (grid == 0) grid = std::max<std::size_t>(64 * std::max<std::size_t>(n, 1), 1u << 16);
  if (grid % 2) ++grid;
  if (grid < 64 * n) throw std::invalid_argument("dirichlet_norm: grid must have >= 64 n nodes");
  const double m = 2.0 * static_cast<double>(n) + 1.0;
  const bool inf = std::isinf(r);
  double acc = 0.0;
  // D_n is even and 1-periodic: integrate over (0, 1/2) at midpoints.
  const std::size_t half = grid / 2;
  for (std::size_t k = 0; k < half; ++k) {
    const double th = (static_cast<double>(k) + 0.5) / static_cast<double>(grid);
    const double d = std::abs(std::sin(m * std::numbers::pi * th) / std::sin(std::numbers::pi * th));
    if (inf)
      acc = std::max(acc, d);
    else
      acc += r == 2.0 ? d * d : std::pow(d, r);
  }
  if (inf) return m;  // attained at u = 0
  return std::pow(2.0 * acc / static_cast<double>(2 * half), 1.0 / r);
}

}  // namespace lambdap
