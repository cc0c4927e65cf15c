#include "lambdap/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lambdap/errors.hpp"
#include "lambdap/parallel.hpp"
#include "lambdap/rng.hpp"
#include "lambdap/selectors.hpp"

namespace lambdap {

namespace {
constexpr double kSlack = 1e-12;

inline bool separated(double d, double t) { return d > t * (1.0 + kSlack); }
inline bool covered(double d, double t) { return d <= t * (1.0 + kSlack); }
}  // namespace

// ---------------------------------------------------------------- norms

Norm Norm::euclidean(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("Norm: dimension must be positive");
  return Norm(NormKind::euclidean, dim, std::nullopt, 2.0);
}

Norm Norm::lq(const OrthogonalSystem& sys, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("Norm: q must be >= 1");
  return Norm(NormKind::lq, sys.size(), sys, q);
}

double Norm::operator()(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("Norm: dimension mismatch");
  if (kind_ == NormKind::euclidean) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  std::vector<double> f(sys_->grid_size());
  synthesize_into(*sys_, x, f);
  return lp_norm(sys_->weights(), f, q_);
}

double Norm::distance(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) throw std::invalid_argument("Norm: dimension mismatch");
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return (*this)(d);
}

double Norm::unit_ball_radius() const {
  if (kind_ == NormKind::euclidean) return 1.0;
  // For q >= 2, ||f||_q >= ||f||_2 = |diag(norms) a|.
  if (q_ < 2.0) throw std::invalid_argument("Norm: unit_ball_radius needs q >= 2");
  double mn = std::numeric_limits<double>::infinity();
  for (double v : sys_->normalization()) mn = std::min(mn, v);
  return 1.0 / mn;
}

double triangle_excess(const NormedCloud& cloud, std::size_t triples, std::uint64_t seed) {
  const std::size_t N = cloud.points.size();
  if (N == 0) throw std::invalid_argument("triangle_excess: empty cloud");
  SequenceRng rng(derive_seed(seed, Stream::cloud));
  double worst = 0.0;
  for (std::size_t t = 0; t < triples; ++t) {
    const auto& x = cloud.points[rng() % N];
    const auto& y = cloud.points[rng() % N];
    const auto& z = cloud.points[rng() % N];
    const double ex = cloud.norm.distance(x, z) - cloud.norm.distance(x, y) - cloud.norm.distance(y, z);
    worst = std::max(worst, ex);
  }
  return worst;
}

// ---------------------------------------------------------------- packing

bool PackingResult::chain_holds() const {
  if (!(D_exact && E_exact && Etilde_exact && D_double_exact && Etilde_double_exact)) return false;
  return *D_exact >= *Etilde_exact && *Etilde_exact >= *E_exact && *E_exact >= *D_double_exact &&
         *Etilde_double_exact <= *E_exact && D_greedy <= *D_exact;
}

namespace {

void check_cloud(const NormedCloud& cloud, const char* what) {
  if (cloud.points.empty()) throw std::invalid_argument(std::string(what) + ": empty cloud");
  for (const auto& p : cloud.points) {
    if (p.size() != cloud.norm.dim())
      throw std::invalid_argument(std::string(what) + ": point dimension mismatch");
    for (double v : p)
      if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite point");
  }
}

// Row-major distance matrix between `a` and `b`.
std::vector<double> distances(const Norm& norm, const std::vector<Point>& a,
                              const std::vector<Point>& b) {
  std::vector<double> d(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) d[i * b.size() + j] = norm.distance(a[i], b[j]);
  return d;
}

// Max size of a subset of [N] with pairwise separation, by subset DP.
std::size_t max_separated(const std::vector<double>& d, std::size_t N, double t) {
  std::vector<std::uint32_t> sep(N, 0);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j && separated(d[i * N + j], t)) sep[i] |= 1u << j;
  const std::uint32_t full = N == 32 ? ~0u : ((1u << N) - 1);
  std::vector<std::uint8_t> ok(static_cast<std::size_t>(full) + 1, 0);
  ok[0] = 1;
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
    const std::uint32_t low = mask & (~mask + 1);
    const std::uint32_t rest = mask ^ low;
    const unsigned i = static_cast<unsigned>(std::countr_zero(low));
    if (ok[rest] && (sep[i] & rest) == rest) {
      ok[mask] = 1;
      best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(mask)));
    }
  }
  return best;
}

// Minimum number of candidate balls covering [N]; cover[c] is the mask of
// points within distance t of candidate c.
std::size_t min_cover(const std::vector<std::uint32_t>& cover, std::size_t N) {
  const std::uint32_t full = (1u << N) - 1;
  constexpr std::uint8_t kInf = 0xFF;
  std::vector<std::uint8_t> dp(static_cast<std::size_t>(full) + 1, kInf);
  dp[0] = 0;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    if (dp[mask] == kInf) continue;
    const unsigned e = static_cast<unsigned>(std::countr_one(mask));
    for (auto c : cover) {
      if (!((c >> e) & 1u)) continue;
      const std::uint32_t nm = mask | c;
      if (dp[nm] > dp[mask] + 1) dp[nm] = static_cast<std::uint8_t>(dp[mask] + 1);
    }
  }
  return dp[full];
}

std::vector<std::uint32_t> cover_masks(const std::vector<double>& d, std::size_t C, std::size_t N,
                                       double t) {
  std::vector<std::uint32_t> out(C, 0);
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t i = 0; i < N; ++i)
      if (covered(d[c * N + i], t)) out[c] |= 1u << i;
  return out;
}

std::size_t internal_cover(const std::vector<double>& dpp, std::size_t N, double t) {
  return min_cover(cover_masks(dpp, N, N, t), N);
}

}  // namespace

PackingResult greedy_packing(const NormedCloud& cloud, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("greedy_packing: t must be positive");
  check_cloud(cloud, "greedy_packing");
  PackingResult r;
  r.t = t;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    bool far = true;
    for (auto c : r.center_indices)
      if (!separated(cloud.norm.distance(cloud.points[i], cloud.points[c]), t)) {
        far = false;
        break;
      }
    if (far) r.center_indices.push_back(i);
  }
  r.D_greedy = r.center_indices.size();
  for (auto c : r.center_indices) r.centers.push_back(cloud.points[c]);
  return r;
}

PackingResult exact_entropy(const NormedCloud& cloud, double t) {
  check_cloud(cloud, "exact_entropy");
  const std::size_t N = cloud.points.size();
  if (N > kExactEntropyLimit)
    throw SizeLimitError("exact_entropy: at most 15 points supported");
  PackingResult r = greedy_packing(cloud, t);

  std::vector<Point> cand = cloud.points;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      Point mid(cloud.points[i].size());
      for (std::size_t k = 0; k < mid.size(); ++k)
        mid[k] = 0.5 * (cloud.points[i][k] + cloud.points[j][k]);
      cand.push_back(std::move(mid));
    }
  const auto dcp = distances(cloud.norm, cand, cloud.points);  // C x N, first N rows = points
  std::vector<double> dpp(dcp.begin(), dcp.begin() + static_cast<std::ptrdiff_t>(N * N));

  r.D_exact = max_separated(dpp, N, t);
  r.D_double_exact = max_separated(dpp, N, 2 * t);
  r.Etilde_exact = internal_cover(dpp, N, t);
  r.Etilde_double_exact = internal_cover(dpp, N, 2 * t);
  r.E_exact = min_cover(cover_masks(dcp, cand.size(), N, t), N);
  return r;
}

// ---------------------------------------------------------------- volume

VolumeCheck volume_bound_check(const Norm& norm, double t, std::size_t samples,
                               std::uint64_t seed) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("volume_bound_check: t must lie in (0, 1)");
  const std::size_t n = norm.dim();
  if (n > 4) throw SizeLimitError("volume_bound_check: dimension must be <= 4");
  const double R = norm.unit_ball_radius();
  const CounterRng rng(derive_seed(seed, Stream::cloud));
  std::vector<Point> pts;
  pts.reserve(samples);
  // Uniform in the euclidean ball of radius R, rejected to B_X.
  for (std::uint64_t draw = 0; pts.size() < samples; ++draw) {
    if (draw > 1000 * samples + 1000) throw std::runtime_error("volume_bound_check: rejection stalled");
    Point x(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal(i, draw);
      s += x[i] * x[i];
    }
    s = std::sqrt(s);
    if (s == 0.0) continue;
    const double radius = R * std::pow(rng.uniform(n + 1, draw), 1.0 / static_cast<double>(n));
    for (double& v : x) v *= radius / s;
    if (norm(x) <= 1.0) pts.push_back(std::move(x));
  }
  VolumeCheck out;
  out.samples = samples;
  out.greedy_count = greedy_packing(NormedCloud{std::move(pts), norm}, t).D_greedy;
  out.bound = std::pow(4.0 / t, static_cast<double>(n));
  return out;
}

// ---------------------------------------------------------------- Levy mean

double levy_alpha(std::size_t n) {
  if (n == 0) throw std::invalid_argument("levy_alpha: n must be positive");
  const double h = static_cast<double>(n) / 2.0;
  return std::exp(std::lgamma(h) - std::lgamma(h + 0.5)) / std::sqrt(2.0);
}

LevyMeanEstimate levy_mean(const Norm& norm, std::size_t trials, std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("levy_mean: need >= 2 trials");
  const std::size_t n = norm.dim();
  const CounterRng rng(derive_seed(seed, Stream::gaussian));
  const auto vals = parallel_map<double>(trials, [&](std::size_t t) {
    Point g(n);
    for (std::size_t i = 0; i < n; i += 2) {
      const auto [a, b] = rng.normal2(i / 2, t);
      g[i] = a;
      if (i + 1 < n) g[i + 1] = b;
    }
    return norm(g);
  });
  double mean = 0.0, sq = 0.0;
  for (double v : vals) {
    mean += v;
    sq += v * v;
  }
  const double T = static_cast<double>(trials);
  mean /= T;
  const double var = std::max(0.0, sq / T - mean * mean) * T / (T - 1.0);
  LevyMeanEstimate e;
  e.n = n;
  e.q = norm.q();
  e.alpha_n = levy_alpha(n);
  e.M_X = e.alpha_n * mean;
  e.stderr_ = e.alpha_n * std::sqrt(var / T);
  return e;
}

// ---------------------------------------------------------------- integral

double entropy_integral(std::span<const double> radii, std::span<const double> counts, double B) {
  if (!(B > 0.0)) throw std::invalid_argument("entropy_integral: B must be positive");
  if (radii.empty() || radii.size() != counts.size())
    throw std::invalid_argument("entropy_integral: radii and counts must match and be nonempty");
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > 0.0)) throw std::invalid_argument("entropy_integral: radii must be positive");
    if (!(counts[j] >= 1.0)) throw std::invalid_argument("entropy_integral: counts must be >= 1");
    if (j > 0 && !(radii[j] < radii[j - 1]))
      throw std::invalid_argument("entropy_integral: radii must be strictly decreasing");
    if (j > 0 && counts[j] < counts[j - 1])
      throw std::invalid_argument("entropy_integral: counts must be nonincreasing in t");
  }
  double acc = 0.0;
  const std::size_t J = radii.size();
  for (std::size_t j = 0; j < J; ++j) {
    const double hi = j == 0 ? std::max(radii[0], B) : radii[j];
    const double lo = j + 1 < J ? radii[j + 1] : 0.0;
    const double a = std::min(lo, B), b = std::min(hi, B);
    if (b > a) acc += (b - a) * std::sqrt(std::log(counts[j]));
  }
  return acc;
}

// ---------------------------------------------------------------- reduction

unsigned reduction_levels(double t) {
  if (!(t > 2.0)) throw std::invalid_argument("support_reduce: t must exceed 2");
  unsigned k = static_cast<unsigned>(std::floor(2.0 * std::log2(t)));
  // Guard against log2 rounding at exact powers of sqrt 2.
  while (std::exp2((k + 1) / 2.0) <= t) ++k;
  while (k > 0 && std::exp2(k / 2.0) > t) --k;
  if (k > 60) throw std::invalid_argument("support_reduce: t too large");
  return k;
}

ReductionResult reduction_draw(const OrthogonalSystem& sys, const CoeffVector& f, double t,
                               double q, std::uint64_t seed, std::uint64_t draw) {
  if (f.size() != sys.size()) throw std::invalid_argument("support_reduce: coefficient length mismatch");
  if (!(q >= 2.0)) throw std::invalid_argument("support_reduce: q must be >= 2");
  if (f.support().empty()) throw std::invalid_argument("support_reduce: f must be nonzero");
  ReductionResult r;
  r.k = reduction_levels(t);
  r.A = f.support();
  const std::size_t m = r.A.size(), n = sys.size(), g = sys.grid_size();
  const unsigned k = r.k;
  const CounterRng rng(derive_seed(seed, Stream::signs));

  r.signs.assign(m, std::vector<int>(k));
  for (std::size_t a = 0; a < m; ++a)
    for (unsigned j = 0; j < k; j += 2) {
      const auto [u0, u1] = rng.uniform2(r.A[a], draw * 32 + j / 2);
      r.signs[a][j] = u0 < 0.5 ? -1 : 1;
      if (j + 1 < k) r.signs[a][j + 1] = u1 < 0.5 ? -1 : 1;
    }

  // Telescoping layers: Phi = sum_l sum_i a_i prod_{j<l}(1 - eps^j) eps^l phi_i,
  // E = sum_i a_i prod_{j<=k}(1 - eps^j) phi_i.
  std::vector<double> phi_vals(g, 0.0), e_vals(g, 0.0), layer(n);
  std::vector<long long> prod(m, 1);
  r.phi_multiplier.assign(m, 0);
  for (unsigned l = 0; l < k; ++l) {
    std::fill(layer.begin(), layer.end(), 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      const long long step = prod[a] * r.signs[a][l];
      r.phi_multiplier[a] += step;
      layer[r.A[a]] = f[r.A[a]] * static_cast<double>(step);
      prod[a] *= 1 - r.signs[a][l];
    }
    std::vector<double> lv(g);
    synthesize_into(sys, layer, lv, r.A);
    for (std::size_t k2 = 0; k2 < g; ++k2) phi_vals[k2] += lv[k2];
  }
  r.e_multiplier = prod;
  std::vector<double> ec(n, 0.0), pc(n, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    ec[r.A[a]] = f[r.A[a]] * static_cast<double>(prod[a]);
    pc[r.A[a]] = f[r.A[a]] * static_cast<double>(r.phi_multiplier[a]);
    if (prod[a] != 0) r.residual_support.push_back(r.A[a]);
  }
  synthesize_into(sys, ec, e_vals, r.A);
  r.residual = CoeffVector(std::move(ec));
  r.phi = CoeffVector(std::move(pc));

  const auto w = sys.weights();
  r.phi_norm = lp_norm(w, phi_vals, q);
  r.e_norm2 = lp_norm(w, e_vals, 2.0);
  const auto fv = synthesize(sys, f);
  std::vector<double> diff(g);
  for (std::size_t j = 0; j < g; ++j) {
    diff[j] = fv.values[j] - e_vals[j];
    r.reconstruction_error =
        std::max(r.reconstruction_error, std::abs(phi_vals[j] + e_vals[j] - fv.values[j]));
  }
  r.approx_error = lp_norm(w, diff, q);

  double s = 0.0;
  for (unsigned l = 1; l <= k; ++l) s += std::exp2(l / 2.0);
  r.m1_hat = std::sqrt(q) * s;
  r.accepted = r.phi_norm < 10.0 * r.m1_hat &&
               static_cast<double>(r.residual_support.size()) <
                   10.0 * std::exp2(-static_cast<double>(k)) * static_cast<double>(m) &&
               r.e_norm2 < 10.0 * std::exp2(k / 2.0);
  r.tries = 1;
  return r;
}

ReductionResult support_reduce(const OrthogonalSystem& sys, const CoeffVector& f, double t,
                               double q, int max_tries, std::uint64_t seed) {
  reduction_levels(t);  // validates t
  if (max_tries < 1) throw std::invalid_argument("support_reduce: max_tries must be positive");
  if (std::abs(f.norm() - 1.0) > 1e-9) throw std::invalid_argument("support_reduce: |f| must be 1");
  ReductionResult r;
  for (int tr = 0; tr < max_tries; ++tr) {
    r = reduction_draw(sys, f, t, q, seed, static_cast<std::uint64_t>(tr));
    r.tries = tr + 1;
    if (r.accepted) break;
  }
  return r;
}

ReductionStats support_reduction_stats(const OrthogonalSystem& sys, const CoeffVector& f,
                                       double t, double q, std::size_t draws, std::uint64_t seed) {
  if (draws < 2) throw std::invalid_argument("support_reduction_stats: need >= 2 draws");
  const auto results = parallel_map<ReductionResult>(
      draws, [&](std::size_t d) { return reduction_draw(sys, f, t, q, seed, d); });
  ReductionStats st;
  st.draws = draws;
  st.k = results.front().k;
  const double m = static_cast<double>(f.support().size());
  st.expected_support = std::exp2(-static_cast<double>(st.k)) * m;
  double sum = 0.0, sq = 0.0, acc = 0.0;
  for (const auto& r : results) {
    const double s = static_cast<double>(r.residual_support.size());
    sum += s;
    sq += s * s;
    acc += r.accepted;
    st.max_reconstruction_error = std::max(st.max_reconstruction_error, r.reconstruction_error);
    for (std::size_t a = 0; a < r.A.size(); ++a) {
      const bool all_minus = std::all_of(r.signs[a].begin(), r.signs[a].end(),
                                         [](int e) { return e == -1; });
      const bool in_res = std::binary_search(r.residual_support.begin(),
                                             r.residual_support.end(), r.A[a]);
      const long long full = 1LL << r.k;
      if (r.phi_multiplier[a] + r.e_multiplier[a] != 1 || all_minus != in_res ||
          r.e_multiplier[a] != (all_minus ? full : 0))
        st.multipliers_exact = false;
    }
  }
  const double D = static_cast<double>(draws);
  st.mean_support = sum / D;
  st.stderr_support = std::sqrt(std::max(0.0, sq / D - st.mean_support * st.mean_support) / (D - 1.0));
  st.accept_freq = acc / D;
  return st;
}

// ---------------------------------------------------------------- chaining

ChainingCheck chaining_bound_check(const std::vector<Point>& cloud, std::size_t m, double delta,
                                   double q0, std::size_t trials, std::uint64_t seed) {
  if (!(delta > 0.0 && delta <= 0.5))
    throw std::invalid_argument("chaining_bound_check: delta must lie in (0, 1/2]");
  if (cloud.empty()) throw std::invalid_argument("chaining_bound_check: empty cloud");
  if (cloud.size() > 40) throw SizeLimitError("chaining_bound_check: at most 40 points");
  if (m == 0) throw std::invalid_argument("chaining_bound_check: m must be positive");
  if (!(q0 >= 1.0)) throw std::invalid_argument("chaining_bound_check: q0 must be >= 1");
  if (trials < 1) throw std::invalid_argument("chaining_bound_check: trials must be positive");
  const std::size_t n = cloud.front().size();
  for (const auto& x : cloud) {
    if (x.size() != n) throw std::invalid_argument("chaining_bound_check: dimension mismatch");
    for (double v : x)
      if (!(v >= 0.0)) throw std::invalid_argument("chaining_bound_check: points must be nonnegative");
  }

  const auto sups = parallel_map<double>(trials, [&](std::size_t t) {
    std::vector<std::uint8_t> xi(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = selector_bit(seed, i, t, delta);
    double best = 0.0;
    std::vector<double> v(n);
    for (const auto& x : cloud) {
      for (std::size_t i = 0; i < n; ++i) v[i] = xi[i] ? x[i] : 0.0;
      const std::size_t k = std::min(m, n);
      std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(),
                        std::greater<>());
      best = std::max(best, std::accumulate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), 0.0));
    }
    return best;
  });
  double acc = 0.0;
  for (double s : sups) acc += std::pow(s, q0);

  ChainingCheck out;
  out.lhs = std::pow(acc / static_cast<double>(trials), 1.0 / q0);
  const Norm e = Norm::euclidean(n);
  for (const auto& x : cloud) out.B = std::max(out.B, e(x));

  if (out.B > 0.0) {
    const std::size_t N = cloud.size();
    const auto d = distances(e, cloud, cloud);
    constexpr std::size_t J = 64;
    std::vector<double> radii(J), counts(J);
    const bool exact = N <= kExactEntropyLimit;
    out.count_kind = exact ? "exact_internal_cover" : "greedy_packing";
    for (std::size_t j = 0; j < J; ++j) {
      radii[j] = out.B * static_cast<double>(J - j) / static_cast<double>(J);
      if (exact) {
        counts[j] = static_cast<double>(internal_cover(d, N, radii[j]));
      } else {
        // A maximal t-separated set is a t-net with internal centers.
        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < N; ++i) {
          bool far = true;
          for (auto c : kept)
            if (!separated(d[i * N + c], radii[j])) {
              far = false;
              break;
            }
          if (far) kept.push_back(i);
        }
        counts[j] = static_cast<double>(kept.size());
      }
      if (j > 0) counts[j] = std::max(counts[j], counts[j - 1]);
    }
    out.entropy = entropy_integral(radii, counts, out.B);
  } else {
    out.count_kind = "degenerate";
  }
  const double L = std::log(1.0 / delta);
  out.rhs = std::sqrt(delta * static_cast<double>(m) + q0 / L) * out.B + out.entropy / std::sqrt(L);
  out.ratio = out.rhs > 0 ? out.lhs / out.rhs : 0.0;
  return out;
}

// ---------------------------------------------------------------- P_m scan

namespace {

double binom(std::size_t n, std::size_t k) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

std::vector<IndexSet> all_supports(std::size_t n, std::size_t m) {
  std::vector<IndexSet> out;
  IndexSet cur(m);
  std::iota(cur.begin(), cur.end(), std::size_t{0});
  while (true) {
    out.push_back(cur);
    std::size_t i = m;
    while (i > 0 && cur[i - 1] == n - m + (i - 1)) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < m; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace

std::vector<Point> sample_pm_pool(std::size_t n, std::size_t m, std::size_t pool_limit,
                                  std::uint64_t seed) {
  if (m == 0 || m > n) throw std::invalid_argument("sample_pm_pool: need 1 <= m <= n");
  if (pool_limit == 0) throw std::invalid_argument("sample_pm_pool: pool_limit must be positive");
  SequenceRng rng(derive_seed(seed, Stream::sphere));
  std::vector<IndexSet> supports;
  if (binom(n, m) <= 500) {
    supports = all_supports(n, m);
  } else {
    for (int s = 0; s < 500; ++s) {
      IndexSet all(n);
      std::iota(all.begin(), all.end(), std::size_t{0});
      for (std::size_t i = 0; i < m; ++i) std::swap(all[i], all[i + rng() % (n - i)]);
      all.resize(m);
      std::sort(all.begin(), all.end());
      supports.push_back(std::move(all));
    }
  }
  const double flat = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<Point> pool;
  const bool all_signs = m < 20;
  for (const auto& S : supports) {
    const std::size_t patterns = all_signs ? (std::size_t{1} << m) : 1;
    for (std::size_t pat = 0; pat < patterns; ++pat) {
      Point x(n, 0.0);
      for (std::size_t i = 0; i < m; ++i) x[S[i]] = ((pat >> i) & 1u) ? -flat : flat;
      pool.push_back(std::move(x));
    }
  }
  if (pool.size() > pool_limit) {
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(pool_limit);
    return pool;
  }
  for (std::size_t r = 0; pool.size() < pool_limit; ++r) {
    const auto& S = supports[r % supports.size()];
    Point x(n, 0.0);
    double s = 0.0;
    for (auto i : S) {
      x[i] = rng.normal();
      s += x[i] * x[i];
    }
    s = std::sqrt(s);
    if (s == 0.0) continue;
    for (auto i : S) x[i] /= s;
    pool.push_back(std::move(x));
  }
  return pool;
}

std::vector<ScanRow> entropy_scaling_scan(const OrthogonalSystem& sys,
                                          std::span<const std::size_t> m_list,
                                          std::span<const double> t_list, double q,
                                          std::size_t pool_limit, std::uint64_t seed) {
  const std::size_t n = sys.size();
  if (n > 12) throw SizeLimitError("entropy_scaling_scan: n must be <= 12");
  if (pool_limit > 2000) throw SizeLimitError("entropy_scaling_scan: pool must be <= 2000 points");
  if (!(q >= 1.0)) throw std::invalid_argument("entropy_scaling_scan: q must be >= 1");
  for (auto m : m_list)
    if (m == 0 || m > n) throw std::invalid_argument("entropy_scaling_scan: need 1 <= m <= n");
  for (double t : t_list)
    if (!(t > 0.0)) throw std::invalid_argument("entropy_scaling_scan: t must be positive");

  const std::size_t g = sys.grid_size();
  const auto w = sys.weights();
  std::vector<ScanRow> rows;
  for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
    const std::size_t m = m_list[mi];
    const auto pool = sample_pm_pool(n, m, pool_limit, derive_seed(seed, Stream::sphere, m));
    std::vector<std::vector<double>> vals(pool.size(), std::vector<double>(g));
    for (std::size_t i = 0; i < pool.size(); ++i) synthesize_into(sys, pool[i], vals[i]);
    const auto counts = parallel_map<std::size_t>(t_list.size(), [&](std::size_t ti) {
      const double rad = 2.0 * t_list[ti];
      std::vector<std::size_t> kept;
      std::vector<double> diff(g);
      for (std::size_t i = 0; i < vals.size(); ++i) {
        bool far = true;
        for (auto c : kept) {
          for (std::size_t k = 0; k < g; ++k) diff[k] = vals[i][k] - vals[c][k];
          if (!separated(lp_norm(w, diff, q), rad)) {
            far = false;
            break;
          }
        }
        if (far) kept.push_back(i);
      }
      return kept.size();
    });
    for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
      ScanRow row;
      row.n = n;
      row.m = m;
      row.t = t_list[ti];
      row.q = q;
      row.count_kind = "greedy_packing_2t";
      row.count = counts[ti];
      const double M = static_cast<double>(m), L = std::log(1.0 + static_cast<double>(n) / M);
      row.bound = row.t < 8.0 ? M * L * std::log(1.0 + 1.0 / row.t) : M * L / (row.t * row.t);
      row.ratio = std::log(static_cast<double>(row.count)) / row.bound;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::optional<double> fit_entropy_exponent(std::span<const ScanRow> rows) {
  std::vector<double> xs, ys;
  for (const auto& r : rows)
    if (r.count > 1 && r.t > 0) {
      xs.push_back(-std::log(r.t));
      ys.push_back(std::log(std::log(static_cast<double>(r.count))));
    }
  if (xs.size() < 2) return std::nullopt;
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

// ---------------------------------------------------------------- products

ProductEntropyCheck product_entropy_check(const std::vector<Point>& X,
                                          const std::vector<Point>& Xp, double t) {
  if (X.empty() || Xp.empty()) throw std::invalid_argument("product_entropy_check: empty cloud");
  if (X.size() * Xp.size() > kExactEntropyLimit)
    throw SizeLimitError("product_entropy_check: |X| |X'| must be <= 15");
  if (!(t > 0.0)) throw std::invalid_argument("product_entropy_check: t must be positive");
  const std::size_t d = X.front().size();
  std::vector<Point> sum;
  for (const auto& x : X)
    for (const auto& y : Xp) {
      if (x.size() != d || y.size() != d)
        throw std::invalid_argument("product_entropy_check: dimension mismatch");
      Point s(d);
      for (std::size_t k = 0; k < d; ++k) s[k] = x[k] + y[k];
      sum.push_back(std::move(s));
    }
  const Norm e = Norm::euclidean(d);
  ProductEntropyCheck out;
  out.sum_cover = internal_cover(distances(e, sum, sum), sum.size(), t);
  out.left = internal_cover(distances(e, X, X), X.size(), t / 2);
  out.right = internal_cover(distances(e, Xp, Xp), Xp.size(), t / 2);
  return out;
}

}  // namespace lambdap
