#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lambdap/coeff.hpp"
#include "lambdap/orthosys.hpp"

namespace lambdap {

enum class NormKind { euclidean, lq };

/// Norm on coefficient space R^dim: euclidean, or a -> ||synthesize(a)||_q
/// for an orthogonal system.
class Norm {
 public:
  static Norm euclidean(std::size_t dim);
  static Norm lq(const OrthogonalSystem& sys, double q);

  NormKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  double q() const noexcept { return q_; }  // 2 for euclidean

  double operator()(std::span<const double> x) const;
  double distance(std::span<const double> x, std::span<const double> y) const;
  /// R such that ||x|| <= 1 implies |x|_2 <= R.
  double unit_ball_radius() const;

 private:
  Norm(NormKind kind, std::size_t dim, std::optional<OrthogonalSystem> sys, double q)
      : kind_(kind), dim_(dim), sys_(std::move(sys)), q_(q) {}

  NormKind kind_;
  std::size_t dim_;
  std::optional<OrthogonalSystem> sys_;
  double q_;
};

using Point = std::vector<double>;

struct NormedCloud {
  std::vector<Point> points;
  Norm norm;
};

/// Largest |d(x,z) - d(x,y) - d(y,z)| excess over `triples` random triples
/// drawn from the cloud (0 when the triangle inequality holds).
double triangle_excess(const NormedCloud& cloud, std::size_t triples, std::uint64_t seed);

/// Distances are compared with relative slack 1e-12: "separated" means
/// d > t (1 + 1e-12), "covered" means d <= t (1 + 1e-12).
struct PackingResult {
  double t = 0.0;
  std::size_t D_greedy = 0;
  std::optional<std::size_t> D_exact, E_exact, Etilde_exact;
  std::optional<std::size_t> D_double_exact, Etilde_double_exact;  // at radius 2t
  std::vector<std::size_t> center_indices;  // greedy centers
  std::vector<Point> centers;

  /// D(t) >= Etilde(t) >= E(t) >= D(2t) and Etilde(2t) <= E(t).
  bool chain_holds() const;
};

PackingResult greedy_packing(const NormedCloud& cloud, double t);

/// Exhaustive D, free-center E and internal-center Etilde at t and 2t.
/// E draws centers from the cloud and all pairwise midpoints, so it is an
/// upper bound on the covering number with unrestricted centers.
PackingResult exact_entropy(const NormedCloud& cloud, double t);

/// Largest size accepted by exact_entropy.
inline constexpr std::size_t kExactEntropyLimit = 15;

struct VolumeCheck {
  std::size_t greedy_count = 0;
  double bound = 0.0;  // (4/t)^n
  std::size_t samples = 0;
  bool passed() const { return static_cast<double>(greedy_count) <= bound; }
};

/// Greedy t-packing of a uniform (rejection) sample of B_X, dim <= 4.
VolumeCheck volume_bound_check(const Norm& norm, double t, std::size_t samples,
                               std::uint64_t seed);

struct LevyMeanEstimate {
  std::size_t n = 0;
  double q = 0.0;
  double M_X = 0.0;
  double stderr_ = 0.0;
  double alpha_n = 0.0;
};

/// Gamma(n/2) / (sqrt 2 Gamma((n+1)/2)) via lgamma.
double levy_alpha(std::size_t n);

/// M_X = alpha_n E||sum g_i e_i||.
LevyMeanEstimate levy_mean(const Norm& norm, std::size_t trials, std::uint64_t seed);

/// Right-endpoint sum of sqrt(log N) over [0, B].  radii strictly
/// decreasing, counts[j] = N(radii[j]) nondecreasing along the list.
/// N on (radii[j+1], radii[j]] is counts[j]; (0, radii.back()] uses the
/// last count and (radii[0], B] uses counts[0].
double entropy_integral(std::span<const double> radii, std::span<const double> counts, double B);

struct ReductionResult {
  unsigned k = 0;
  IndexSet A;                            // supp f
  std::vector<std::vector<int>> signs;   // signs[a][j] for A[a], j < k
  double phi_norm = 0.0;                 // ||Phi||_q
  double e_norm2 = 0.0;                  // ||E||_2
  IndexSet residual_support;             // A_eps
  CoeffVector residual;                  // coefficients of E
  CoeffVector phi;                       // coefficients of Phi
  std::vector<long long> phi_multiplier;  // integer mu_i for A[a]
  std::vector<long long> e_multiplier;    // integer nu_i for A[a], mu + nu = 1
  double approx_error = 0.0;             // ||f - E||_q
  double reconstruction_error = 0.0;     // max_nodes |Phi + E - f|
  bool accepted = false;
  int tries = 0;
  double m1_hat = 0.0;  // sqrt(q) sum_{l<=k} 2^{l/2}
};

/// k = floor(2 log2 t).
unsigned reduction_levels(double t);

/// One sign draw (try index `draw`) of the support-reduction split.
ReductionResult reduction_draw(const OrthogonalSystem& sys, const CoeffVector& f, double t,
                               double q, std::uint64_t seed, std::uint64_t draw);

/// Retries reduction_draw until all three thresholds hold.
ReductionResult support_reduce(const OrthogonalSystem& sys, const CoeffVector& f, double t,
                               double q, int max_tries, std::uint64_t seed);

struct ReductionStats {
  std::size_t draws = 0;
  unsigned k = 0;
  double mean_support = 0.0;
  double stderr_support = 0.0;
  double expected_support = 0.0;  // 2^{-k} m
  double accept_freq = 0.0;
  double max_reconstruction_error = 0.0;
  bool multipliers_exact = true;  // mu + nu == 1 and A_eps membership, every draw
};

ReductionStats support_reduction_stats(const OrthogonalSystem& sys, const CoeffVector& f,
                                       double t, double q, std::size_t draws, std::uint64_t seed);

struct ChainingCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double B = 0.0;
  double entropy = 0.0;  // entropy_integral term
  std::string count_kind;
};

/// Cloud in the positive orthant, <= 40 points.  Entropy numbers come from
/// exact Etilde (<= 15 points) or greedy packing counts otherwise.
ChainingCheck chaining_bound_check(const std::vector<Point>& cloud, std::size_t m, double delta,
                                   double q0, std::size_t trials, std::uint64_t seed);

struct ScanRow {
  std::size_t n = 0;
  std::size_t m = 0;
  double t = 0.0;
  double q = 0.0;
  std::string count_kind;
  std::size_t count = 0;
  double bound = 0.0;  // reference m log(1+n/m) log(1+1/t) or m t^-2 log(1+n/m)
  double ratio = 0.0;  // log(count) / bound
};

/// Sampled pool of P_m: every support (or random ones beyond 500), flat
/// sign patterns and sphere-uniform coefficients, capped at pool_limit.
std::vector<Point> sample_pm_pool(std::size_t n, std::size_t m, std::size_t pool_limit,
                                  std::uint64_t seed);

/// Greedy packing at radius 2t of a sampled P_m pool: a lower bound for
/// N_q(P_m, t).  n <= 12 and pool_limit <= 2000.
std::vector<ScanRow> entropy_scaling_scan(const OrthogonalSystem& sys,
                                          std::span<const std::size_t> m_list,
                                          std::span<const double> t_list, double q,
                                          std::size_t pool_limit, std::uint64_t seed);

/// Least-squares slope nu of log(log count) against -log t over rows with
/// count > 1 (fitted exponent of count ~ exp(c t^-nu)).
std::optional<double> fit_entropy_exponent(std::span<const ScanRow> rows);

struct ProductEntropyCheck {
  std::size_t sum_cover = 0;  // Etilde(X + X', t)
  std::size_t left = 0, right = 0;  // Etilde(X, t/2), Etilde(X', t/2)
  bool passed() const { return sum_cover <= left * right; }
};

/// Euclidean clouds; |X| |X'| <= 15.
ProductEntropyCheck product_entropy_check(const std::vector<Point>& X,
                                          const std::vector<Point>& Xp, double t);

}  // namespace lambdap
