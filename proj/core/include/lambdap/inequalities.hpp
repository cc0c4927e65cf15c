#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "lambdap/coeff.hpp"
#include "lambdap/orthosys.hpp"

namespace lambdap {

/// Pointwise checks count violations at tolerance 1e-12 max(1, |rhs|).
struct InequalityReport {
  std::string name;
  std::string description;  // grid or trial description
  std::size_t evaluations = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // min(rhs - lhs)
  std::optional<double> fitted_constant;
};

/// 2 < p <= 3: |x+y|^p <= (x+y)^2|y|^{p-2} + (1+|x|)^p + 2x(1+|x|)^{p-2}y
///   + (1+|x|)^{p-2}y^2 on [-X, X]^2.
/// p > 3: fits the least C with |x+y|^p <= |x+y|^{p-2}x^2 + C(|x|+|y|)^{p-3}|y|^3
///   + 2x|x|^{p-2}y + (2p-3)|x|^{p-2}y^2 over the grid.
InequalityReport check_numerical(double p, double X, double step);

struct GammaSolution {
  double gamma = 0.0;
  double margin = 0.0;      // may underflow to 0 as p -> 2
  double log_margin = 0.0;  // always finite when feasible
};

/// Maximizes 1 - [(1-g^2)^{(p-2)/2} + g^p] over g in (0, 1); with C, the
/// margin is g^2 - C g^3 instead.  Throws InfeasibleError if no g works.
GammaSolution solve_gamma(double p, std::optional<double> C = std::nullopt);

struct DecouplingResult {
  double lhs = 0.0;        // |E[phi1(U) phi2(V) phi3(W)] - phi1(EU) phi2(EV) phi3(EW)|
  double rhs = 0.0;        // (1 + |sum u| + |sum v| + |sum w|)^2
  double ratio = 0.0;
  double mc_mean = 0.0;    // MC estimate of the expectation
  double mc_stderr = 0.0;
  double target = 0.0;     // phi1(EU) phi2(EV) phi3(EW)
  std::array<double, 3> mean_part_sizes{};  // empirical E|R^j|
};

/// phi1 = phi2 = x, phi3 = (1/3 + |x|)^{p-2}; |u|, |v|, |w| <= 1.
DecouplingResult decoupling_check(std::span<const double> u, std::span<const double> v,
                                  std::span<const double> w, double p, std::size_t trials,
                                  std::uint64_t seed);

struct BernsteinResult {
  double bound = 0.0;  // exp(-(u^2/2) / (l delta + u/3))
  double empirical = 0.0;
  double sigma = 0.0;  // binomial sd of the frequency at the bound
  bool passed() const { return empirical <= bound + 3.0 * sigma; }
};

/// P(sum_{i<l} (xi_i - delta) >= u).
BernsteinResult bernstein_tail(std::size_t l, double delta, double u, std::size_t trials,
                               std::uint64_t seed);

enum class MzVariables { rademacher, centered_selectors };

struct MzResult {
  double lhs = 0.0;  // E|sum X_i|^p
  double lhs_stderr = 0.0;
  double rhs = 0.0;  // E(sum X_i^2)^{p/2}
  double rhs_stderr = 0.0;
  double ratio = 0.0;
};

MzResult mz_check(double p, std::size_t n, std::size_t trials, std::uint64_t seed,
                  MzVariables kind = MzVariables::rademacher, double delta = 0.3);

struct UnimodalityResult {
  double x0 = 0.0;           // grid node where log F turns from increasing to decreasing
  int sign_changes = 0;      // of consecutive differences
  double derivative = 0.0;   // d/dx log F at x0
  double step = 0.0;         // log-grid spacing
  bool increasing_before = false;
  bool decreasing_after = false;
};

/// F(x) = (kappa/x)^x x^q on a log grid over (1, 10 q), 0 < kappa < q.
UnimodalityResult unimodality_check(double kappa, double q, std::size_t grid = 4096);

struct BilinearTerms {
  double T1 = 0.0;  // |<f_b, g (1 + |g|)^{p-2}>|, g = sum_{I cap S} a_i phi_i
  double T2 = 0.0;  // |<f_b, f_b (1 + |g|)^{p-2}>|, f_b = sum_S b_i phi_i
};

/// Requires supp a within I cap S, supp b within S, |a|, |b| <= 1 and
/// max |b_i| <= |I|^{-1/2}.
BilinearTerms bilinear_terms(const OrthogonalSystem& sys, const IndexSet& S, const CoeffVector& a,
                             const CoeffVector& b, const IndexSet& I, double p);

/// A + B <= 2AB on an N x N grid of [1, hi]^2.
InequalityReport sumprod_check(std::size_t N = 100, double hi = 100.0);

}  // namespace lambdap
