#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lambdap/coeff.hpp"
#include "lambdap/orthosys.hpp"
#include "lambdap/selectors.hpp"

namespace lambdap {

/// Lower bound (witnessed) for K_S = sup_{|a| <= 1} ||sum_{i in S} a_i phi_i||_p.
struct LambdaEstimate {
  double value = 0.0;
  CoeffVector argmax;  // unit vector supported on S
  int restarts_used = 0;
  bool converged = false;
  double p = 0.0;
  int iterations = 0;  // summed over restarts
  /// Steps where the objective dropped by more than 1e-12 (relative).
  std::size_t monotonicity_violations = 0;
  /// Objective after each step of the restart that produced `value`.
  std::vector<double> trace;
};

struct KsOptions {
  int restarts = 16;  // restart 0 is flat, the rest seeded Gaussian
  double tol = 1e-8;  // relative objective change
  int max_iter = 500;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // restarts; callers usually parallelize outside
};

/// Power iteration a <- normalize(adjoint(|f|^{p-2} f)) for the 2 -> p norm.
/// p = 2 is accepted as a diagnostic.
LambdaEstimate estimate_ks(const OrthogonalSystem& sys, const IndexSet& S, double p,
                           const KsOptions& opts = {});

/// sqrt(s) / ||D_n||_{p'}: flat-coefficient lower bound for trig K_S, |S| = s.
double ks_flat_lower_bound(std::size_t n, std::size_t s, double p);

struct InterferenceBound {
  unsigned k = 0;
  std::size_t set_size = 0;  // floor(4^{k/p})
  double value = 0.0;        // (int_{|u|<=2^-k/10} |D|^r)^{1/r} / sqrt(|S_k|)
  double reference = 0.0;    // 2^{k (1/p - 1/r)}
  double ratio = 0.0;
};

/// Constructive-interference lower bound for S_k = {2^k, ..., 2^k + s - 1}
/// by the midpoint rule on `nodes` points over the window.
InterferenceBound interference_lower_bound(unsigned k, double p, double r,
                                           std::size_t nodes = 4096);

struct TripleWitness {
  IndexSet A;
  CoeffVector b, c;
};

struct TripleNormEstimate {
  std::size_t m1 = 0, m2 = 0, m3 = 0;
  double value = 0.0;  // L^{q0} average over omega_1 draws, divided by sqrt(m1)
  TripleWitness witness;  // from the draw with the largest inner value
  double q0 = 0.0;
  std::size_t samples = 0;
  std::vector<double> per_draw;  // sup / sqrt(m1) for each omega_1 draw
};

struct TripleConfig {
  double p = 3.0;
  std::size_t m1 = 1, m2 = 1, m3 = 1;
  double q0 = 0.0;  // 0 means log n
  std::optional<IndexSet> base_set;
  int restarts = 8;
  int max_iter = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // over omega_1 draws
};

struct InnerSup {
  double value = 0.0;  // sum over A of xi_i |x_i| (no 1/sqrt(m1))
  IndexSet A;
  std::vector<int> signs;  // sign of x_i for i in A
};

/// Exact sup over |A| <= m1 of sum_{i in A} xi1_i |<phi_i, f_b (1 + |f_c|)^{p-2}>|
/// with f_b = sum xi2_i b_i phi_i and f_c = sum xi3_i c_i phi_i.  Top m1
/// by magnitude, ties to the lowest index; A restricted to `base` if given.
InnerSup triple_inner_sup(const OrthogonalSystem& sys, const SelectorSample& xi1,
                          const SelectorSample& xi2, const SelectorSample& xi3,
                          const CoeffVector& b, const CoeffVector& c, double p, std::size_t m1,
                          const IndexSet& base = {});

/// K_{m1,m2,m3}: exact inner sup, alternating sparse maximization over (b, c).
TripleNormEstimate estimate_k_triple(const OrthogonalSystem& sys,
                                     std::span<const SelectorSample> omega1,
                                     const SelectorSample& omega2, const SelectorSample& omega3,
                                     const TripleConfig& cfg);

struct KestVariant {
  bool restricted = false;
  double p1 = 0.0;
  double delta_prime = 0.0;

  static KestVariant standard() { return {}; }
  static KestVariant restricted_to(double p1, double delta_prime) {
    return {true, p1, delta_prime};
  }
};

/// Default sigma: p / 2 for the standard form, 1 for the restricted one.
double default_sigma(double p, const KestVariant& variant);

/// (delta m3^{p/2-1} + (m2+m3)/m1)^{1/2} (1 + K2 + K3)^{p - sigma}; the
/// restricted form uses delta' m3^{p/p1 - 1} as the first term.
double kest_rhs(std::size_t m1, std::size_t m2, std::size_t m3, double delta, double p, double K2,
                double K3, double sigma, const KestVariant& variant = KestVariant::standard());

}  // namespace lambdap
