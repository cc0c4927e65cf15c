#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lambdap/coeff.hpp"

namespace lambdap {

/// Realization of independent Bernoulli(delta) selectors xi_0..xi_{n-1}.
struct SelectorSample {
  std::size_t n = 0;
  double delta = 0.0;
  std::vector<std::uint8_t> bits;
  std::uint64_t seed = 0;
  std::size_t size = 0;

  /// S_omega = {i : xi_i = 1}, sorted.
  IndexSet active() const;
  /// Every selector on (the degenerate delta = 1 case).
  static SelectorSample all_on(std::size_t n);
};

/// Labels in {1,2,3}: 1 iff eta_i = 1 (mean 1/3), 2 iff eta_i = 0 and
/// zeta_i = 1 (zeta of mean 1/2), 3 otherwise.
struct TripartiteSample {
  std::size_t n = 0;
  std::vector<std::uint8_t> labels;
  std::uint64_t seed = 0;

  IndexSet part(int label) const;
  std::array<std::size_t, 3> sizes() const;
};

/// delta = n^{2/p - 1} and n0 = n^{2/p} (unrounded).
double selector_delta(std::size_t n, double p);
double selector_n0(std::size_t n, double p);

/// Bit i of trial `trial` of the selector stream keyed by `seed`.  All
/// selector draws in the library go through this addressing.
bool selector_bit(std::uint64_t seed, std::size_t i, std::uint64_t trial, double delta);
/// Sum of bits 0..l-1 of one trial.
std::size_t selector_count(std::uint64_t seed, std::size_t l, std::uint64_t trial, double delta);

SelectorSample sample_selectors(std::size_t n, double delta, std::uint64_t seed);

TripartiteSample sample_tripartite(std::size_t n, std::uint64_t seed);

/// delta l + q / log(2 + q / (delta l)).
double selector_moment_bound(std::size_t l, double delta, double q);

/// Exact E[(sum_{i<l} xi_i)^q] from the binomial pmf (log-space terms).
double binomial_moment(std::size_t l, double delta, double q);

/// Largest ratio ||S_l||_q / bound over q in {1, ..., 64} at l = 16,
/// delta = 1/4, from exact moments.
double selector_moment_calibration();

struct MomentCheck {
  double empirical = 0.0;  // (mean S^q)^{1/q}
  double bound = 0.0;
  double ratio = 0.0;
  double exact = 0.0;          // (E S^q)^{1/q}
  double moment_mean = 0.0;    // mean S^q
  double moment_stderr = 0.0;  // standard error of mean S^q
};

MomentCheck selector_moment_check(std::size_t l, double delta, double q, std::size_t trials,
                                  std::uint64_t seed);

struct LargeDeviationCheck {
  std::size_t n = 0;
  double delta = 0.0;
  std::size_t trials = 0;
  std::size_t upper_count = 0, lower_count = 0;
  double upper_freq = 0.0, lower_freq = 0.0;
  double upper_bound = 0.0, lower_bound = 0.0;  // e^{-5 n delta}, e^{-n delta / 2}
  double upper_sigma = 0.0, lower_sigma = 0.0;  // binomial sd of the frequency at the bound

  bool passed() const {
    return upper_freq <= upper_bound + 3.0 * upper_sigma &&
           lower_freq <= lower_bound + 3.0 * lower_sigma;
  }
};

/// Frequencies of {S_n > 10 n delta} and {S_n < n delta / 10}.
LargeDeviationCheck large_deviation_check(std::size_t n, double delta, std::size_t trials,
                                          std::uint64_t seed);

struct SupExchangeCheck {
  std::size_t n = 0;
  double q = 0.0;
  double lhs = 0.0;    // mean of sup_j X_j
  double sigma = 0.0;  // standard error of lhs
  double rhs = 0.0;    // e * max_j (E X_j^q)^{1/q}, empirical moments
  bool passed() const { return lhs <= rhs + 3.0 * sigma; }
};

/// One random family of n nonnegative bounded variables
/// X_j = w_j * Bin(l_j, delta_j) / l_j, q = log n.
SupExchangeCheck sup_exchange_check(std::size_t n, std::size_t trials, std::uint64_t seed);

}  // namespace lambdap
