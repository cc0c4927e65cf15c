#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lambdap/coeff.hpp"

namespace lambdap {

enum class DecompositionKind { nonneg, unit };

struct DecompositionLevel {
  unsigned l = 0;
  double weight = 0.0;  // gamma_l (nonneg) or lambda_l (unit)
  CoeffVector block;
};

/// c = sum_l weight_l * block_l with disjoint block supports.  Block l
/// covers the 1-based dyadic range [2^l, 2^{l+1} - 1] of the
/// magnitude-sorted sequence.
struct Decomposition {
  DecompositionKind kind = DecompositionKind::nonneg;
  std::size_t n = 0;
  std::vector<DecompositionLevel> levels;

  std::vector<double> reconstruct() const;
  double weight_sum() const;         // sum gamma_l
  double weight_square_sum() const;  // sum lambda_l^2
};

/// gamma_l = 2^l c_{2^l}, c_i(l) = c_i / gamma_l on block l.  Levels with
/// gamma_l = 0 are omitted.  Requires c nonnegative, nonincreasing, and
/// sum c <= 1 + 1e-12.
///
/// Note: sum gamma_l can exceed sum c (up to a factor 2): the geometric
/// sequence c_i = 2^-i gives sum gamma_l ~ 1.28.  The guaranteed bounds
/// are sum c <= sum gamma_l <= 2 sum c.
Decomposition dyadic_decompose_nonneg(std::span<const double> c);

/// Sorts |a| decreasingly (stable), applies the nonneg split to |a_i|^2,
/// lambda_l = gamma_l^{1/2}, a_i(l) = a_i / (2^{l/2} |a_{2^l}|).
/// Requires |a| <= 1 + 1e-12.  sum lambda_l^2 obeys the same bounds as
/// sum gamma_l above, i.e. lies in [|a|^2, 2 |a|^2].
Decomposition dyadic_decompose_unit(std::span<const double> a);

/// I = [0, m0), dropped index m0, J = [m0 + 1, n), all 0-based, where
/// m0 = max{m : sum_{i<m} a_i^2 < gamma^2}.
struct BootstrapSplit {
  std::size_t m0 = 0;
  IndexSet I, J;
  std::size_t dropped = 0;
  double gamma = 0.0;
  double mass_I = 0.0;  // sum_{I} a_i^2
  double mass_J = 0.0;  // sum_{J} a_i^2
};

/// Requires entries sorted by nonincreasing magnitude and |a| = 1 (1e-9).
/// If p is given, gamma must satisfy (1-gamma^2)^{(p-2)/2} + gamma^p < 1.
BootstrapSplit bootstrap_split(std::span<const double> a, double gamma,
                               std::optional<double> p = std::nullopt);

}  // namespace lambdap
