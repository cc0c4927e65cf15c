#pragma once

// Reference implementations used to check the library.  Everything here is
// written directly from the definitions, favoring brute force over speed.

#include <cstddef>
#include <vector>

namespace oracle {

/// Paley Walsh w_k(x) as a product of Rademacher functions r_j(x).
double walsh(std::size_t k, double x);

/// phi_i of the trig family at u: cos for even i, sin for odd i,
/// frequency i/2 + 1.
double trig(std::size_t i, double u);

enum class Family { walsh, trig };

/// ||sum_i a_i phi_i||_p with an independent quadrature (midpoints on
/// `nodes` cells).  Exact for walsh once nodes >= 2^(bit length of n) and
/// for trig polynomials when nodes exceeds their degree.
double family_norm(Family fam, const std::vector<double>& a, double p, std::size_t nodes);

/// sup over the unit sphere of R^3 of ||a_0 phi_0 + a_1 phi_1 + a_2 phi_2||_p,
/// by a dense angular grid followed by local pattern search.
double sphere3_sup(Family fam, double p);

/// ||f||_4 for f = sum a_i trig_i from the quadruple sum over the exponential
/// coefficients with m1 + m2 = m3 + m4.
double trig_l4_quadruple(const std::vector<double>& a);

/// E[S^q] for S ~ Bin(l, delta), summed directly in long double.
double binomial_moment(std::size_t l, double delta, double q);
/// P(S >= x) for S ~ Bin(l, delta).
double binomial_upper_tail(std::size_t l, double delta, double x);

/// Root x0 = q / log v for the unimodality check, v log v = q e / kappa,
/// found by bisection.
double unimodal_root(double kappa, double q);

/// Largest t-separated subset (d > t) by checking every subset.
std::size_t max_separated(const std::vector<std::vector<double>>& d, double t);
/// Fewest centers from `cand` covering every point within t; dc[c][i]
/// is the distance from center c to point i.
std::size_t min_cover(const std::vector<std::vector<double>>& dc, double t);

struct TripleInstance {
  std::vector<double> weights;             // quadrature weights
  std::vector<std::vector<double>> rows;   // phi_i values on the nodes
  std::vector<std::size_t> B1, B2, B3;     // active sets
  double p = 3.0;
  std::size_t m1 = 1, m2 = 1, m3 = 1;
};

/// sup over |A| <= m1, b in Pi_{m2}(B2), c in Pi_{m3}(B3) of
/// sum_{i in A} |<phi_i, f_b (1 + |f_c|)^{p-2}>|.  Enumerates (A, signs),
/// solves the b problem in closed form, and grids c over each support
/// (polar grid plus local refinement).  Only m3 <= 2 is supported.
double triple_sup(const TripleInstance& inst);

/// E[U V (1/3 + |W|)^{p-2}] for n = 1 by enumerating the (eta, zeta) atoms.
double decoupling_expectation_n1(double u, double v, double w, double p);

/// ||D_1||_1 = 1/3 + 2 sqrt(3) / pi.
double dirichlet1_l1();

}  // namespace oracle
