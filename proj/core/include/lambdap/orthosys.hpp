#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "lambdap/coeff.hpp"

namespace lambdap {

enum class SystemKind { walsh, trig };

std::string_view to_string(SystemKind kind);
/// Accepts "walsh" or "trig"; throws std::invalid_argument otherwise.
SystemKind parse_system_kind(std::string_view name);

/// A finite 1-bounded orthogonal family phi_0..phi_{n-1} tabulated on a
/// quadrature grid of a probability space.  Immutable; copies share data.
///
/// Functions are indexed from 0.  For walsh, phi_i is the Paley-ordered
/// Walsh function w_{i+1} (the constant w_0 is excluded, so every phi_i has
/// mean zero).  For trig, phi_{2k} = cos(2 pi (k+1) u) and
/// phi_{2k+1} = sin(2 pi (k+1) u).
class OrthogonalSystem {
 public:
  /// Wraps tabulated values (row-major, n rows of grid_size).  Checks
  /// shapes, |phi_i| <= 1 and that weights form a probability vector.  Does
  /// not check orthogonality.
  OrthogonalSystem(SystemKind kind, std::size_t n, std::vector<double> nodes,
                   std::vector<double> weights, std::vector<double> values);

  SystemKind kind() const noexcept { return data_->kind; }
  std::size_t size() const noexcept { return data_->n; }
  std::size_t grid_size() const noexcept { return data_->nodes.size(); }
  std::span<const double> nodes() const noexcept { return data_->nodes; }
  std::span<const double> weights() const noexcept { return data_->weights; }
  /// Quadrature L2 norm of each phi_i.
  std::span<const double> normalization() const noexcept { return data_->norms; }
  /// phi_i sampled on the grid.
  std::span<const double> row(std::size_t i) const {
    return {data_->values.data() + i * grid_size(), grid_size()};
  }
  double value(std::size_t i, std::size_t k) const { return data_->values[i * grid_size() + k]; }
  /// True when all weights are equal (lets kernels skip the multiply).
  bool uniform_weights() const noexcept { return data_->uniform; }

  /// Same kind, size and grid.
  bool operator==(const OrthogonalSystem& other) const noexcept;

 private:
  struct Data {
    SystemKind kind;
    std::size_t n;
    std::vector<double> nodes, weights, values, norms;
    bool uniform;
  };
  std::shared_ptr<const Data> data_;
};

/// Walsh: grid of 2^K dyadic cells, K = ceil(log2 n) + 1; `oversample` is
/// ignored.  Trig: oversample * n left-endpoint nodes, oversample >= 2.
OrthogonalSystem build_system(SystemKind kind, std::size_t n, std::size_t oversample = 16);

/// Trig system on an arbitrary uniform grid, with no aliasing check.
/// Used to build deliberately under-resolved systems.
OrthogonalSystem trig_system_on_grid(std::size_t n, std::size_t grid);

/// Paley Walsh function w_k at cell `cell` of a 2^K-cell grid.
double walsh_value(std::size_t k, std::size_t cell, unsigned K);

struct FunctionSamples {
  std::vector<double> values;
  OrthogonalSystem system;
};

FunctionSamples synthesize(const OrthogonalSystem& sys, const CoeffVector& coeffs);
FunctionSamples synthesize(const OrthogonalSystem& sys, std::span<const double> coeffs);

/// out = sum_i coeffs[i] phi_i over i in `indices` (all i when empty).
void synthesize_into(const OrthogonalSystem& sys, std::span<const double> coeffs,
                     std::span<double> out, const IndexSet& indices = {});

/// <phi_i, f> for every i (the adjoint of synthesis).
std::vector<double> analyze(const OrthogonalSystem& sys, std::span<const double> f);
double analyze_one(const OrthogonalSystem& sys, std::size_t i, std::span<const double> f);

/// (sum_k w_k |f_k|^p)^{1/p}; p = infinity gives max |f_k|.
double lp_norm(const FunctionSamples& f, double p);
double lp_norm(std::span<const double> weights, std::span<const double> f, double p);

double inner_product(const FunctionSamples& f, const FunctionSamples& g);

/// Quadrature Gram matrix, row-major n x n.
std::vector<double> gram_matrix(const OrthogonalSystem& sys);
/// max_{i != j} |<phi_i, phi_j>|.
double orthogonality_residual(const OrthogonalSystem& sys);

/// ||D_n||_r for the Dirichlet kernel D_n = sum_{|k|<=n} e^{2 pi i k u},
/// by the midpoint rule on `grid` nodes (0: max(64 n, 2^16)).
double dirichlet_norm(std::size_t n, double r, std::size_t grid = 0);

}  // namespace lambdap
