#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gcollage/rule.hpp"

namespace gcollage {

// All cube rules live on the centered cube [-1/2, 1/2]^d.

// ---------------------------------------------------------------- Fibonacci

/// Fibonacci numbers with b_0 = b_1 = 1. Throws InvalidArgument once b_m no
/// longer fits in a signed 64-bit integer.
std::int64_t fibonacci_number(int m);

/// Largest index m with b_m <= budget (at least 1).
int fibonacci_index_for_budget(double budget);

/// Equal-weight two-dimensional Fibonacci lattice rule with b_m nodes
/// ({i / b_m} - 1/2, {i b_{m-1} / b_m} - 1/2), i = 1..b_m.
QuadratureRule fibonacci_rule(int m);

// ---------------------------------------------------------------- Smolyak

inline constexpr std::uint64_t kDefaultNodeCap = 10'000'000;

/// |SG(level)|, saturating at UINT64_MAX.
std::uint64_t smolyak_grid_size(int level, int d);

/// Dyadic sparse grid SG(xi) = {2^-k s : |k|_1 <= xi, |s_i| <= 2^(k_i - 1)},
/// de-duplicated and sorted lexicographically. Row-major coordinates.
std::vector<double> smolyak_grid(double xi, int d, std::uint64_t node_cap = kDefaultNodeCap);

/// Largest integer level L with |SG(L)| <= m.
int smolyak_level_for_budget(double m, int d);

/// Weights w_i = integral over [x_0, x_{N-1}] of the i-th cardinal function of
/// the interpolating spline of the given order (degree order - 1) on strictly
/// increasing nodes x.
/// Interior knots are averages of order - 1 consecutive nodes, which keeps the
/// collocation matrix totally positive. The order drops to N when N < order.
/// A single node gets weight 1.
std::vector<double> spline_quadrature_weights(std::span<const double> x, int order);

/// Univariate level-j rule of the Smolyak construction: nodes
/// {2^-j s : |s| <= 2^(j-1)} (just {0} at level 0) with spline weights.
QuadratureRule smolyak_univariate(int level, int order);

/// Sparse-grid rule on SG(xi_m), combining univariate spline rules of order
/// min(alpha + 1, 4) with the standard telescoping combination.
QuadratureRule smolyak_rule(double m, int d, int alpha, std::uint64_t node_cap = kDefaultNodeCap);

// ---------------------------------------------------------------- Frolov

inline constexpr int kFrolovMaxDim = 6;

/// Real roots (ascending) of prod_{j=1}^d (x - (2j - 1)) - 1.
std::vector<double> frolov_roots(int d);

/// Vandermonde generator T_ij = r_i^j, row-major d x d.
std::vector<double> frolov_generator(int d);

double frolov_generator_det(int d);

/// Number of lattice points (1/a) T z strictly inside the cube, stopping the
/// count as soon as it exceeds limit.
std::uint64_t frolov_count(int d, double scale, std::uint64_t limit);

/// Equal-weight rule on the scaled lattice (1/a) T Z^d intersected with the
/// open cube, a maximal such that at most m points remain. Each weight is the
/// lattice covolume |det T| / a^d.
QuadratureRule frolov_rule(double m, int d);

// ---------------------------------------------------------------- psi map

/// Polynomial smoothing map psi_k(t) = C_k int_0^t s^k (1 - s)^k ds on
/// [0, 1], clamped to 0 and 1 outside.
class PsiMap {
public:
  explicit PsiMap(int k);

  int order() const noexcept { return k_; }
  /// C_k = (2k + 1)! / (k!)^2.
  double normalizer() const noexcept { return ck_; }

  double operator()(double t) const;
  double derivative(double t) const;

private:
  int k_;
  double ck_;
  std::vector<double> coeffs_; // C_k binom(k, j) (-1)^j / (k + j + 1)
};

/// Maps a unit-cube rule through psi_k coordinatewise:
/// nodes psi_k(x + 1/2) - 1/2, weights w * prod psi_k'(x_i + 1/2).
QuadratureRule change_of_variable_rule(const QuadratureRule &base, int k);

} // namespace gcollage
