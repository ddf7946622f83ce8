#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gcollage/rule.hpp"

namespace gcollage {

inline constexpr int kDefaultSpectralM = 100'000;
inline constexpr int kDefaultGramM = 10'000;

struct WceReport {
  std::size_t n = 0;
  int m = 0;
  int alpha = 1;
  double err_m = 1.0;
  double weight_defect = 1.0; // 1 - sum of weights
  /// Crude bound on the discarded k > m mass of err^2 (infinite for alpha = 1).
  double tail_estimate = 0.0;
};

/// Worst-case error over the unit ball of H^alpha on R with the spectrum
/// truncated at m:
///   err_m^2 = (1 - sum w_i)^2 + sum_{k=1}^m (k+1)^-alpha (sum_i w_i H_k(x_i))^2.
/// Requires a one-dimensional rule on the Gaussian domain. Throws
/// ConstructionError when a Hermite value overflows.
WceReport wce_spectral(const QuadratureRule &rule, int alpha, int m = kDefaultSpectralM);

/// Same quantity from the Gram identity
///   1 - 2 sum w_i + sum_ij w_i w_j K_m(x_i, x_j),
/// for real alpha > 1.
double wce_gram(const QuadratureRule &rule, double alpha, int m = kDefaultGramM);

namespace serial {
WceReport wce_spectral(const QuadratureRule &rule, int alpha, int m = kDefaultSpectralM);
/// Pairwise kernel_eval, one compensated pass.
double wce_gram(const QuadratureRule &rule, double alpha, int m = kDefaultGramM);
} // namespace serial

struct SweepConfig {
  double delta = 1.0 / 6.0;
  int psi_order = 3;              // 0 disables the change of variable
  std::string base_family = "smolyak"; // smolyak | frolov
  int m = kDefaultSpectralM;
};

struct SweepRow {
  int alpha = 1;
  double n_requested = 0.0;
  std::size_t n_actual = 0;
  double err_m = 0.0;
  int m = 0;
  double seconds = 0.0;
  std::string error; // empty on success
};

/// One-dimensional pipeline per (alpha, n): base rule -> psi map -> direct
/// collage with a = alpha, p = 2 -> wce_spectral. Rows come in (alpha, n)
/// grid order; a failing row records its message and the sweep continues.
std::vector<SweepRow> convergence_sweep(std::span<const int> alphas, std::span<const double> n_list,
                                        const SweepConfig &config);

/// Least-squares slope of log err_m against log n_actual over the successful
/// rows with positive node count and error. Needs at least 3 such rows.
double slope_fit(std::span<const SweepRow> rows);

/// Least-squares slope of log y against log x (at least 2 points, positive data).
double ols_slope(std::span<const double> x, std::span<const double> y);

} // namespace gcollage
