#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gcollage/multi_index.hpp"

namespace gcollage {

/// Rate parameters of a base cube rule: error <= C m^-a (log m)^b in W^alpha_p.
struct RateParams {
  int alpha = 1;
  double p = 2.0;
  double a = 1.0;
  double b = 0.0;
  int d = 1;

  /// Throws InvalidArgument unless alpha >= 1, 1 < p < inf, a > 0, b >= 0, d >= 1.
  void validate() const;
};

/// A shifted, optionally dilated cell k + [-theta/2, theta/2]^d.
struct Cell {
  MultiIndex k;
  double theta = 1.0;

  double lower(std::size_t i) const { return k[i] - theta / 2; }
  double upper(std::size_t i) const { return k[i] + theta / 2; }
};

/// Standard Gaussian density (2 pi)^{-d/2} exp(-|x|^2 / 2).
double gaussian_density(std::span<const double> x);

/// Default decay constant: 1/6 at p = 2, otherwise 60% of the admissibility
/// ceiling (1 - 1/p) / 2.
double default_delta(double p);

struct DeltaCheck {
  bool admissible = false;
  /// Smallest constant C for which both exponential bounds hold on the
  /// checked range (only meaningful when admissible).
  double constant = 0.0;
  double tau = 0.0;
};

/// Checks that delta is an admissible decay constant for the cell-norm
/// bounds of a collage with integrability p and dilation theta.
///
/// For each tau on a geometric grid of 32 points in (1 + 1e-3, p - 1e-3) the
/// two bounds
///   exp(-|k - theta sgn(k)/2|^2 (1 - 1/p) / 2)             <= C exp(-delta |k|^2)
///   exp(|k + theta sgn(k)/2|^2 / (2p) - |k|^2 / (2 tau))     <= C exp(-delta |k|^2)
/// are evaluated for every k with |k|_inf <= kmax. A tau is accepted only if
/// both exponents also decay for |k| -> inf (so the maximum over the checked
/// box is the global maximum). Both bounds factor over coordinates, so the
/// constant for dimension d is the d-th power of the one-dimensional one.
DeltaCheck check_delta(double delta, double p, double theta, int kmax, int d = 1);

/// Collage budget bookkeeping for total budget n.
class BudgetSchedule {
public:
  struct CellBudget {
    MultiIndex k;
    double budget; // real n_k, floored only when a rule is built
  };

  BudgetSchedule(double n, double a, double delta, int d);

  double n() const noexcept { return n_; }
  double a() const noexcept { return a_; }
  double delta() const noexcept { return delta_; }
  int d() const noexcept { return d_; }
  /// Normalizer 2^{-d} (1 - exp(-delta / (2a)))^d.
  double rho() const noexcept { return rho_; }
  /// Radius sqrt(2 a log(n) / delta).
  double xi() const noexcept { return xi_; }

  /// Closed-form n_k for any k: rho n exp(-delta |k|^2 / (2a)) inside the
  /// radius, 0 outside.
  double budget(const MultiIndex &k) const;

  /// Cells with floor(n_k) >= 1 in lexicographic k-order. Cells with a
  /// fractional budget below one contribute no nodes and are not listed.
  const std::vector<CellBudget> &cells() const noexcept { return cells_; }

  /// Sum over listed cells of floor(n_k).
  long long total_floor() const;

private:
  double n_, a_, delta_;
  int d_;
  double rho_, xi_;
  std::vector<CellBudget> cells_;
};

/// Builds the schedule, validating n >= 1, a > 0, delta > 0, d >= 1.
BudgetSchedule budget_schedule(double n, double a, double delta, int d);

} // namespace gcollage
