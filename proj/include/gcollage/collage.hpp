#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gcollage/core.hpp"
#include "gcollage/rule.hpp"

namespace gcollage {

/// Smooth partition of unity {phi_k} subordinate to the dilated cells
/// k + [-theta/2, theta/2]^d, built from the product mollifier
/// B(x) = prod_i b(2 x_i / theta), b(t) = exp(-1 / (1 - t^2)) on |t| < 1.
///
/// Both B and the normalizing sum factor over coordinates, so
/// phi_k(x) = prod_i phi1_{k_i}(x_i) with at most two nonzero terms per axis.
/// Support decisions use the exact value of x_i - k_i (two-sum), so points on
/// the cell boundary evaluate to exactly 0.
class UnitPartition {
public:
  UnitPartition(double theta, int d);

  double theta() const noexcept { return theta_; }
  int dim() const noexcept { return d_; }

  double operator()(const MultiIndex &k, std::span<const double> x) const;

  /// Univariate factor phi1_j(t).
  double factor(int j, double t) const;

  /// Sum over all k of phi_k(x), evaluated from the (at most 2^d) cells whose
  /// support contains x.
  double sum(std::span<const double> x) const;

private:
  double bump(int j, double t) const; // b(2 (t - j) / theta), exact support test
  double theta_;
  int d_;
};

UnitPartition bump_partition(double theta, int d);

/// Base family: budget m -> unit-cube rule. Must be safe to call
/// concurrently.
using BaseFamily = std::function<QuadratureRule(double m)>;

/// Collaged rule on R^d with per-node provenance.
struct CollageRule {
  QuadratureRule rule;           // domain gaussian-Rd
  std::vector<MultiIndex> cell;  // cell k of each node
  std::vector<int> base_index;   // index j of the node in the cell's base rule
  std::optional<BudgetSchedule> schedule;

  /// Radius of the ball that must contain every node.
  double ball_radius() const;
};

/// Nodes x_j + k with weights w_j g(x_j + k), for every cell with
/// floor(n_k) >= 1, using the base rule built for budget floor(n_k).
CollageRule collage_direct(const BaseFamily &base, double n, const RateParams &params, double delta);

/// Partition variant: base nodes dilated by theta (weights times theta^d),
/// shifted by k and weighted by g(x) phi_k(x).
CollageRule collage_partition(const BaseFamily &base, double n, double theta, const RateParams &params,
                              double delta);

using Integrand = std::function<double(std::span<const double>)>;

/// sum_i w_i f(x_i) with blocked compensated summation; identical results for
/// any thread count. Integrand exceptions and non-finite values surface as
/// EvaluationError naming the first offending node.
double integrate(const QuadratureRule &rule, const Integrand &f);

namespace serial {
/// Single-threaded reference for integrate: one compensated pass in node order.
double integrate(const QuadratureRule &rule, const Integrand &f);
} // namespace serial

} // namespace gcollage
