#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "gcollage/multi_index.hpp"

namespace gcollage {

/// L2(gamma)-normalized probabilists' Hermite polynomial H_k(x), by the
/// recurrence H_{j+1} = (x H_j - sqrt(j) H_{j-1}) / sqrt(j + 1). Returns
/// +-infinity when the value overflows.
double hermite_eval(int k, double x);

/// Fills out[j] = H_j(x) for j = 0..out.size()-1.
void hermite_values(double x, std::span<double> out);

/// prod_j H_{k_j}(x_j).
double hermite_eval_multi(const MultiIndex &k, std::span<const double> x);

/// Finite Hermite expansion sum_k c_k H_k in d variables.
class HermiteSeries {
public:
  explicit HermiteSeries(int d = 1) : d_(d) {}

  int dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  const std::map<MultiIndex, double> &coeffs() const noexcept { return coeffs_; }

  void set(const MultiIndex &k, double value);
  double coeff(const MultiIndex &k) const;

  double operator()(std::span<const double> x) const;

  /// Euclidean norm of the coefficients, i.e. the L2(gamma) norm.
  double l2_norm() const;

  friend bool operator==(const HermiteSeries &, const HermiteSeries &) = default;

private:
  int d_;
  std::map<MultiIndex, double> coeffs_;
};

/// rho_{alpha,k} = prod_j (k_j + 1)^alpha.
double hermite_weight(const MultiIndex &k, double alpha);

/// Hyperbolic cross G(xi) = {k in N_0^d : prod (k_j + 1) <= xi}.
struct HyperbolicCross {
  double xi = 1.0;
  int d = 1;
  std::vector<MultiIndex> indices; // lexicographic

  std::size_t size() const noexcept { return indices.size(); }
  bool contains(const MultiIndex &k) const;
};

inline constexpr std::uint64_t kHyperbolicCrossCap = 10'000'000;

HyperbolicCross hyperbolic_cross(double xi, int d, std::uint64_t cap = kHyperbolicCrossCap);

/// |G(xi)| without materializing the set, via
/// N_d(X) = sum_{j=1}^{X} N_{d-1}(floor(X / j)).
std::uint64_t hyperbolic_cross_size(double xi, int d);

/// Largest xi (an integer) with |G(xi)| <= n.
double xi_for_budget(std::uint64_t n, int d);

/// Keeps exactly the coefficients indexed in G(xi).
HermiteSeries truncate(const HermiteSeries &f, double xi);

/// sqrt(sum rho_{alpha,k} c_k^2), any real alpha >= 0.
double hnorm(const HermiteSeries &f, double alpha);

/// Coefficientwise derivative D^r f, using
/// H_k^{(r)} = sqrt(k! / (k - r)!) H_{k-r} for k >= r and 0 otherwise.
HermiteSeries derivative(const HermiteSeries &f, const MultiIndex &r);

/// Exact W^alpha_2(R^d, gamma) norm from the factorial sums
/// sum_k c_k^2 prod_j sum_{r=0}^{min(alpha,k_j)} k_j! / (k_j - r)!.
double sobolev_norm_oracle(const HermiteSeries &f, int alpha);

/// Gauss-Hermite rule for the standard Gaussian measure (weights sum to 1).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch on the symmetric Jacobi matrix (zero diagonal, off-diagonal
/// sqrt(j)), Newton-polished, with Christoffel weights 1 / sum_j H_j(x)^2.
GaussHermite gauss_hermite(int points);

struct CoefficientEstimate {
  HermiteSeries series;
  /// Indices whose estimate moved by more than 1e-6 (relative) when the
  /// number of quadrature points was doubled.
  std::vector<MultiIndex> unconverged;
};

using ScalarField = std::function<double(std::span<const double>)>;

/// Tensor Gauss-Hermite estimates of c_k = int f H_k dgamma for |k|_inf <= max_index.
CoefficientEstimate hermite_coefficients(const ScalarField &f, int d, int max_index, int quad_points);

/// m-truncated reproducing kernel of H^alpha,
/// prod_i sum_{k=0}^{m} (k + 1)^-alpha H_k(x_i) H_k(y_i).
double kernel_eval(std::span<const double> x, std::span<const double> y, double alpha, int m);

} // namespace gcollage
