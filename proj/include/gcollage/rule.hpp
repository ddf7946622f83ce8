#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gcollage {

enum class Domain { UnitCube, ThetaCube, GaussianRd };

const char *to_string(Domain d);
Domain domain_from_string(const std::string &s);

/// Nodes and weights of a linear quadrature sum_i w_i f(x_i). Nodes are stored
/// row-major in one flat buffer.
class QuadratureRule {
public:
  QuadratureRule() = default;
  QuadratureRule(int d, Domain domain) : d_(d), domain_(domain) {}

  int dim() const noexcept { return d_; }
  Domain domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }

  std::span<const double> node(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> coords() const noexcept { return coords_; }

  void reserve(std::size_t n) {
    coords_.reserve(n * static_cast<std::size_t>(d_));
    weights_.reserve(n);
  }
  void add(std::span<const double> x, double w);
  void set_weight(std::size_t i, double w) { weights_[i] = w; }

  /// Compensated sum of the weights.
  double weight_sum() const;

  // Provenance
  double theta = 1.0;         // dilation of a theta-cube domain
  std::string family;         // fibonacci | smolyak | frolov | psi-transformed(k,base) | collage(variant)
  double requested = 0.0;     // budget m the rule was built for

private:
  int d_ = 1;
  Domain domain_ = Domain::UnitCube;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

} // namespace gcollage
