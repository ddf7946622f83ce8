#include <cmath>
#include <string>

#include "gcollage/cube.hpp"
#include "gcollage/error.hpp"

namespace gcollage {

PsiMap::PsiMap(int k) : k_(k) {
  if (k < 1) throw InvalidArgument("psi order k must be >= 1");
  // (2k+1)! / (k!)^2 = (2k+1) binom(2k, k)
  double binom = 1.0;
  for (int i = 1; i <= k; ++i) binom = binom * (k + i) / i;
  ck_ = (2 * k + 1) * binom;
  double c = 1.0; // binom(k, j)
  for (int j = 0; j <= k; ++j) {
    coeffs_.push_back(ck_ * c * (j % 2 == 0 ? 1.0 : -1.0) / (k + j + 1));
    c = c * (k - j) / (j + 1);
  }
}

double PsiMap::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // psi(t) = 1 - psi(1 - t); evaluate on the half nearer to 0 where the
  // expansion in powers of t has no cancellation issue.
  const bool upper = t > 0.5;
  const double s = upper ? 1.0 - t : t;
  double acc = 0.0;
  for (std::size_t j = coeffs_.size(); j-- > 0;) acc = acc * s + coeffs_[j];
  const double v = acc * std::pow(s, k_ + 1);
  return upper ? 1.0 - v : v;
}

double PsiMap::derivative(double t) const {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return ck_ * std::pow(t * (1.0 - t), k_);
}

QuadratureRule change_of_variable_rule(const QuadratureRule &base, int k) {
  if (base.domain() != Domain::UnitCube) throw InvalidArgument("change of variable needs a unit-cube rule");
  const PsiMap psi(k);
  const auto d = static_cast<std::size_t>(base.dim());
  QuadratureRule out(base.dim(), Domain::UnitCube);
  out.family = "psi-transformed(" + std::to_string(k) + "," + base.family + ")";
  out.requested = base.requested;
  out.reserve(base.size());
  std::vector<double> x(d);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto node = base.node(i);
    double w = base.weight(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double t = node[j] + 0.5;
      x[j] = psi(t) - 0.5;
      w *= psi.derivative(t);
    }
    out.add(x, w);
  }
  return out;
}

} // namespace gcollage
