#include "gcollage/rule.hpp"

#include "gcollage/error.hpp"
#include "gcollage/parallel.hpp"

namespace gcollage {

const char *to_string(Domain d) {
  switch (d) {
  case Domain::UnitCube: return "unit-cube";
  case Domain::ThetaCube: return "theta-cube";
  case Domain::GaussianRd: return "gaussian-Rd";
  }
  return "unknown";
}

Domain domain_from_string(const std::string &s) {
  if (s == "unit-cube") return Domain::UnitCube;
  if (s == "theta-cube") return Domain::ThetaCube;
  if (s == "gaussian-Rd") return Domain::GaussianRd;
  throw InvalidArgument("unknown domain '" + s + "'");
}

void QuadratureRule::add(std::span<const double> x, double w) {
  if (x.size() != static_cast<std::size_t>(d_))
    throw InvalidArgument("node dimension does not match rule dimension");
  coords_.insert(coords_.end(), x.begin(), x.end());
  weights_.push_back(w);
}

double QuadratureRule::weight_sum() const {
  CompensatedSum s;
  for (double w : weights_) s.add(w);
  return s.value();
}

} // namespace gcollage
