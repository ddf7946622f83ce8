#include "gcollage/collage.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <string>

#include "gcollage/cube.hpp"
#include "gcollage/error.hpp"
#include "gcollage/parallel.hpp"

namespace gcollage {

namespace {

// Exact decision of |t - j| < h for doubles t, h and integer j, via the
// two-sum error term of t - j. Returns the rounded difference through diff.
bool strictly_within(double t, int j, double h, double &diff) {
  const double mj = -static_cast<double>(j);
  const double s = t + mj;
  const double bp = s - t;
  const double e = (t - (s - bp)) + (mj - bp);
  diff = s;
  const double a = std::abs(s);
  if (a < h) return true;
  if (a > h) return false;
  // |s| == h: inside only if the exact value lies towards zero.
  return s > 0.0 ? e < 0.0 : e > 0.0;
}

} // namespace

UnitPartition::UnitPartition(double theta, int d) : theta_(theta), d_(d) {
  if (!(theta > 1.0 && theta < 2.0)) throw InvalidArgument("theta must lie in (1, 2)");
  if (d < 1) throw InvalidArgument("d must be at least 1");
}

double UnitPartition::bump(int j, double t) const {
  double diff = 0.0;
  if (!strictly_within(t, j, theta_ / 2.0, diff)) return 0.0;
  const double u = 2.0 * diff / theta_;
  const double gap = (1.0 - u) * (1.0 + u);
  if (!(gap > 0.0)) return 0.0;
  return std::exp(-1.0 / gap);
}

double UnitPartition::factor(int j, double t) const {
  const double num = bump(j, t);
  if (num == 0.0) return 0.0;
  const int base = static_cast<int>(std::floor(t));
  double den = 0.0;
  for (int i = base - 1; i <= base + 2; ++i) den += bump(i, t);
  return num / den;
}

double UnitPartition::operator()(const MultiIndex &k, std::span<const double> x) const {
  if (k.dim() != static_cast<std::size_t>(d_) || x.size() != static_cast<std::size_t>(d_))
    throw InvalidArgument("dimension mismatch in partition evaluation");
  double v = 1.0;
  for (std::size_t i = 0; i < x.size() && v != 0.0; ++i) v *= factor(k[i], x[i]);
  return v;
}

double UnitPartition::sum(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(d_)) throw InvalidArgument("dimension mismatch in partition sum");
  // Candidate cells per axis: integers within theta/2 < 1 of x_i.
  std::vector<std::vector<int>> cand(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int base = static_cast<int>(std::floor(x[i]));
    for (int j = base - 1; j <= base + 2; ++j) {
      double diff = 0.0;
      if (strictly_within(x[i], j, theta_ / 2.0, diff)) cand[i].push_back(j);
    }
  }
  CompensatedSum total;
  MultiIndex k(x.size());
  std::vector<std::size_t> pos(x.size(), 0);
  for (const auto &c : cand)
    if (c.empty()) return 0.0;
  while (true) {
    for (std::size_t i = 0; i < x.size(); ++i) k[i] = cand[i][pos[i]];
    total.add((*this)(k, x));
    std::size_t axis = 0;
    while (axis < x.size() && ++pos[axis] == cand[axis].size()) pos[axis++] = 0;
    if (axis == x.size()) break;
  }
  return total.value();
}

UnitPartition bump_partition(double theta, int d) { return UnitPartition(theta, d); }

double CollageRule::ball_radius() const {
  const double xi = schedule ? schedule->xi() : 0.0;
  return rule.theta * std::sqrt(static_cast<double>(rule.dim())) / 2.0 + xi;
}

namespace {

// Builds the base rules for every distinct floor(n_k) concurrently.
std::map<long long, QuadratureRule> base_rules(const BaseFamily &base, const BudgetSchedule &schedule, int d) {
  std::vector<long long> budgets;
  for (const auto &c : schedule.cells()) {
    const auto m = static_cast<long long>(std::floor(c.budget));
    if (budgets.empty() || std::find(budgets.begin(), budgets.end(), m) == budgets.end()) budgets.push_back(m);
  }
  std::vector<QuadratureRule> built(budgets.size());
  std::vector<std::exception_ptr> errors(budgets.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(budgets.size()); ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      built[u] = base(static_cast<double>(budgets[u]));
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  std::map<long long, QuadratureRule> out;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    if (built[i].dim() != d || built[i].domain() != Domain::UnitCube)
      throw ConstructionError("base family returned a rule that is not a " + std::to_string(d) +
                              "-dimensional unit-cube rule");
    out.emplace(budgets[i], std::move(built[i]));
  }
  return out;
}

CollageRule assemble(const BaseFamily &base, double n, double theta, const RateParams &params, double delta,
                     const UnitPartition *partition) {
  params.validate();
  if (!(n >= 1.0)) throw InvalidArgument("n must be >= 1");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  const int d = params.d;
  BudgetSchedule schedule(n, params.a, delta, d);
  double requested = 0.0;
  for (const auto &c : schedule.cells()) requested += std::floor(c.budget);
  if (requested > static_cast<double>(kDefaultNodeCap))
    throw ConstructionError("collage budgets sum to " + std::to_string(requested) + ", above the node cap of " +
                            std::to_string(kDefaultNodeCap));
  const auto rules = base_rules(base, schedule, d);

  CollageRule out;
  out.rule = QuadratureRule(d, Domain::GaussianRd);
  out.rule.theta = theta;
  out.rule.family = partition ? "collage(partition)" : "collage(direct)";
  out.rule.requested = n;
  out.rule.reserve(static_cast<std::size_t>(schedule.total_floor()));

  const double jac = std::pow(theta, d);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (const auto &c : schedule.cells()) {
    const auto &r = rules.at(static_cast<long long>(std::floor(c.budget)));
    for (std::size_t j = 0; j < r.size(); ++j) {
      const auto node = r.node(j);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = theta * node[i] + c.k[i];
      double w = r.weight(j) * gaussian_density(x);
      if (partition) w *= jac * (*partition)(c.k, x);
      out.rule.add(x, w);
      out.cell.push_back(c.k);
      out.base_index.push_back(static_cast<int>(j));
    }
  }
  out.schedule = std::move(schedule);
  return out;
}

} // namespace

CollageRule collage_direct(const BaseFamily &base, double n, const RateParams &params, double delta) {
  return assemble(base, n, 1.0, params, delta, nullptr);
}

CollageRule collage_partition(const BaseFamily &base, double n, double theta, const RateParams &params,
                              double delta) {
  const UnitPartition partition(theta, params.d);
  return assemble(base, n, theta, params, delta, &partition);
}

namespace {

double checked_term(const QuadratureRule &rule, const Integrand &f, std::size_t i) {
  double v = 0.0;
  try {
    v = f(rule.node(i));
  } catch (const std::exception &e) {
    throw EvaluationError(i, e.what());
  }
  if (!std::isfinite(v)) throw EvaluationError(i, "integrand returned a non-finite value");
  return rule.weight(i) * v;
}

} // namespace

double integrate(const QuadratureRule &rule, const Integrand &f) {
  const std::size_t n = rule.size();
  std::vector<double> terms(n);
  std::size_t first_bad = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;
#pragma omp parallel for schedule(static) num_threads(worker_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      terms[u] = checked_term(rule, f, u);
    } catch (...) {
#pragma omp critical(gcollage_integrate_error)
      if (u < first_bad) {
        first_bad = u;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return deterministic_sum(terms);
}

double serial::integrate(const QuadratureRule &rule, const Integrand &f) {
  CompensatedSum s;
  for (std::size_t i = 0; i < rule.size(); ++i) s.add(checked_term(rule, f, i));
  return s.value();
}

} // namespace gcollage
