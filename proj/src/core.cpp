#include "gcollage/core.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "gcollage/error.hpp"

namespace gcollage {

void RateParams::validate() const {
  if (alpha < 1) throw InvalidArgument("alpha must be a positive integer");
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("p must lie in (1, inf)");
  if (!(a > 0.0)) throw InvalidArgument("a must be positive");
  if (!(b >= 0.0)) throw InvalidArgument("b must be nonnegative");
  if (d < 1) throw InvalidArgument("d must be at least 1");
}

double gaussian_density(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double d = static_cast<double>(x.size());
  return std::exp(-0.5 * r2 - 0.5 * d * std::log(2.0 * std::numbers::pi));
}

double default_delta(double p) {
  if (p == 2.0) return 1.0 / 6.0;
  return 0.6 * (1.0 - 1.0 / p) / 2.0;
}

DeltaCheck check_delta(double delta, double p, double theta, int kmax, int d) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (!(p > 1.0)) throw InvalidArgument("p must lie in (1, inf)");
  if (!(theta >= 1.0 && theta < 2.0)) throw InvalidArgument("theta must lie in [1, 2)");
  if (kmax < 1) throw InvalidArgument("kmax must be at least 1");
  if (d < 1) throw InvalidArgument("d must be at least 1");

  DeltaCheck out;
  const double ceiling = (1.0 - 1.0 / p) / 2.0;
  if (!(delta < ceiling)) return out;

  // First bound does not depend on tau. Work in log space, per coordinate.
  const double h = theta / 2.0;
  double log_c1 = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= kmax; ++j) {
    const double inner = j == 0 ? 0.0 : j - h; // sgn(0) = 0
    log_c1 = std::max(log_c1, delta * j * j - inner * inner * (1.0 - 1.0 / p) / 2.0);
  }

  constexpr int grid = 32;
  const double lo = 1.0 + 1e-3;
  const double hi = p - 1e-3;
  if (!(hi > lo)) return out;
  const double ratio = std::pow(hi / lo, 1.0 / (grid - 1));

  double best = std::numeric_limits<double>::infinity();
  double best_tau = 0.0;
  double tau = lo;
  for (int g = 0; g < grid; ++g, tau *= ratio) {
    // Leading coefficient of the second exponent must be negative.
    if (!(1.0 / (2.0 * p) - 1.0 / (2.0 * tau) + delta < 0.0)) continue;
    double log_c2 = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= kmax; ++j) {
      const double outer = j == 0 ? 0.0 : j + h;
      log_c2 = std::max(log_c2, outer * outer / (2.0 * p) - static_cast<double>(j) * j / (2.0 * tau) +
                                    delta * j * j);
    }
    const double log_c = d * std::max(log_c1, log_c2);
    if (log_c < best) {
      best = log_c;
      best_tau = tau;
    }
  }
  if (!std::isfinite(best)) return out;
  out.admissible = true;
  out.constant = std::exp(best);
  out.tau = best_tau;
  return out;
}

BudgetSchedule::BudgetSchedule(double n, double a, double delta, int d)
    : n_(n), a_(a), delta_(delta), d_(d) {
  if (!(n >= 1.0) || !std::isfinite(n)) throw InvalidArgument("n must be >= 1");
  if (!(a > 0.0)) throw InvalidArgument("a must be positive");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (d < 1) throw InvalidArgument("d must be at least 1");

  const double decay = delta / (2.0 * a);
  rho_ = std::pow(0.5 * (1.0 - std::exp(-decay)), d);
  xi_ = std::sqrt(2.0 * a * std::log(n) / delta);

  const double scale = rho_ * n;
  if (scale < 1.0) return;
  // n_k >= 1 iff |k|^2 <= log(rho n) / decay.
  const double r2 = std::min(std::log(scale) / decay, xi_ * xi_);
  const int reach = static_cast<int>(std::floor(std::sqrt(r2))) + 1;

  MultiIndex k(static_cast<std::size_t>(d));
  std::function<void(int, double)> walk = [&](int axis, double partial) {
    if (axis == d) {
      const double nk = budget(k);
      if (nk >= 1.0) cells_.push_back({k, nk});
      return;
    }
    for (int v = -reach; v <= reach; ++v) {
      const double s = partial + static_cast<double>(v) * v;
      if (s > r2 + 1e-9) continue;
      k[static_cast<std::size_t>(axis)] = v;
      walk(axis + 1, s);
    }
  };
  walk(0, 0.0);
}

double BudgetSchedule::budget(const MultiIndex &k) const {
  const double r2 = k.norm2();
  if (!(std::sqrt(r2) < xi_)) return 0.0;
  return rho_ * n_ * std::exp(-delta_ / (2.0 * a_) * r2);
}

long long BudgetSchedule::total_floor() const {
  constexpr double top = 9.0e18; // saturate instead of overflowing
  double s = 0.0;
  for (const auto &c : cells_) s += std::floor(c.budget);
  return s >= top ? std::numeric_limits<long long>::max() : static_cast<long long>(s);
}

BudgetSchedule budget_schedule(double n, double a, double delta, int d) {
  return BudgetSchedule(n, a, delta, d);
}

} // namespace gcollage
