#include "gcollage/wce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "gcollage/collage.hpp"
#include "gcollage/cube.hpp"
#include "gcollage/error.hpp"
#include "gcollage/hermite.hpp"
#include "gcollage/parallel.hpp"

namespace gcollage {

namespace {

// Nodes per independent recurrence block in wce_spectral. Fixed so the
// reduction order does not depend on the thread count.
constexpr std::size_t kWceNodeBlock = 256;
// Largest Hermite table (entries) wce_gram will allocate.
constexpr std::size_t kGramTableCap = std::size_t{1} << 24;

void check_rule(const QuadratureRule &rule) {
  if (rule.dim() != 1) throw InvalidArgument("worst-case error certification needs d = 1, got d=" +
                                             std::to_string(rule.dim()));
  if (rule.domain() != Domain::GaussianRd)
    throw InvalidArgument("worst-case error certification needs a gaussian-Rd rule");
}

void check_m(int m) {
  if (m < 1) throw InvalidArgument("truncation m must be >= 1");
}

double tail_bound(const QuadratureRule &rule, int alpha, int m, double envelope) {
  double l1 = 0.0;
  for (double w : rule.weights()) l1 += std::abs(w);
  if (l1 == 0.0) return 0.0;
  if (alpha < 2) return std::numeric_limits<double>::infinity();
  const double mass = std::pow(m + 1.0, 1.0 - alpha) / (alpha - 1.0);
  return (l1 * envelope) * (l1 * envelope) * mass;
}

[[noreturn]] void overflow(std::size_t i, double x) {
  throw ConstructionError("Hermite recurrence overflowed at node " + std::to_string(i) + " (x=" +
                          std::to_string(x) + ")");
}

WceReport finish(const QuadratureRule &rule, int alpha, int m, const CompensatedSum &series, double envelope) {
  WceReport r;
  r.n = rule.size();
  r.m = m;
  r.alpha = alpha;
  r.weight_defect = 1.0 - rule.weight_sum();
  CompensatedSum total = series;
  total.add(r.weight_defect * r.weight_defect);
  r.err_m = std::sqrt(std::max(total.value(), 0.0));
  r.tail_estimate = tail_bound(rule, alpha, m, envelope);
  return r;
}

} // namespace

WceReport wce_spectral(const QuadratureRule &rule, int alpha, int m) {
  check_rule(rule);
  if (alpha < 1) throw InvalidArgument("alpha must be a positive integer");
  check_m(m);
  const std::size_t n = rule.size();
  const auto ms = static_cast<std::size_t>(m);

  // Recurrence coefficients: H_{k+1} = x H_k a_k - H_{k-1} b_k.
  std::vector<double> a(ms), b(ms);
  for (std::size_t k = 0; k < ms; ++k) {
    a[k] = 1.0 / std::sqrt(k + 1.0);
    b[k] = std::sqrt(static_cast<double>(k)) * a[k];
  }

  const std::size_t blocks = (n + kWceNodeBlock - 1) / kWceNodeBlock;
  // rows[blk * m + (k - 1)] = sum over the block of w_i H_k(x_i).
  std::vector<double> rows(blocks * ms, 0.0);
  std::vector<double> envelope(blocks, 1.0);
  std::vector<std::ptrdiff_t> bad(blocks, -1);

#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
  for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(blocks); ++blk) {
    const auto ub = static_cast<std::size_t>(blk);
    const std::size_t lo = ub * kWceNodeBlock, hi = std::min(n, lo + kWceNodeBlock);
    const std::size_t len = hi - lo;
    std::vector<double> x(len), w(len), prev(len, 0.0), cur(len, 1.0);
    for (std::size_t i = 0; i < len; ++i) {
      x[i] = rule.node(lo + i)[0];
      w[i] = rule.weight(lo + i);
    }
    double env = 1.0;
    double *row = rows.data() + ub * ms;
    for (std::size_t k = 0; k < ms; ++k) {
      CompensatedSum s;
      for (std::size_t i = 0; i < len; ++i) {
        const double next = x[i] * cur[i] * a[k] - prev[i] * b[k];
        prev[i] = cur[i];
        cur[i] = next;
        env = std::max(env, std::abs(next));
        s.add(w[i] * next);
      }
      row[k] = s.value();
    }
    for (std::size_t i = 0; i < len; ++i)
      if (!std::isfinite(cur[i]) || !std::isfinite(prev[i])) {
        bad[ub] = static_cast<std::ptrdiff_t>(lo + i);
        break;
      }
    envelope[ub] = env;
  }
  for (std::size_t blk = 0; blk < blocks; ++blk)
    if (bad[blk] >= 0) overflow(static_cast<std::size_t>(bad[blk]), rule.node(static_cast<std::size_t>(bad[blk]))[0]);

  CompensatedSum series;
  for (std::size_t k = 0; k < ms; ++k) {
    CompensatedSum s;
    for (std::size_t blk = 0; blk < blocks; ++blk) s.add(rows[blk * ms + k]);
    const double v = s.value();
    series.add(std::pow(k + 2.0, -alpha) * v * v);
  }
  double env = 1.0;
  for (double e : envelope) env = std::max(env, e);
  return finish(rule, alpha, m, series, env);
}

WceReport serial::wce_spectral(const QuadratureRule &rule, int alpha, int m) {
  check_rule(rule);
  if (alpha < 1) throw InvalidArgument("alpha must be a positive integer");
  check_m(m);
  const std::size_t n = rule.size();
  std::vector<double> prev(n, 0.0), cur(n, 1.0);
  double env = 1.0;
  CompensatedSum series;
  for (int k = 0; k < m; ++k) {
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) {
      const double next = (rule.node(i)[0] * cur[i] - std::sqrt(static_cast<double>(k)) * prev[i]) / std::sqrt(k + 1.0);
      prev[i] = cur[i];
      cur[i] = next;
      env = std::max(env, std::abs(next));
      s.add(rule.weight(i) * next);
    }
    series.add(std::pow(k + 2.0, -alpha) * s.value() * s.value());
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(cur[i]) || !std::isfinite(prev[i])) overflow(i, rule.node(i)[0]);
  return finish(rule, alpha, m, series, env);
}

namespace {

double gram_radicand_to_err(const CompensatedSum &radicand) {
  const double v = radicand.value();
  if (v < -1e-12) throw ConstructionError("Gram radicand is negative; kernel truncation m is too small");
  return std::sqrt(std::max(v, 0.0));
}

void check_gram(const QuadratureRule &rule, double alpha, int m) {
  check_rule(rule);
  if (!(alpha > 1.0)) throw InvalidArgument("Gram oracle needs alpha > 1");
  check_m(m);
}

} // namespace

double wce_gram(const QuadratureRule &rule, double alpha, int m) {
  check_gram(rule, alpha, m);
  const std::size_t n = rule.size();
  const std::size_t cols = static_cast<std::size_t>(m) + 1;
  if (n * cols > kGramTableCap) throw ConstructionError("Gram oracle table exceeds its size cap; lower m or n");

  std::vector<double> table(n * cols), r(cols);
  for (std::size_t k = 0; k < cols; ++k) r[k] = std::pow(k + 1.0, -alpha);
  for (std::size_t i = 0; i < n; ++i) {
    hermite_values(rule.node(i)[0], std::span<double>(table.data() + i * cols, cols));
    for (std::size_t k = 0; k < cols; ++k)
      if (!std::isfinite(table[i * cols + k])) overflow(i, rule.node(i)[0]);
  }

  std::vector<double> row(n);
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double *hi = table.data() + i * cols;
    CompensatedSum acc;
    for (std::size_t j = 0; j < n; ++j) {
      const double *hj = table.data() + j * cols;
      CompensatedSum kij;
      for (std::size_t k = 0; k < cols; ++k) kij.add(r[k] * hi[k] * hj[k]);
      acc.add(rule.weight(j) * kij.value());
    }
    row[i] = acc.value();
  }
  CompensatedSum radicand;
  radicand.add(1.0);
  for (std::size_t i = 0; i < n; ++i) {
    radicand.add(-2.0 * rule.weight(i));
    radicand.add(rule.weight(i) * row[i]);
  }
  return gram_radicand_to_err(radicand);
}

double serial::wce_gram(const QuadratureRule &rule, double alpha, int m) {
  check_gram(rule, alpha, m);
  CompensatedSum radicand;
  radicand.add(1.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    radicand.add(-2.0 * rule.weight(i));
    for (std::size_t j = 0; j < rule.size(); ++j)
      radicand.add(rule.weight(i) * rule.weight(j) * kernel_eval(rule.node(i), rule.node(j), alpha, m));
  }
  return gram_radicand_to_err(radicand);
}

std::vector<SweepRow> convergence_sweep(std::span<const int> alphas, std::span<const double> n_list,
                                        const SweepConfig &config) {
  if (alphas.empty() || n_list.empty()) throw InvalidArgument("sweep needs at least one alpha and one budget");
  for (int a : alphas)
    if (a < 1) throw InvalidArgument("sweep alphas must be positive integers");
  for (double n : n_list)
    if (!(n >= 1.0)) throw InvalidArgument("sweep budgets must be >= 1");
  if (!(config.delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (config.psi_order < 0) throw InvalidArgument("psi order must be >= 0");
  if (config.base_family != "smolyak" && config.base_family != "frolov")
    throw InvalidArgument("sweep base family must be smolyak or frolov, got " + config.base_family);
  check_m(config.m);

  std::vector<SweepRow> rows;
  for (int alpha : alphas) {
    const BaseFamily base = [alpha, &config](double m) {
      QuadratureRule r = config.base_family == "smolyak" ? smolyak_rule(m, 1, alpha) : frolov_rule(m, 1);
      return config.psi_order > 0 ? change_of_variable_rule(r, config.psi_order) : r;
    };
    RateParams params;
    params.alpha = alpha;
    params.p = 2.0;
    params.a = alpha;
    params.d = 1;
    for (double n : n_list) {
      SweepRow row;
      row.alpha = alpha;
      row.n_requested = n;
      row.m = config.m;
      const auto start = std::chrono::steady_clock::now();
      try {
        const CollageRule c = collage_direct(base, n, params, config.delta);
        row.n_actual = c.rule.size();
        row.err_m = wce_spectral(c.rule, alpha, config.m).err_m;
      } catch (const std::exception &e) {
        row.error = e.what();
      }
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("slope fit needs matching x and y");
  if (x.size() < 2) throw InvalidArgument("slope fit needs at least 2 points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("slope fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double count = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("slope fit needs at least two distinct node counts");
  return sxy / sxx;
}

double slope_fit(std::span<const SweepRow> rows) {
  std::vector<double> x, y;
  for (const auto &r : rows) {
    if (!r.error.empty() || r.n_actual == 0 || !(r.err_m > 0.0)) continue;
    x.push_back(static_cast<double>(r.n_actual));
    y.push_back(r.err_m);
  }
  if (x.size() < 3)
    throw InvalidArgument("slope fit needs at least 3 rows with positive node count and error, got " +
                          std::to_string(x.size()));
  return ols_slope(x, y);
}

} // namespace gcollage
