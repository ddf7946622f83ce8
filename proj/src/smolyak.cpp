#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "gcollage/cube.hpp"
#include "gcollage/error.hpp"
#include "gcollage/parallel.hpp"

namespace gcollage {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

// Points first appearing at univariate level j.
std::uint64_t new_points(int j) {
  if (j == 0) return 1;
  if (j == 1) return 2;
  if (j - 1 >= 64) return kSaturated;
  return std::uint64_t{1} << (j - 1);
}

// Numerators (over 2^level) of the univariate level-j grid.
std::vector<std::int64_t> level_numerators(int level) {
  if (level == 0) return {0};
  const std::int64_t h = std::int64_t{1} << (level - 1);
  std::vector<std::int64_t> s;
  for (std::int64_t v = -h; v <= h; ++v) s.push_back(v);
  return s;
}

// Cox-de Boor: values of the `order` B-splines that may be nonzero at x,
// B_{span-order+1}, ..., B_span.
void bspline_values(std::span<const double> t, int order, int span, double x, std::vector<double> &out) {
  out.assign(static_cast<std::size_t>(order), 0.0);
  out[0] = 1.0;
  std::vector<double> left(static_cast<std::size_t>(order)), right(static_cast<std::size_t>(order));
  for (int j = 1; j < order; ++j) {
    left[static_cast<std::size_t>(j)] = x - t[static_cast<std::size_t>(span + 1 - j)];
    right[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(span + j)] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
      const double temp = out[static_cast<std::size_t>(r)] / denom;
      out[static_cast<std::size_t>(r)] = saved + right[static_cast<std::size_t>(r + 1)] * temp;
      saved = left[static_cast<std::size_t>(j - r)] * temp;
    }
    out[static_cast<std::size_t>(j)] = saved;
  }
}

// Square band matrix, no pivoting (collocation matrices here are totally
// positive, for which elimination without pivoting is stable).
class BandSolver {
public:
  BandSolver(std::size_t n, std::size_t half) : n_(n), h_(half), a_(n * (2 * half + 1), 0.0) {}
  double &at(std::size_t r, std::size_t c) { return a_[r * (2 * h_ + 1) + (c + h_ - r)]; }

  std::vector<double> solve(std::vector<double> b) {
    for (std::size_t k = 0; k < n_; ++k) {
      const double piv = at(k, k);
      if (piv == 0.0) throw ConstructionError("singular spline collocation matrix");
      const std::size_t rmax = std::min(n_ - 1, k + h_);
      for (std::size_t r = k + 1; r <= rmax; ++r) {
        const double f = at(r, k) / piv;
        if (f == 0.0) continue;
        const std::size_t cmax = std::min(n_ - 1, k + h_);
        for (std::size_t c = k; c <= cmax; ++c) at(r, c) -= f * at(k, c);
        b[r] -= f * b[k];
      }
    }
    for (std::size_t k = n_; k-- > 0;) {
      double s = b[k];
      const std::size_t cmax = std::min(n_ - 1, k + h_);
      for (std::size_t c = k + 1; c <= cmax; ++c) s -= at(k, c) * b[c];
      b[k] = s / at(k, k);
    }
    return b;
  }

private:
  std::size_t n_, h_;
  std::vector<double> a_;
};

} // namespace

std::uint64_t smolyak_grid_size(int level, int d) {
  if (level < 0) return 0;
  // count[L] = |SG(L)| in the current number of dimensions.
  std::vector<std::uint64_t> count(static_cast<std::size_t>(level) + 1, 1);
  for (int dim = 1; dim <= d; ++dim) {
    std::vector<std::uint64_t> next(count.size(), 0);
    for (int L = 0; L <= level; ++L)
      for (int j = 0; j <= L; ++j)
        next[static_cast<std::size_t>(L)] =
            sat_add(next[static_cast<std::size_t>(L)], sat_mul(new_points(j), count[static_cast<std::size_t>(L - j)]));
    count = std::move(next);
  }
  return count.back();
}

std::vector<double> smolyak_grid(double xi, int d, std::uint64_t node_cap) {
  if (!(xi >= 0.0)) throw InvalidArgument("sparse-grid level xi must be nonnegative");
  if (d < 1) throw InvalidArgument("d must be at least 1");
  if (xi > 62.0) throw ConstructionError("sparse-grid level too large");
  const int L = static_cast<int>(std::floor(xi));
  const std::uint64_t total = smolyak_grid_size(L, d);
  if (total > node_cap)
    throw ConstructionError("sparse grid has " + std::to_string(total) + " nodes, above the cap of " +
                            std::to_string(node_cap));

  // Enumerate by the level at which each coordinate first appears; this
  // partitions SG(L) so no de-duplication pass is needed.
  std::vector<std::vector<std::int64_t>> fresh(static_cast<std::size_t>(L) + 1);
  for (int j = 0; j <= L; ++j) {
    for (std::int64_t s : level_numerators(j)) {
      const bool is_new = j == 0 || (j == 1 ? s != 0 : (s % 2 != 0));
      if (is_new) fresh[static_cast<std::size_t>(j)].push_back(s * (std::int64_t{1} << (L - j)));
    }
  }

  std::vector<std::vector<std::int64_t>> pts;
  pts.reserve(total);
  std::vector<std::int64_t> cur(static_cast<std::size_t>(d));
  std::function<void(int, int)> rec = [&](int axis, int budget) {
    if (axis == d) {
      pts.push_back(cur);
      return;
    }
    for (int j = 0; j <= budget; ++j)
      for (std::int64_t v : fresh[static_cast<std::size_t>(j)]) {
        cur[static_cast<std::size_t>(axis)] = v;
        rec(axis + 1, budget - j);
      }
  };
  rec(0, L);
  std::sort(pts.begin(), pts.end());

  const double scale = std::ldexp(1.0, -L);
  std::vector<double> out;
  out.reserve(pts.size() * static_cast<std::size_t>(d));
  for (const auto &p : pts)
    for (std::int64_t v : p) out.push_back(static_cast<double>(v) * scale);
  return out;
}

int smolyak_level_for_budget(double m, int d) {
  if (!(m >= 1.0)) throw InvalidArgument("budget m must be >= 1");
  int L = 0;
  while (L < 62 && static_cast<double>(smolyak_grid_size(L + 1, d)) <= m) ++L;
  return L;
}

std::vector<double> spline_quadrature_weights(std::span<const double> x, int order) {
  const std::size_t n = x.size();
  if (n == 0) throw InvalidArgument("spline weights need at least one node");
  if (order < 1) throw InvalidArgument("spline order must be >= 1");
  if (n == 1) return {1.0};
  for (std::size_t i = 1; i < n; ++i)
    if (!(x[i - 1] < x[i])) throw InvalidArgument("spline nodes must be strictly increasing");
  const int k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(order), n));
  const auto ku = static_cast<std::size_t>(k);

  std::vector<double> t;
  t.reserve(n + ku);
  for (int i = 0; i < k; ++i) t.push_back(x.front());
  for (std::size_t i = 1; i + ku <= n; ++i) {
    double s = 0.0;
    for (std::size_t j = i; j < i + ku - 1; ++j) s += x[j];
    t.push_back(s / static_cast<double>(k - 1));
  }
  for (int i = 0; i < k; ++i) t.push_back(x.back());

  // Collocation matrix A_ij = B_j(x_i); we solve A^T w = c with
  // c_j = integral of B_j = (t_{j+k} - t_j) / k.
  std::vector<int> spans(n);
  std::size_t half = 0;
  int mu = k - 1; // x is sorted, so spans only move right
  for (std::size_t i = 0; i < n; ++i) {
    while (mu < static_cast<int>(n) - 1 && t[static_cast<std::size_t>(mu) + 1] <= x[i]) ++mu;
    spans[i] = mu;
    const auto lo = static_cast<std::size_t>(mu - k + 1);
    half = std::max({half, i > lo ? i - lo : lo - i, static_cast<std::size_t>(mu) > i ? mu - i : i - mu});
  }
  BandSolver m(n, half);
  std::vector<double> vals;
  for (std::size_t i = 0; i < n; ++i) {
    bspline_values(t, k, spans[i], x[i], vals);
    for (int r = 0; r < k; ++r) {
      const auto j = static_cast<std::size_t>(spans[i] - k + 1 + r);
      if (vals[static_cast<std::size_t>(r)] != 0.0) m.at(j, i) = vals[static_cast<std::size_t>(r)];
    }
  }
  std::vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = (t[j + ku] - t[j]) / static_cast<double>(k);
  return m.solve(std::move(c));
}

QuadratureRule smolyak_univariate(int level, int order) {
  if (level < 0) throw InvalidArgument("level must be nonnegative");
  const auto s = level_numerators(level);
  std::vector<double> x(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) x[i] = std::ldexp(static_cast<double>(s[i]), -level);
  const auto w = spline_quadrature_weights(x, order);
  QuadratureRule rule(1, Domain::UnitCube);
  rule.family = "smolyak";
  rule.requested = static_cast<double>(s.size());
  for (std::size_t i = 0; i < x.size(); ++i) rule.add(std::span<const double>(&x[i], 1), w[i]);
  return rule;
}

QuadratureRule smolyak_rule(double m, int d, int alpha, std::uint64_t node_cap) {
  if (!(m >= 1.0)) throw InvalidArgument("budget m must be >= 1");
  if (d < 1) throw InvalidArgument("d must be at least 1");
  if (alpha < 1) throw InvalidArgument("alpha must be a positive integer");
  const int L = smolyak_level_for_budget(m, d);
  if (smolyak_grid_size(L, d) > node_cap) throw ConstructionError("sparse grid exceeds the node cap");
  const int order = std::min(alpha + 1, 4);

  // Univariate rules as (numerator over 2^L, weight).
  std::vector<std::vector<std::pair<std::int64_t, double>>> uni(static_cast<std::size_t>(L) + 1);
  for (int j = 0; j <= L; ++j) {
    const auto s = level_numerators(j);
    const auto q = smolyak_univariate(j, order);
    for (std::size_t i = 0; i < s.size(); ++i)
      uni[static_cast<std::size_t>(j)].push_back({s[i] * (std::int64_t{1} << (L - j)), q.weight(i)});
  }

  std::map<std::vector<std::int64_t>, CompensatedSum> acc;
  std::vector<int> lev(static_cast<std::size_t>(d));
  std::vector<std::int64_t> key(static_cast<std::size_t>(d));

  // Combination technique: sum over L-d+1 <= |l|_1 <= L of
  // (-1)^(L-|l|) binom(d-1, L-|l|) Q_{l_1} x ... x Q_{l_d}.
  std::function<void(int, double)> tensor = [&](int axis, double w) {
    if (axis == d) {
      acc[key].add(w);
      return;
    }
    for (const auto &[num, wt] : uni[static_cast<std::size_t>(lev[static_cast<std::size_t>(axis)])]) {
      key[static_cast<std::size_t>(axis)] = num;
      tensor(axis + 1, w * wt);
    }
  };
  std::function<void(int, int)> levels = [&](int axis, int used) {
    if (axis == d) {
      const int gap = L - used;
      if (gap > d - 1) return;
      double coef = 1.0; // binom(d-1, gap)
      for (int i = 0; i < gap; ++i) coef = coef * (d - 1 - i) / (i + 1);
      if (gap % 2 == 1) coef = -coef;
      tensor(0, coef);
      return;
    }
    for (int j = 0; j + used <= L; ++j) {
      lev[static_cast<std::size_t>(axis)] = j;
      levels(axis + 1, used + j);
    }
  };
  levels(0, 0);

  QuadratureRule rule(d, Domain::UnitCube);
  rule.family = "smolyak";
  rule.requested = m;
  rule.reserve(acc.size());
  const double scale = std::ldexp(1.0, -L);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (const auto &[k, w] : acc) {
    for (std::size_t i = 0; i < k.size(); ++i) x[i] = static_cast<double>(k[i]) * scale;
    rule.add(x, w.value());
  }
  return rule;
}

} // namespace gcollage
