#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "gcollage/cube.hpp"
#include "gcollage/error.hpp"

namespace gcollage {

namespace {

void check_dim(int d) {
  if (d < 1 || d > kFrolovMaxDim)
    throw InvalidArgument("Frolov rule supports 1 <= d <= " + std::to_string(kFrolovMaxDim) + ", got d=" +
                          std::to_string(d));
}

long double generator_poly(int d, long double x) {
  long double p = 1.0L;
  for (int j = 1; j <= d; ++j) p *= x - (2 * j - 1);
  return p - 1.0L;
}

struct Lattice {
  int d;
  std::vector<long double> t; // row-major generator
  std::vector<long double> r; // upper Cholesky factor of T^T T
  long double det;
};

const Lattice &lattice(int d) {
  static const auto table = [] {
    std::vector<Lattice> out;
    for (int dd = 1; dd <= kFrolovMaxDim; ++dd) {
      Lattice L{dd, {}, {}, 0.0L};
      const auto roots = frolov_roots(dd);
      const auto n = static_cast<std::size_t>(dd);
      L.t.resize(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        long double v = 1.0L;
        for (std::size_t j = 0; j < n; ++j) {
          L.t[i * n + j] = v;
          v *= roots[i];
        }
      }
      // Vandermonde determinant prod_{i<j} (r_j - r_i).
      long double det = 1.0L;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) det *= static_cast<long double>(roots[j]) - roots[i];
      L.det = det;
      // Gram matrix and Cholesky factor (upper).
      std::vector<long double> g(n * n, 0.0L);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t i = 0; i < n; ++i) g[a * n + b] += L.t[i * n + a] * L.t[i * n + b];
      L.r.assign(n * n, 0.0L);
      for (std::size_t i = 0; i < n; ++i) {
        long double s = g[i * n + i];
        for (std::size_t k = 0; k < i; ++k) s -= L.r[k * n + i] * L.r[k * n + i];
        L.r[i * n + i] = std::sqrt(s);
        for (std::size_t j = i + 1; j < n; ++j) {
          long double v = g[i * n + j];
          for (std::size_t k = 0; k < i; ++k) v -= L.r[k * n + i] * L.r[k * n + j];
          L.r[i * n + j] = v / L.r[i * n + i];
        }
      }
      out.push_back(std::move(L));
    }
    return out;
  }();
  return table[static_cast<std::size_t>(d - 1)];
}

// Visits every z with (1/a) T z strictly inside the cube. Stops early when
// visit returns false.
void enumerate(const Lattice &L, long double scale, const std::function<bool(const std::vector<long double> &)> &visit) {
  const auto n = static_cast<std::size_t>(L.d);
  const long double radius2 = static_cast<long double>(L.d) * scale * scale / 4.0L;
  std::vector<long double> z(n, 0.0L), y(n);
  bool stop = false;
  std::function<void(std::size_t, long double)> rec = [&](std::size_t level, long double rem) {
    if (stop) return;
    const std::size_t i = level; // fills z[n-1], ..., z[0]
    long double c = 0.0L;
    for (std::size_t j = i + 1; j < n; ++j) c -= L.r[i * n + j] * z[j];
    const long double rii = L.r[i * n + i];
    c /= rii;
    const long double span = std::sqrt(std::max(rem, 0.0L)) / rii;
    const auto lo = static_cast<long long>(std::ceil(c - span));
    const auto hi = static_cast<long long>(std::floor(c + span));
    for (long long v = lo; v <= hi && !stop; ++v) {
      z[i] = static_cast<long double>(v);
      const long double e = rii * (z[i] - c);
      const long double left = rem - e * e;
      if (left < 0.0L) continue;
      if (i == 0) {
        bool inside = true;
        for (std::size_t a = 0; a < n && inside; ++a) {
          long double s = 0.0L;
          for (std::size_t b = 0; b < n; ++b) s += L.t[a * n + b] * z[b];
          y[a] = s / scale;
          inside = std::fabs(y[a]) < 0.5L;
        }
        if (inside && !visit(y)) stop = true;
      } else {
        rec(i - 1, left);
      }
    }
  };
  rec(n - 1, radius2);
}

} // namespace

std::vector<double> frolov_roots(int d) {
  check_dim(d);
  std::vector<double> roots;
  for (int j = 1; j <= d; ++j) {
    long double lo = 2.0L * (j - 1), hi = 2.0L * j;
    long double flo = generator_poly(d, lo);
    if (generator_poly(d, hi) == 0.0L) {
      roots.push_back(static_cast<double>(hi));
      continue;
    }
    for (int it = 0; it < 200; ++it) {
      const long double mid = 0.5L * (lo + hi);
      const long double fm = generator_poly(d, mid);
      if ((fm < 0.0L) == (flo < 0.0L)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(static_cast<double>(0.5L * (lo + hi)));
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

std::vector<double> frolov_generator(int d) {
  check_dim(d);
  const auto &L = lattice(d);
  return {L.t.begin(), L.t.end()};
}

double frolov_generator_det(int d) {
  check_dim(d);
  return static_cast<double>(lattice(d).det);
}

std::uint64_t frolov_count(int d, double scale, std::uint64_t limit) {
  check_dim(d);
  if (!(scale > 0.0)) throw InvalidArgument("lattice scale must be positive");
  std::uint64_t count = 0;
  enumerate(lattice(d), scale, [&](const std::vector<long double> &) { return ++count <= limit; });
  return count;
}

QuadratureRule frolov_rule(double m, int d) {
  check_dim(d);
  if (!(m >= 1.0) || !std::isfinite(m)) throw InvalidArgument("budget m must be >= 1");
  if (m > static_cast<double>(kDefaultNodeCap)) throw ConstructionError("Frolov budget exceeds the node cap");
  const auto limit = static_cast<std::uint64_t>(std::floor(m));
  const Lattice &L = lattice(d);
  const double absdet = static_cast<double>(std::fabs(L.det));

  // The count is nondecreasing in the scale since the cube is convex and
  // contains the origin; bisect for the largest admissible scale.
  double lo = 1e-3, hi = std::pow(m * absdet, 1.0 / d) + 1.0;
  while (frolov_count(d, hi, limit) <= limit) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (frolov_count(d, mid, limit) <= limit)
      lo = mid;
    else
      hi = mid;
  }

  std::vector<std::vector<double>> pts;
  enumerate(L, lo, [&](const std::vector<long double> &y) {
    pts.emplace_back(y.begin(), y.end());
    return true;
  });
  std::sort(pts.begin(), pts.end());

  QuadratureRule rule(d, Domain::UnitCube);
  rule.family = "frolov";
  rule.requested = m;
  const double w = absdet / std::pow(lo, d); // covolume of (1/a) T Z^d
  rule.reserve(pts.size());
  for (const auto &p : pts) rule.add(p, w);
  return rule;
}

} // namespace gcollage
