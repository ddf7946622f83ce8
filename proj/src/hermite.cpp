#include "gcollage/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "gcollage/error.hpp"
#include "gcollage/parallel.hpp"

namespace gcollage {

double hermite_eval(int k, double x) {
  if (k < 0) throw InvalidArgument("Hermite degree must be nonnegative");
  if (k > 1'000'000) throw InvalidArgument("Hermite degree above 10^6");
  double prev = 0.0, cur = 1.0;
  for (int j = 0; j < k; ++j) {
    const double next = (x * cur - std::sqrt(static_cast<double>(j)) * prev) / std::sqrt(j + 1.0);
    prev = cur;
    cur = next;
    if (!std::isfinite(cur)) return std::signbit(cur) ? -std::numeric_limits<double>::infinity()
                                                      : std::numeric_limits<double>::infinity();
  }
  return cur;
}

void hermite_values(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() > 1) out[1] = x;
  for (std::size_t j = 1; j + 1 < out.size(); ++j)
    out[j + 1] = (x * out[j] - std::sqrt(static_cast<double>(j)) * out[j - 1]) / std::sqrt(j + 1.0);
}

double hermite_eval_multi(const MultiIndex &k, std::span<const double> x) {
  if (k.dim() != x.size()) throw InvalidArgument("multi-index and point dimensions differ");
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) v *= hermite_eval(k[i], x[i]);
  return v;
}

void HermiteSeries::set(const MultiIndex &k, double value) {
  if (k.dim() != static_cast<std::size_t>(d_)) throw InvalidArgument("multi-index dimension mismatch");
  for (int v : k)
    if (v < 0) throw InvalidArgument("Hermite multi-index entries must be nonnegative");
  if (!std::isfinite(value)) throw InvalidArgument("Hermite coefficients must be finite");
  if (value == 0.0)
    coeffs_.erase(k);
  else
    coeffs_[k] = value;
}

double HermiteSeries::coeff(const MultiIndex &k) const {
  const auto it = coeffs_.find(k);
  return it == coeffs_.end() ? 0.0 : it->second;
}

double HermiteSeries::operator()(std::span<const double> x) const {
  CompensatedSum s;
  for (const auto &[k, c] : coeffs_) s.add(c * hermite_eval_multi(k, x));
  return s.value();
}

double HermiteSeries::l2_norm() const {
  CompensatedSum s;
  for (const auto &[k, c] : coeffs_) s.add(c * c);
  return std::sqrt(s.value());
}

double hermite_weight(const MultiIndex &k, double alpha) {
  double w = 1.0;
  for (int v : k) w *= std::pow(v + 1.0, alpha);
  return w;
}

// ------------------------------------------------------------ hyperbolic cross

bool HyperbolicCross::contains(const MultiIndex &k) const {
  return std::binary_search(indices.begin(), indices.end(), k);
}

HyperbolicCross hyperbolic_cross(double xi, int d, std::uint64_t cap) {
  if (!(xi >= 1.0)) throw InvalidArgument("hyperbolic cross needs xi >= 1");
  if (d < 1) throw InvalidArgument("d must be at least 1");
  const std::uint64_t size = hyperbolic_cross_size(xi, d);
  if (size > cap)
    throw ConstructionError("hyperbolic cross has " + std::to_string(size) + " indices, above the cap");
  HyperbolicCross out{xi, d, {}};
  out.indices.reserve(size);
  const auto limit = static_cast<std::uint64_t>(std::floor(xi));
  MultiIndex k(static_cast<std::size_t>(d));
  std::function<void(int, std::uint64_t)> rec = [&](int axis, std::uint64_t room) {
    if (axis == d) {
      out.indices.push_back(k);
      return;
    }
    for (std::uint64_t v = 0; v + 1 <= room; ++v) {
      k[static_cast<std::size_t>(axis)] = static_cast<int>(v);
      rec(axis + 1, room / (v + 1));
    }
  };
  rec(0, limit);
  return out;
}

std::uint64_t hyperbolic_cross_size(double xi, int d) {
  if (!(xi >= 1.0)) return 0;
  if (d < 1) throw InvalidArgument("d must be at least 1");
  const auto X = static_cast<std::uint64_t>(std::floor(xi));
  std::map<std::pair<int, std::uint64_t>, std::uint64_t> memo;
  std::function<std::uint64_t(int, std::uint64_t)> count = [&](int dim, std::uint64_t bound) -> std::uint64_t {
    if (bound == 0) return 0;
    if (dim == 1) return bound;
    const auto key = std::make_pair(dim, bound);
    if (const auto it = memo.find(key); it != memo.end()) return it->second;
    std::uint64_t total = 0;
    // Group j by the common value of floor(bound / j).
    for (std::uint64_t j = 1; j <= bound;) {
      const std::uint64_t q = bound / j;
      const std::uint64_t last = bound / q;
      total += (last - j + 1) * count(dim - 1, q);
      j = last + 1;
    }
    memo.emplace(key, total);
    return total;
  };
  return count(d, X);
}

double xi_for_budget(std::uint64_t n, int d) {
  if (n < 1) throw InvalidArgument("budget must be >= 1");
  std::uint64_t lo = 1, hi = n + 1; // |G(lo)| <= n < |G(hi)|
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (hyperbolic_cross_size(static_cast<double>(mid), d) <= n)
      lo = mid;
    else
      hi = mid;
  }
  return static_cast<double>(lo);
}

HermiteSeries truncate(const HermiteSeries &f, double xi) {
  if (!(xi >= 1.0)) throw InvalidArgument("truncation needs xi >= 1");
  HermiteSeries out(f.dim());
  for (const auto &[k, c] : f.coeffs())
    if (hermite_weight(k, 1.0) <= xi) out.set(k, c);
  return out;
}

double hnorm(const HermiteSeries &f, double alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
  CompensatedSum s;
  for (const auto &[k, c] : f.coeffs()) s.add(hermite_weight(k, alpha) * c * c);
  return std::sqrt(s.value());
}

HermiteSeries derivative(const HermiteSeries &f, const MultiIndex &r) {
  if (r.dim() != static_cast<std::size_t>(f.dim())) throw InvalidArgument("derivative order dimension mismatch");
  HermiteSeries out(f.dim());
  for (const auto &[k, c] : f.coeffs()) {
    MultiIndex lowered(k.dim());
    double factor = 1.0;
    bool vanishes = false;
    for (std::size_t i = 0; i < k.dim(); ++i) {
      if (k[i] < r[i]) {
        vanishes = true;
        break;
      }
      for (int j = k[i] - r[i] + 1; j <= k[i]; ++j) factor *= j;
      lowered[i] = k[i] - r[i];
    }
    if (!vanishes) out.set(lowered, c * std::sqrt(factor));
  }
  return out;
}

double sobolev_norm_oracle(const HermiteSeries &f, int alpha) {
  if (alpha < 1) throw InvalidArgument("alpha must be a positive integer");
  CompensatedSum s;
  for (const auto &[k, c] : f.coeffs()) {
    double w = 1.0;
    for (int kj : k) {
      double inner = 1.0, falling = 1.0;
      for (int r = 1; r <= std::min(alpha, kj); ++r) {
        falling *= kj - r + 1;
        inner += falling;
      }
      w *= inner;
    }
    s.add(w * c * c);
  }
  return std::sqrt(s.value());
}

// ------------------------------------------------------------ Gauss-Hermite

GaussHermite gauss_hermite(int points) {
  if (points < 1) throw InvalidArgument("Gauss-Hermite needs at least one point");
  const auto n = static_cast<Eigen::Index>(points);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index j = 0; j + 1 < n; ++j) sub(j) = std::sqrt(static_cast<double>(j + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw ConstructionError("Gauss-Hermite eigenvalue solve failed");

  GaussHermite gh;
  gh.nodes.resize(static_cast<std::size_t>(points));
  std::vector<double> h(static_cast<std::size_t>(points) + 1);
  for (int i = 0; i < points; ++i) {
    double x = eig.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      hermite_values(x, h);
      const double deriv = std::sqrt(static_cast<double>(points)) * h[static_cast<std::size_t>(points - 1)];
      if (deriv == 0.0) break;
      x -= h[static_cast<std::size_t>(points)] / deriv;
    }
    gh.nodes[static_cast<std::size_t>(i)] = x;
  }
  std::sort(gh.nodes.begin(), gh.nodes.end());
  for (int i = 0; i < points / 2; ++i) {
    const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(points - 1 - i);
    if (std::abs(gh.nodes[a] + gh.nodes[b]) > 1e-13 * std::max(1.0, std::abs(gh.nodes[a])))
      throw ConstructionError("Gauss-Hermite nodes are not symmetric");
    const double v = 0.5 * (gh.nodes[b] - gh.nodes[a]);
    gh.nodes[a] = -v;
    gh.nodes[b] = v;
  }
  if (points % 2 == 1) gh.nodes[static_cast<std::size_t>(points / 2)] = 0.0;

  gh.weights.resize(gh.nodes.size());
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    hermite_values(gh.nodes[i], std::span<double>(h.data(), static_cast<std::size_t>(points)));
    CompensatedSum s;
    for (int j = 0; j < points; ++j) s.add(h[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(j)]);
    gh.weights[i] = 1.0 / s.value();
  }
  for (std::size_t i = 0; i < gh.nodes.size() / 2; ++i) {
    const std::size_t j = gh.nodes.size() - 1 - i;
    const double w = 0.5 * (gh.weights[i] + gh.weights[j]);
    gh.weights[i] = gh.weights[j] = w;
  }
  return gh;
}

namespace {

std::vector<double> coefficient_box(const ScalarField &f, int d, int max_index, int q) {
  const auto gh = gauss_hermite(q);
  const auto qs = static_cast<std::size_t>(q);
  const auto ms = static_cast<std::size_t>(max_index) + 1;
  std::vector<double> hv(qs * ms);
  for (std::size_t i = 0; i < qs; ++i) hermite_values(gh.nodes[i], std::span<double>(hv.data() + i * ms, ms));

  std::size_t grid = 1, box = 1;
  for (int i = 0; i < d; ++i) {
    grid *= qs;
    box *= ms;
  }
  // Tensor grid values f(x) * prod w.
  std::vector<double> fw(grid);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (std::size_t g = 0; g < grid; ++g) {
    std::size_t rest = g;
    double w = 1.0;
    for (int i = d - 1; i >= 0; --i) {
      const std::size_t idx = rest % qs;
      rest /= qs;
      x[static_cast<std::size_t>(i)] = gh.nodes[idx];
      w *= gh.weights[idx];
    }
    fw[g] = w * f(x);
  }
  std::vector<double> out(box);
#pragma omp parallel for schedule(static) num_threads(worker_threads())
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(box); ++b) {
    std::vector<std::size_t> k(static_cast<std::size_t>(d));
    std::size_t rest = static_cast<std::size_t>(b);
    for (int i = d - 1; i >= 0; --i) {
      k[static_cast<std::size_t>(i)] = rest % ms;
      rest /= ms;
    }
    CompensatedSum s;
    for (std::size_t g = 0; g < grid; ++g) {
      std::size_t r = g;
      double h = 1.0;
      for (int i = d - 1; i >= 0; --i) {
        h *= hv[(r % qs) * ms + k[static_cast<std::size_t>(i)]];
        r /= qs;
      }
      s.add(fw[g] * h);
    }
    out[static_cast<std::size_t>(b)] = s.value();
  }
  return out;
}

} // namespace

CoefficientEstimate hermite_coefficients(const ScalarField &f, int d, int max_index, int quad_points) {
  if (d < 1) throw InvalidArgument("d must be at least 1");
  if (max_index < 0) throw InvalidArgument("max_index must be nonnegative");
  if (quad_points < max_index + 1) throw InvalidArgument("quad_points must be >= max_index + 1");
  const auto coarse = coefficient_box(f, d, max_index, quad_points);
  const auto fine = coefficient_box(f, d, max_index, 2 * quad_points);

  double scale = 0.0;
  for (double v : fine) scale = std::max(scale, std::abs(v));
  const double floor = 1e-8 * (scale > 0.0 ? scale : 1.0);

  CoefficientEstimate est{HermiteSeries(d), {}};
  const auto ms = static_cast<std::size_t>(max_index) + 1;
  for (std::size_t b = 0; b < coarse.size(); ++b) {
    MultiIndex k(static_cast<std::size_t>(d));
    std::size_t rest = b;
    for (int i = d - 1; i >= 0; --i) {
      k[static_cast<std::size_t>(i)] = static_cast<int>(rest % ms);
      rest /= ms;
    }
    if (std::abs(fine[b] - coarse[b]) > 1e-6 * std::max(std::abs(fine[b]), floor)) est.unconverged.push_back(k);
    est.series.set(k, coarse[b]);
  }
  return est;
}

double kernel_eval(std::span<const double> x, std::span<const double> y, double alpha, int m) {
  if (!(alpha > 1.0)) throw InvalidArgument("kernel needs alpha > 1");
  if (m < 0) throw InvalidArgument("kernel truncation must be nonnegative");
  if (x.size() != y.size()) throw InvalidArgument("kernel arguments differ in dimension");
  std::vector<double> hx(static_cast<std::size_t>(m) + 1), hy(hx.size());
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    hermite_values(x[i], hx);
    hermite_values(y[i], hy);
    CompensatedSum s;
    for (std::size_t k = 0; k < hx.size(); ++k) s.add(std::pow(k + 1.0, -alpha) * hx[k] * hy[k]);
    v *= s.value();
  }
  return v;
}

} // namespace gcollage
