#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gcollage/core.hpp"
#include "gcollage/error.hpp"

using namespace gcollage;

TEST_CASE("MultiIndex basics") {
  MultiIndex k{std::vector<int>{3, -4}};
  CHECK(k.dim() == 2);
  CHECK(k.norm2() == 25.0);
  CHECK(k.norm() == 5.0);
  CHECK(k.max_abs() == 4);
  CHECK(MultiIndex{std::vector<int>{0, 1}} < MultiIndex{std::vector<int>{1, -5}});
}

TEST_CASE("gaussian_density examples") {
  const double x0[] = {0.0};
  CHECK(gaussian_density(x0) == doctest::Approx(0.3989422804).epsilon(1e-10));
  const double x00[] = {0.0, 0.0};
  CHECK(gaussian_density(x00) == doctest::Approx(0.1591549431).epsilon(1e-10));
  const double p[] = {1.0}, m[] = {-1.0};
  CHECK(gaussian_density(p) == gaussian_density(m));
  const double far[] = {3.0, -2.0, 0.5};
  CHECK(gaussian_density(far) > 0.0);
  CHECK(gaussian_density(far) <= std::pow(2.0 * M_PI, -1.5));
}

TEST_CASE("check_delta examples") {
  const auto ok = check_delta(1.0 / 6.0, 2.0, 1.0, 50);
  CHECK(ok.admissible);
  CHECK(ok.constant >= 1.0);
  CHECK(ok.tau > 1.0);
  CHECK(ok.tau < 2.0);
  CHECK_FALSE(check_delta(10.0, 2.0, 1.0, 50).admissible);
  CHECK(check_delta(1e-6, 2.0, 1.0, 50).admissible);
}

TEST_CASE("check_delta rejects bad input") {
  CHECK_THROWS_AS(check_delta(0.0, 2.0, 1.0, 50), InvalidArgument);
  CHECK_THROWS_AS(check_delta(-1.0, 2.0, 1.0, 50), InvalidArgument);
  CHECK_THROWS_AS(check_delta(0.1, 2.0, 2.0, 50), InvalidArgument);
  CHECK_THROWS_AS(check_delta(0.1, 2.0, 0.9, 50), InvalidArgument);
  CHECK_THROWS_AS(check_delta(0.1, 2.0, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(check_delta(0.1, 1.0, 1.0, 5), InvalidArgument);
}

TEST_CASE("check_delta brute-force witness") {
  // The returned constant must dominate both bounds on the whole checked box.
  const double delta = 1.0 / 6.0, p = 2.0, theta = 1.5;
  const auto r = check_delta(delta, p, theta, 20);
  REQUIRE(r.admissible);
  for (int k = -20; k <= 20; ++k) {
    const double s = (k > 0) - (k < 0);
    const double lhs1 = std::exp(-std::pow(k - theta * s / 2, 2) * (1 - 1 / p) / 2);
    const double lhs2 = std::exp(std::pow(k + theta * s / 2, 2) / (2 * p) - double(k) * k / (2 * r.tau));
    const double rhs = r.constant * std::exp(-delta * k * k);
    CHECK(lhs1 <= rhs * (1 + 1e-12));
    CHECK(lhs2 <= rhs * (1 + 1e-12));
  }
  // Dimension d multiplies the log-constant.
  const auto r3 = check_delta(delta, p, theta, 20, 3);
  CHECK(r3.constant == doctest::Approx(std::pow(r.constant, 3)).epsilon(1e-12));
}

TEST_CASE("check_delta is monotone in delta") {
  for (double p : {1.5, 2.0, 4.0})
    for (double theta : {1.0, 1.5, 1.9}) {
      bool seen_false = false;
      for (double delta = 0.001; delta < 0.5; delta += 0.001) {
        const bool ok = check_delta(delta, p, theta, 30).admissible;
        if (!ok) seen_false = true;
        CHECK_FALSE((ok && seen_false));
      }
    }
}

TEST_CASE("default_delta") {
  CHECK(default_delta(2.0) == 1.0 / 6.0);
  CHECK(default_delta(3.0) == doctest::Approx(0.2));
  for (double p : {1.2, 1.5, 3.0, 10.0}) CHECK(check_delta(default_delta(p), p, 1.0, 50).admissible);
}

TEST_CASE("budget schedule n=1 is empty") {
  for (int d = 1; d <= 4; ++d) {
    const auto s = budget_schedule(1.0, 0.7, 0.2, d);
    CHECK(s.xi() == 0.0);
    CHECK(s.cells().empty());
    CHECK(s.total_floor() == 0);
  }
}

TEST_CASE("budget schedule n=100 values") {
  // Oracle values from direct evaluation: sqrt(12 ln 100), (1 - e^{-1/12}) / 2.
  const auto s = budget_schedule(100.0, 1.0, 1.0 / 6.0, 1);
  CHECK(s.xi() == doctest::Approx(7.433844377699677).epsilon(1e-13));
  CHECK(s.rho() == doctest::Approx(0.039977792685338354).epsilon(1e-13));
  CHECK(s.budget(MultiIndex{std::vector<int>{0}}) == doctest::Approx(3.9977792685338356).epsilon(1e-13));
  CHECK(s.budget(MultiIndex{std::vector<int>{8}}) == 0.0);
  // n_4 = 1.0538 is the last budget >= 1.
  REQUIRE(s.cells().size() == 9);
  CHECK(s.cells().front().k[0] == -4);
  CHECK(s.total_floor() == 3 + 2 * (3 + 2 + 1 + 1));
}

TEST_CASE("budget schedule rejects bad input") {
  CHECK_THROWS_AS(budget_schedule(0.5, 1, 0.1, 1), InvalidArgument);
  CHECK_THROWS_AS(budget_schedule(10, 0, 0.1, 1), InvalidArgument);
  CHECK_THROWS_AS(budget_schedule(10, 1, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(budget_schedule(10, 1, 0.1, 0), InvalidArgument);
}

TEST_CASE("budget schedule invariants over random draws") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logn(0.0, std::log(1e5)), ua(0.2, 4.0), ud(0.01, 0.3);
  std::uniform_int_distribution<int> dd(1, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    const double n = std::exp(logn(rng)), a = ua(rng), delta = ud(rng);
    const int d = dd(rng);
    const auto s = budget_schedule(n, a, delta, d);
    // Sum of real budgets and of floors never exceeds n.
    double real_sum = 0.0;
    for (const auto &c : s.cells()) real_sum += c.budget;
    CHECK(real_sum <= n);
    CHECK(s.total_floor() <= static_cast<long long>(std::floor(n)));
    for (std::size_t i = 0; i < s.cells().size(); ++i) {
      const auto &c = s.cells()[i];
      CHECK(c.budget >= 1.0);
      CHECK(c.k.norm() < s.xi());
      if (i > 0) CHECK(s.cells()[i - 1].k < c.k);
      // Sign-flip symmetry.
      MultiIndex flipped = c.k;
      flipped[0] = -flipped[0];
      CHECK(s.budget(flipped) == c.budget);
    }
  }
}

TEST_CASE("budget schedule monotonicity") {
  double prev = 0.0;
  for (double n = 1.0; n < 1e6; n *= 1.7) {
    const auto s = budget_schedule(n, 1.0, 1.0 / 6.0, 2);
    CHECK(s.xi() >= prev);
    prev = s.xi();
  }
  const auto s = budget_schedule(5000.0, 2.0, 0.1, 3);
  double last = s.budget(MultiIndex(std::vector<int>{0, 0, 0}));
  for (int r = 1; r < 10; ++r) {
    const double b = s.budget(MultiIndex(std::vector<int>{r, 0, 0}));
    CHECK(b <= last);
    last = b;
  }
}

TEST_CASE("every cell with n_k >= 1 is listed") {
  const auto s = budget_schedule(3000.0, 1.5, 0.15, 2);
  int count = 0;
  for (int i = -30; i <= 30; ++i)
    for (int j = -30; j <= 30; ++j)
      if (s.budget(MultiIndex(std::vector<int>{i, j})) >= 1.0) ++count;
  CHECK(count == static_cast<int>(s.cells().size()));
}

TEST_CASE("RateParams validation") {
  RateParams p;
  CHECK_NOTHROW(p.validate());
  p.p = 1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = RateParams{};
  p.alpha = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = RateParams{};
  p.b = -1;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("Cell geometry") {
  Cell c{MultiIndex(std::vector<int>{2, -1}), 1.5};
  CHECK(c.lower(0) == 1.25);
  CHECK(c.upper(1) == -0.25);
}
