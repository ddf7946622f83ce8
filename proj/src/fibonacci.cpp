#include <array>
#include <limits>
#include <string>

#include "gcollage/cube.hpp"
#include "gcollage/error.hpp"

namespace gcollage {

std::int64_t fibonacci_number(int m) {
  if (m < 0) throw InvalidArgument("Fibonacci index must be nonnegative");
  std::int64_t prev = 1, cur = 1; // b_0, b_1
  if (m <= 1) return 1;
  for (int i = 2; i <= m; ++i) {
    if (cur > std::numeric_limits<std::int64_t>::max() - prev)
      throw InvalidArgument("Fibonacci index " + std::to_string(m) + " overflows 64-bit integers");
    const std::int64_t next = cur + prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

int fibonacci_index_for_budget(double budget) {
  if (!(budget >= 1.0)) throw InvalidArgument("Fibonacci budget must be >= 1");
  int m = 1;
  std::int64_t prev = 1, cur = 1;
  while (true) {
    if (cur > std::numeric_limits<std::int64_t>::max() - prev) return m;
    const std::int64_t next = cur + prev;
    if (static_cast<double>(next) > budget) return m;
    prev = cur;
    cur = next;
    ++m;
  }
}

QuadratureRule fibonacci_rule(int m) {
  if (m < 1) throw InvalidArgument("Fibonacci index must be >= 1");
  const std::int64_t b = fibonacci_number(m);
  const std::int64_t g = fibonacci_number(m - 1);
  if (static_cast<std::uint64_t>(b) > kDefaultNodeCap)
    throw ConstructionError("Fibonacci rule with " + std::to_string(b) + " nodes exceeds the node cap");

  QuadratureRule rule(2, Domain::UnitCube);
  rule.family = "fibonacci";
  rule.requested = static_cast<double>(m);
  rule.reserve(static_cast<std::size_t>(b));
  const double w = 1.0 / static_cast<double>(b);
  const auto bb = static_cast<__int128>(b);
  for (std::int64_t i = 1; i <= b; ++i) {
    const auto r1 = static_cast<std::int64_t>(static_cast<__int128>(i) % bb);
    const auto r2 = static_cast<std::int64_t>((static_cast<__int128>(i) * g) % bb);
    const std::array<double, 2> x{static_cast<double>(r1) / static_cast<double>(b) - 0.5,
                                  static_cast<double>(r2) / static_cast<double>(b) - 0.5};
    rule.add(x, w);
  }
  return rule;
}

} // namespace gcollage
