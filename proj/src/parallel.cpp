#include "gcollage/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gcollage {

namespace {
int env_threads() {
  const char *s = std::getenv("GAUSS_COLLAGE_THREADS");
  if (!s) return 0;
  const int v = std::atoi(s);
  return v > 0 ? v : 0;
}
} // namespace

int worker_threads() {
#ifdef _OPENMP
  const int cap = env_threads();
  return cap > 0 ? cap : omp_get_max_threads();
#else
  return 1;
#endif
}

void configure_threads_from_env() {
#ifdef _OPENMP
  if (const int cap = env_threads(); cap > 0) omp_set_num_threads(cap);
#endif
}

double deterministic_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<CompensatedSum> partial(blocks);
#pragma omp parallel for schedule(static) num_threads(worker_threads())
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    CompensatedSum s;
    for (std::size_t i = lo; i < hi; ++i) s.add(values[i]);
    partial[static_cast<std::size_t>(b)] = s;
  }
  CompensatedSum total;
  for (const auto &p : partial) total.add(p);
  return total.value();
}

} // namespace gcollage
