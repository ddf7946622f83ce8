#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace gcollage {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  void add(const CompensatedSum &o) noexcept {
    add(o.sum_);
    add(o.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Block length used by every deterministic parallel reduction. Partial sums
/// are formed per block and combined in block order, so results do not depend
/// on the number of threads.
inline constexpr std::size_t kReductionBlock = 1024;

/// Number of worker threads: GAUSS_COLLAGE_THREADS if set and positive,
/// otherwise the OpenMP default. Always 1 in builds without OpenMP.
int worker_threads();

/// Applies GAUSS_COLLAGE_THREADS to the OpenMP runtime.
void configure_threads_from_env();

/// Deterministic compensated sum of values.
double deterministic_sum(std::span<const double> values);

} // namespace gcollage
