#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace latc {

/// Neumaier-compensated running sum. Merging two accumulators is
/// associative up to the compensation error, so a fixed merge order gives
/// bitwise reproducible totals.
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;

  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }

  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.carry_);
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Pairwise (cascade) sum; error grows like O(log n) ulps.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace latc
