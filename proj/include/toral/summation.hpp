#pragma once

#include <cmath>
#include <span>

namespace toral {

/// Neumaier's variant of Kahan summation.
template <typename T>
class BasicCompensatedSum {
 public:
  void add(T x) noexcept {
    const T t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  BasicCompensatedSum& operator+=(T x) noexcept {
    add(x);
    return *this;
  }

  /// Merges another accumulator; order of merges is the caller's contract.
  void merge(const BasicCompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }

  T value() const noexcept { return sum_ + comp_; }

 private:
  T sum_ = 0;
  T comp_ = 0;
};

using CompensatedSum = BasicCompensatedSum<double>;
using ExtendedSum = BasicCompensatedSum<long double>;

inline double compensated_total(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace toral
