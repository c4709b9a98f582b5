#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace spcomb {

/// Neumaier-compensated running sum.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  KahanSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Pairwise summation with a fixed reduction tree: the result depends only on
/// the values and their order.
inline double pairwise_sum(std::span<const double> xs) noexcept {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double factorial(std::size_t n) noexcept {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

/// C(n, k) in double precision; exact while the value fits in 53 bits.
inline double binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double b = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(b);
}

/// |a - b| / max(|a|, |b|, scale); zero when a == b.
///
/// `scale` is the magnitude of the terms that were summed to obtain a or b, so
/// cancellation to (near) zero is measured against the size of the inputs.
inline double relative_error(double a, double b, double scale = 0.0) noexcept {
  if (a == b) return 0.0;
  const double denom = std::max({std::abs(a), std::abs(b), std::abs(scale)});
  if (denom == 0.0) return 0.0;
  return std::abs(a - b) / denom;
}

/// Value of a sum together with the sum of the absolute values of its terms.
struct SignedSum {
  double value = 0.0;
  double magnitude = 0.0;
};

}  // namespace spcomb
