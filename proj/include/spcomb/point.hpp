#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spcomb/errors.hpp"

namespace spcomb {

/// A location in R^d.
///
/// Coordinates must be finite. Negative zero is stored as positive zero, so
/// value equality and bitwise equality of coordinates coincide.
class Point {
 public:
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw DimensionError("point must have at least one coordinate");
    for (double& c : coords_) {
      if (!std::isfinite(c)) throw DomainError("point coordinates must be finite");
      c += 0.0;  // -0.0 -> +0.0
    }
  }
  Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

  /// Lexicographic by coordinates; total on finite coordinates.
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) {
    const std::size_t n = std::min(a.dim(), b.dim());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coords_[i] < b.coords_[i]) return std::strong_ordering::less;
      if (b.coords_[i] < a.coords_[i]) return std::strong_ordering::greater;
    }
    return a.dim() <=> b.dim();
  }

 private:
  std::vector<double> coords_;
};

inline void require_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

/// Axis-aligned closed box [lo, hi] with lo < hi in every coordinate.
class Box {
 public:
  Box(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    require_same_dim(lo_, hi_);
    for (std::size_t i = 0; i < lo_.dim(); ++i) {
      if (!(lo_[i] < hi_[i])) throw DomainError("box requires lo < hi in every coordinate");
    }
  }

  static Box unit(std::size_t dim) {
    return Box(Point(std::vector<double>(dim, 0.0)), Point(std::vector<double>(dim, 1.0)));
  }

  const Point& lo() const noexcept { return lo_; }
  const Point& hi() const noexcept { return hi_; }
  std::size_t dim() const noexcept { return lo_.dim(); }

  double volume() const noexcept {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) v *= hi_[i] - lo_[i];
    return v;
  }

  bool contains(const Point& x) const {
    require_same_dim(lo_, x);
    for (std::size_t i = 0; i < dim(); ++i) {
      if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
    }
    return true;
  }

  bool contains(const Box& other) const {
    return contains(other.lo_) && contains(other.hi_);
  }

  /// Smallest box containing both.
  Box hull(const Box& other) const {
    require_same_dim(lo_, other.lo_);
    std::vector<double> lo(dim()), hi(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      lo[i] = std::min(lo_[i], other.lo_[i]);
      hi[i] = std::max(hi_[i], other.hi_[i]);
    }
    return Box(Point(std::move(lo)), Point(std::move(hi)));
  }

  friend bool operator==(const Box&, const Box&) = default;

 private:
  Point lo_;
  Point hi_;
};

}  // namespace spcomb
