#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spcomb/errors.hpp"
#include "spcomb/point.hpp"

namespace spcomb {

/// A finite set of distinct points, held in canonical (lexicographic) order.
///
/// Canonical ordering makes every enumeration below deterministic, and
/// floating-point sums over a configuration reproducible.
class FiniteConfiguration {
 public:
  FiniteConfiguration() = default;

  explicit FiniteConfiguration(std::vector<Point> points) : points_(std::move(points)) {
    for (std::size_t i = 1; i < points_.size(); ++i) require_same_dim(points_[0], points_[i]);
    std::sort(points_.begin(), points_.end());
    if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
      throw OverlapError("configuration contains a repeated point");
    }
  }

  FiniteConfiguration(std::initializer_list<Point> points)
      : FiniteConfiguration(std::vector<Point>(points)) {}

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point& operator[](std::size_t i) const noexcept { return points_[i]; }
  std::span<const Point> points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  /// Dimension of the points; empty for the empty configuration.
  std::optional<std::size_t> dim() const noexcept {
    if (points_.empty()) return std::nullopt;
    return points_.front().dim();
  }

  bool contains(const Point& x) const {
    return std::binary_search(points_.begin(), points_.end(), x);
  }

  /// gamma \ {x}; x must be a member.
  FiniteConfiguration without(const Point& x) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x);
    if (it == points_.end() || !(*it == x)) throw MembershipError("point is not in the configuration");
    FiniteConfiguration out;
    out.points_.reserve(points_.size() - 1);
    out.points_.insert(out.points_.end(), points_.begin(), it);
    out.points_.insert(out.points_.end(), std::next(it), points_.end());
    return out;
  }

  /// gamma + {x}; x must not be a member.
  FiniteConfiguration with(const Point& x) const {
    if (!points_.empty()) require_same_dim(points_.front(), x);
    auto it = std::lower_bound(points_.begin(), points_.end(), x);
    if (it != points_.end() && *it == x) throw MembershipError("point is already in the configuration");
    FiniteConfiguration out;
    out.points_.reserve(points_.size() + 1);
    out.points_.insert(out.points_.end(), points_.begin(), it);
    out.points_.push_back(x);
    out.points_.insert(out.points_.end(), it, points_.end());
    return out;
  }

  /// Sub-configuration picked by strictly increasing canonical indices.
  FiniteConfiguration select(std::span<const std::size_t> indices) const {
    FiniteConfiguration out;
    out.points_.reserve(indices.size());
    for (std::size_t i : indices) out.points_.push_back(points_[i]);
    return out;
  }

  /// Sub-configuration picked by a bit mask over canonical indices.
  FiniteConfiguration select_mask(std::uint64_t mask) const {
    FiniteConfiguration out;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (mask >> i & 1u) out.points_.push_back(points_[i]);
    }
    return out;
  }

  friend bool operator==(const FiniteConfiguration&, const FiniteConfiguration&) = default;

 private:
  std::vector<Point> points_;
};

/// Union of two configurations that share no point.
inline FiniteConfiguration union_disjoint(const FiniteConfiguration& a, const FiniteConfiguration& b) {
  std::vector<Point> all;
  all.reserve(a.size() + b.size());
  all.insert(all.end(), a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  try {
    return FiniteConfiguration(std::move(all));
  } catch (const OverlapError&) {
    throw OverlapError("union_disjoint: configurations share a point");
  }
}

/// Calls fn(indices) for every k-subset of {0..n-1}, in lexicographic order.
/// `indices` is strictly increasing and valid only during the call.
template <class Fn>
void for_each_index_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(std::span<const std::size_t>(idx));
    // advance: rightmost index that can still move
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Calls fn(indices) for every ordered k-tuple of DISTINCT indices from {0..n-1}.
template <class Fn>
void for_each_injective_tuple(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> tuple(k);
  std::vector<bool> used(n, false);
  auto rec = [&](auto& self, std::size_t depth) -> void {
    if (depth == k) {
      fn(std::span<const std::size_t>(tuple));
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      tuple[depth] = i;
      self(self, depth + 1);
      used[i] = false;
    }
  };
  rec(rec, 0);
}

/// Calls fn(indices) for every ordered k-tuple from {0..n-1}, repetition allowed.
template <class Fn>
void for_each_tuple(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > 0 && n == 0) return;
  std::vector<std::size_t> tuple(k, 0);
  while (true) {
    fn(std::span<const std::size_t>(tuple));
    std::size_t i = k;
    while (i > 0 && tuple[i - 1] == n - 1) {
      tuple[i - 1] = 0;
      --i;
    }
    if (i == 0) return;
    ++tuple[i - 1];
  }
}

/// Input range over the k-subsets of a configuration, lexicographic by
/// canonical index. Yields C(|gamma|, k) items; nothing when k > |gamma|.
class SubsetsOfSize {
 public:
  SubsetsOfSize(const FiniteConfiguration& config, std::size_t k) : config_(&config), k_(k) {}

  class iterator {
   public:
    using value_type = FiniteConfiguration;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;
    using pointer = void;
    using reference = FiniteConfiguration;

    iterator() = default;
    iterator(const FiniteConfiguration* config, std::size_t k) : config_(config), idx_(k) {
      if (k > config->size()) {
        config_ = nullptr;
        return;
      }
      for (std::size_t i = 0; i < k; ++i) idx_[i] = i;
    }

    FiniteConfiguration operator*() const { return config_->select(idx_); }

    iterator& operator++() {
      const std::size_t n = config_->size();
      const std::size_t k = idx_.size();
      std::size_t i = k;
      while (i > 0 && idx_[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) {
        config_ = nullptr;
        return *this;
      }
      ++idx_[i - 1];
      for (std::size_t j = i; j < k; ++j) idx_[j] = idx_[j - 1] + 1;
      return *this;
    }
    iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }

    friend bool operator==(const iterator& a, const iterator& b) {
      if (a.config_ == nullptr || b.config_ == nullptr) return a.config_ == b.config_;
      return a.idx_ == b.idx_;
    }

   private:
    const FiniteConfiguration* config_ = nullptr;
    std::vector<std::size_t> idx_;
  };

  iterator begin() const { return iterator(config_, k_); }
  iterator end() const { return iterator(); }

 private:
  const FiniteConfiguration* config_;
  std::size_t k_;
};

inline SubsetsOfSize subsets_of_size(const FiniteConfiguration& config, std::size_t k) {
  return SubsetsOfSize(config, k);
}

/// One weighted atom of a discrete measure.
struct Atom {
  Point location;
  double weight;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A finite sum of weighted Dirac masses, atoms in canonical location order.
///
/// Multiplicity of a location is carried by its weight; locations never repeat.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  explicit DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (std::size_t i = 1; i < atoms_.size(); ++i) require_same_dim(atoms_[0].location, atoms_[i].location);
    for (const Atom& a : atoms_) {
      if (!std::isfinite(a.weight)) throw DomainError("atom weights must be finite");
    }
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    auto same = [](const Atom& a, const Atom& b) { return a.location == b.location; };
    if (std::adjacent_find(atoms_.begin(), atoms_.end(), same) != atoms_.end()) {
      throw OverlapError("discrete measure has two atoms at one location");
    }
  }

  /// Embedding gamma -> sum of unit masses at its points.
  static DiscreteMeasure from_configuration(const FiniteConfiguration& config) {
    DiscreteMeasure out;
    out.atoms_.reserve(config.size());
    for (const Point& p : config) out.atoms_.push_back({p, 1.0});
    return out;
  }

  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  const Atom& operator[](std::size_t i) const noexcept { return atoms_[i]; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  auto begin() const noexcept { return atoms_.begin(); }
  auto end() const noexcept { return atoms_.end(); }

  double total_mass() const noexcept {
    double m = 0.0;
    for (const Atom& a : atoms_) m += a.weight;
    return m;
  }

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  std::vector<Atom> atoms_;
};

}  // namespace spcomb
