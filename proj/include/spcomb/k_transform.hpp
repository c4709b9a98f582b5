#pragma once

// K-transform (KG)(gamma) = sum_{eta subset gamma} G(eta), its Moebius
// inverse, the star convolution that K turns into a pointwise product, and the
// same three operations on sequences N -> R.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spcomb/configuration.hpp"
#include "spcomb/errors.hpp"
#include "spcomb/kernel.hpp"
#include "spcomb/numeric.hpp"

namespace spcomb {

/// A function G on finite configurations with a declared support order m:
/// G(eta) = 0 whenever |eta| > m. The declaration is trusted.
class QuasiObservable {
 public:
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  /// G(eta) = kernels[|eta|](eta); zero above kernels.size() - 1.
  struct ByKernels {
    std::vector<SymmetricKernel> kernels;
  };
  /// G(eta) = 1 if |eta| = cardinality, else 0.
  struct Indicator {
    std::size_t cardinality;
  };
  struct Custom {
    std::function<double(const FiniteConfiguration&)> fn;
  };

  static QuasiObservable by_kernels(std::vector<SymmetricKernel> kernels) {
    if (kernels.empty()) throw ArityError("by_kernels needs at least the order-0 kernel");
    for (std::size_t n = 0; n < kernels.size(); ++n) {
      if (kernels[n].order() != n) throw ArityError("by_kernels: kernel at position n must have order n");
    }
    const std::size_t m = kernels.size() - 1;
    return QuasiObservable(ByKernels{std::move(kernels)}, m);
  }

  /// G = f on configurations of size f.order(), zero elsewhere.
  static QuasiObservable single_order(SymmetricKernel f) {
    std::vector<SymmetricKernel> kernels;
    for (std::size_t n = 0; n < f.order(); ++n) kernels.push_back(SymmetricKernel::constant(0.0, n));
    kernels.push_back(std::move(f));
    return by_kernels(std::move(kernels));
  }

  static QuasiObservable indicator(std::size_t cardinality) {
    return QuasiObservable(Indicator{cardinality}, cardinality);
  }

  static QuasiObservable custom(std::function<double(const FiniteConfiguration&)> fn,
                                std::size_t support_order = kUnbounded) {
    return QuasiObservable(Custom{std::move(fn)}, support_order);
  }

  double operator()(const FiniteConfiguration& eta) const {
    return std::visit(
        Overloaded{
            [&](const ByKernels& g) {
              if (eta.size() >= g.kernels.size()) return 0.0;
              std::vector<const Point*> args(eta.size());
              for (std::size_t i = 0; i < eta.size(); ++i) args[i] = &eta[i];
              return g.kernels[eta.size()].eval_sorted(args);
            },
            [&](const Indicator& g) { return eta.size() == g.cardinality ? 1.0 : 0.0; },
            [&](const Custom& g) { return g.fn(eta); },
        },
        descriptor_);
  }

  std::size_t support_order() const noexcept { return support_order_; }
  bool is_custom() const noexcept { return std::holds_alternative<Custom>(descriptor_); }
  const std::variant<ByKernels, Indicator, Custom>& descriptor() const noexcept { return descriptor_; }

 private:
  QuasiObservable(std::variant<ByKernels, Indicator, Custom> d, std::size_t m)
      : descriptor_(std::move(d)), support_order_(m) {}

  std::variant<ByKernels, Indicator, Custom> descriptor_;
  std::size_t support_order_;
};

/// (KG)(gamma) = sum over subsets eta of gamma with |eta| <= support_order of G(eta).
inline double k_transform(const QuasiObservable& g, const FiniteConfiguration& config) {
  const std::size_t top = std::min(g.support_order(), config.size());
  KahanSum sum;
  for (std::size_t k = 0; k <= top; ++k) {
    for_each_index_subset(config.size(), k, [&](std::span<const std::size_t> idx) {
      sum += g(config.select(idx));
    });
  }
  return sum.value();
}

namespace detail {
inline constexpr std::size_t kMaxMaskBits = 30;

inline void require_mask_size(const FiniteConfiguration& config, const char* what) {
  if (config.size() > kMaxMaskBits) {
    throw InvalidArgument(std::string(what) + ": configuration too large for exhaustive enumeration");
  }
}
}  // namespace detail

/// (K^{-1} F)(eta) = sum_{xi subset eta} (-1)^{|eta \ xi|} F(xi), with the
/// absolute sum of terms as magnitude.
template <class Observable>
SignedSum k_inverse_detailed(const Observable& observable, const FiniteConfiguration& eta) {
  detail::require_mask_size(eta, "k_inverse");
  const std::size_t n = eta.size();
  KahanSum value;
  KahanSum magnitude;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const auto removed = n - static_cast<std::size_t>(__builtin_popcountll(mask));
    const double f = observable(eta.select_mask(mask));
    value += removed % 2 == 0 ? f : -f;
    magnitude += std::abs(f);
  }
  return {value.value(), magnitude.value()};
}

template <class Observable>
double k_inverse(const Observable& observable, const FiniteConfiguration& eta) {
  return k_inverse_detailed(observable, eta).value;
}

/// K^{-1} F as a quasi-observable (unbounded support).
template <class Observable>
QuasiObservable k_inverse_of(Observable observable) {
  return QuasiObservable::custom(
      [obs = std::move(observable)](const FiniteConfiguration& eta) { return k_inverse(obs, eta); });
}

/// (G1 * G2)(eta) = sum over ordered partitions eta = eta1 u eta2 u eta3 into
/// disjoint, possibly empty parts of G1(eta1 u eta2) G2(eta2 u eta3).
/// Enumerates all 3^|eta| label assignments.
inline double star_convolution(const QuasiObservable& g1, const QuasiObservable& g2, const FiniteConfiguration& eta) {
  detail::require_mask_size(eta, "star_convolution");
  const std::size_t n = eta.size();
  std::vector<std::uint8_t> label(n, 0);  // 0: eta1, 1: eta2, 2: eta3
  KahanSum sum;
  while (true) {
    std::uint64_t left = 0;
    std::uint64_t right = 0;
    std::size_t left_size = 0;
    std::size_t right_size = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (label[i] <= 1) {
        left |= std::uint64_t{1} << i;
        ++left_size;
      }
      if (label[i] >= 1) {
        right |= std::uint64_t{1} << i;
        ++right_size;
      }
    }
    if (left_size <= g1.support_order() && right_size <= g2.support_order()) {
      const double a = g1(eta.select_mask(left));
      if (a != 0.0) sum += a * g2(eta.select_mask(right));
    }
    std::size_t i = 0;
    while (i < n && ++label[i] == 3) label[i++] = 0;
    if (i == n) break;
  }
  return sum.value();
}

/// G1 * G2 as a quasi-observable; support order m1 + m2.
inline QuasiObservable star(QuasiObservable g1, QuasiObservable g2) {
  const std::size_t m1 = g1.support_order();
  const std::size_t m2 = g2.support_order();
  const std::size_t m = (m1 == QuasiObservable::kUnbounded || m2 == QuasiObservable::kUnbounded)
                            ? QuasiObservable::kUnbounded
                            : m1 + m2;
  return QuasiObservable::custom(
      [a = std::move(g1), b = std::move(g2)](const FiniteConfiguration& eta) { return star_convolution(a, b, eta); },
      m);
}

// ---------------------------------------------------------------------------
// Sequences N -> R.

struct ZeroTail {
  friend bool operator==(const ZeroTail&, const ZeroTail&) = default;
};
/// a(n) = ratio^n beyond the explicit values.
struct GeometricTail {
  double ratio;
  friend bool operator==(const GeometricTail&, const GeometricTail&) = default;
};

/// Explicit values a(0..m-1) followed by a tail rule for n >= m.
struct SequenceFn {
  std::vector<double> values;
  std::variant<ZeroTail, GeometricTail> tail = ZeroTail{};

  double operator()(std::size_t n) const {
    if (n < values.size()) return values[n];
    if (const auto* g = std::get_if<GeometricTail>(&tail)) return std::pow(g->ratio, static_cast<double>(n));
    return 0.0;
  }

  /// True when every value, explicit or not, follows ratio^n.
  bool is_pure_geometric() const {
    const auto* g = std::get_if<GeometricTail>(&tail);
    if (g == nullptr) return false;
    for (std::size_t n = 0; n < values.size(); ++n) {
      if (values[n] != std::pow(g->ratio, static_cast<double>(n))) return false;
    }
    return true;
  }

  /// True when the sequence has finite support.
  bool is_finitely_supported() const { return std::holds_alternative<ZeroTail>(tail); }

  friend bool operator==(const SequenceFn&, const SequenceFn&) = default;
};

/// (Ka)(n) = sum_{k=0}^n C(n,k) a(k).
inline double seq_k(const SequenceFn& a, std::size_t n) {
  KahanSum sum;
  for (std::size_t k = 0; k <= n; ++k) sum += binomial(n, k) * a(k);
  return sum.value();
}

/// (K^{-1} b)(n) = sum_{k=0}^n C(n,k) (-1)^{n-k} b(k).
inline SignedSum seq_k_inverse_detailed(const SequenceFn& b, std::size_t n) {
  KahanSum value;
  KahanSum magnitude;
  for (std::size_t k = 0; k <= n; ++k) {
    const double term = binomial(n, k) * b(k);
    value += (n - k) % 2 == 0 ? term : -term;
    magnitude += std::abs(term);
  }
  return {value.value(), magnitude.value()};
}

inline double seq_k_inverse(const SequenceFn& b, std::size_t n) { return seq_k_inverse_detailed(b, n).value; }

/// (a * b)(n) = sum_{j+k+l=n} n!/(j! k! l!) a(j+k) b(k+l).
///
/// The multinomial counts the ways to label n points as (first only, both,
/// second only); without it K(a * b) = Ka . Kb fails already for a = b = delta_1.
inline double seq_star(const SequenceFn& a, const SequenceFn& b, std::size_t n) {
  KahanSum sum;
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t k = 0; j + k <= n; ++k) {
      const std::size_t l = n - j - k;
      sum += binomial(n, j) * binomial(n - j, k) * a(j + k) * b(k + l);
    }
  }
  return sum.value();
}

/// The coherent state e_lambda(n) = lambda^n.
inline SequenceFn coherent_state(double lambda) { return SequenceFn{{}, GeometricTail{lambda}}; }

/// (K e_lambda)(n) = (1 + lambda)^n.
inline double coherent_k(double lambda, std::size_t n) { return std::pow(1.0 + lambda, static_cast<double>(n)); }

/// Ka as a whole sequence. Closed forms: K e_lambda = e_{1+lambda}; K 0 = 0.
/// Anything else has no representable tail.
inline SequenceFn seq_k_transform(const SequenceFn& a) {
  if (a.is_pure_geometric()) return coherent_state(1.0 + std::get<GeometricTail>(a.tail).ratio);
  if (a.is_finitely_supported()) {
    bool all_zero = true;
    for (double v : a.values) all_zero = all_zero && v == 0.0;
    if (all_zero) return SequenceFn{};
  }
  throw UnsupportedTailError("seq_k_transform: K of this sequence has no closed-form tail");
}

/// K^{-1} b as a whole sequence: K^{-1} e_mu = e_{mu-1}; K^{-1} 0 = 0.
inline SequenceFn seq_k_inverse_transform(const SequenceFn& b) {
  if (b.is_pure_geometric()) return coherent_state(std::get<GeometricTail>(b.tail).ratio - 1.0);
  if (b.is_finitely_supported()) {
    bool all_zero = true;
    for (double v : b.values) all_zero = all_zero && v == 0.0;
    if (all_zero) return SequenceFn{};
  }
  throw UnsupportedTailError("seq_k_inverse_transform: K^-1 of this sequence has no closed-form tail");
}

/// a * b as a whole sequence. Finite supports stay finite (length la + lb - 1);
/// coherent states compose as e_l * e_m = e_{l + m + l m}.
inline SequenceFn seq_star_transform(const SequenceFn& a, const SequenceFn& b) {
  if (a.is_finitely_supported() && b.is_finitely_supported()) {
    if (a.values.empty() || b.values.empty()) return SequenceFn{};
    const std::size_t len = a.values.size() + b.values.size() - 1;
    SequenceFn out;
    out.values.resize(len);
    for (std::size_t n = 0; n < len; ++n) out.values[n] = seq_star(a, b, n);
    return out;
  }
  if (a.is_pure_geometric() && b.is_pure_geometric()) {
    const double l = std::get<GeometricTail>(a.tail).ratio;
    const double m = std::get<GeometricTail>(b.tail).ratio;
    return coherent_state(l + m + l * m);
  }
  throw UnsupportedTailError("seq_star_transform: convolution has no closed-form tail");
}

}  // namespace spcomb
