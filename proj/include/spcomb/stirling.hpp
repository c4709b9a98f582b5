#pragma once

// Stirling kernels as the change of basis between falling-factorial pairings
// <(gamma)_n, f> and tensor pairings <gamma^{(x)n}, f>. Both expansions run
// over compositions i_1 + ... + i_k = n into positive parts, with f evaluated
// on the diagonal (x_1 repeated i_1 times, ..., x_k repeated i_k times).
// The kernels themselves are never materialized.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "spcomb/configuration.hpp"
#include "spcomb/errors.hpp"
#include "spcomb/factorial.hpp"
#include "spcomb/kernel.hpp"
#include "spcomb/numeric.hpp"

namespace spcomb {

/// Ordered parts, each >= 1.
struct Composition {
  std::vector<std::size_t> parts;

  std::size_t total() const noexcept { return std::accumulate(parts.begin(), parts.end(), std::size_t{0}); }
  friend bool operator==(const Composition&, const Composition&) = default;
};

/// Calls fn(parts) for each composition of n into exactly k positive parts,
/// in lexicographic order. (0, 0) yields the single empty composition.
template <class Fn>
void for_each_composition(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n || (k == 0 && n != 0)) return;
  std::vector<std::size_t> parts(k);
  auto rec = [&](auto& self, std::size_t slot, std::size_t remaining) -> void {
    if (slot + 1 == k) {
      parts[slot] = remaining;
      fn(std::span<const std::size_t>(parts));
      return;
    }
    const std::size_t slots_after = k - slot - 1;
    for (std::size_t p = 1; p + slots_after <= remaining; ++p) {
      parts[slot] = p;
      self(self, slot + 1, remaining - p);
    }
  };
  if (k == 0) {
    fn(std::span<const std::size_t>(parts));
    return;
  }
  rec(rec, 0, n);
}

inline std::vector<Composition> compositions(std::size_t n, std::size_t k) {
  std::vector<Composition> out;
  for_each_composition(n, k, [&](std::span<const std::size_t> p) {
    out.push_back(Composition{std::vector<std::size_t>(p.begin(), p.end())});
  });
  return out;
}

namespace detail {

// Builds the diagonal argument list (points[0] x parts[0], ..., points[k-1] x parts[k-1]).
inline void diagonal_args(std::span<const Point* const> points, std::span<const std::size_t> parts,
                          std::vector<const Point*>& out) {
  out.clear();
  for (std::size_t j = 0; j < parts.size(); ++j) out.insert(out.end(), parts[j], points[j]);
  sort_points(out);
}

}  // namespace detail

/// <gamma^{(x)n}, f>: sum of f over all |gamma|^n ordered tuples with repetition.
inline double pair_tensor(const FiniteConfiguration& config, const SymmetricKernel& f) {
  const std::size_t n = f.order();
  KahanSum sum;
  std::vector<const Point*> args(n);
  for_each_tuple(config.size(), n, [&](std::span<const std::size_t> t) {
    for (std::size_t i = 0; i < n; ++i) args[i] = &config[t[i]];
    detail::sort_points(args);
    sum += f.eval_sorted(args);
  });
  return sum.value();
}

/// First-kind expansion of <(gamma)_n, f> through tensor pairings:
///   sum_{k=1..n} (n!/k!) <gamma^{(x)k}, sum_{i_1+..+i_k=n} (-1)^{n+k} / (i_1...i_k) f(diag)>.
/// The magnitude field carries the sum of absolute term values.
inline SignedSum expand_factorial_via_tensor_detailed(const FiniteConfiguration& config, const SymmetricKernel& f) {
  const std::size_t n = f.order();
  if (n == 0) {
    const double v = f.eval_sorted({});
    return {v, std::abs(v)};
  }
  KahanSum value;
  KahanSum magnitude;
  std::vector<const Point*> points;
  std::vector<const Point*> args;
  for (std::size_t k = 1; k <= n; ++k) {
    const double outer = factorial(n) / factorial(k);
    const double sign = (n + k) % 2 == 0 ? 1.0 : -1.0;
    points.resize(k);
    for_each_composition(n, k, [&](std::span<const std::size_t> parts) {
      double prod = 1.0;
      for (std::size_t p : parts) prod *= static_cast<double>(p);
      const double coef = sign * outer / prod;
      for_each_tuple(config.size(), k, [&](std::span<const std::size_t> t) {
        for (std::size_t j = 0; j < k; ++j) points[j] = &config[t[j]];
        detail::diagonal_args(points, parts, args);
        const double term = coef * f.eval_sorted(args);
        value += term;
        magnitude += std::abs(term);
      });
    });
  }
  return {value.value(), magnitude.value()};
}

inline double expand_factorial_via_tensor(const FiniteConfiguration& config, const SymmetricKernel& f) {
  return expand_factorial_via_tensor_detailed(config, f).value;
}

/// Second-kind expansion of <gamma^{(x)n}, f> through falling-factorial pairings:
///   sum_{k=1..n} (1/k!) <(gamma)_k, sum_{i_1+..+i_k=n} multinomial(n; i) f(diag)>.
/// The inner function is not symmetric per composition, so (gamma)_k is paired
/// over ordered injective tuples directly.
inline SignedSum expand_tensor_via_factorial_detailed(const FiniteConfiguration& config, const SymmetricKernel& f) {
  const std::size_t n = f.order();
  if (n == 0) {
    const double v = f.eval_sorted({});
    return {v, std::abs(v)};
  }
  KahanSum value;
  KahanSum magnitude;
  std::vector<const Point*> points;
  std::vector<const Point*> args;
  for (std::size_t k = 1; k <= n && k <= config.size(); ++k) {
    const double outer = 1.0 / factorial(k);
    points.resize(k);
    for_each_composition(n, k, [&](std::span<const std::size_t> parts) {
      double multinomial = factorial(n);
      for (std::size_t p : parts) multinomial /= factorial(p);
      const double coef = outer * multinomial;
      for_each_injective_tuple(config.size(), k, [&](std::span<const std::size_t> t) {
        for (std::size_t j = 0; j < k; ++j) points[j] = &config[t[j]];
        detail::diagonal_args(points, parts, args);
        const double term = coef * f.eval_sorted(args);
        value += term;
        magnitude += std::abs(term);
      });
    });
  }
  return {value.value(), magnitude.value()};
}

inline double expand_tensor_via_factorial(const FiniteConfiguration& config, const SymmetricKernel& f) {
  return expand_tensor_via_factorial_detailed(config, f).value;
}

// Classical Stirling numbers: the one-atom shadow of the kernels, computed
// from the same composition sums in exact integer arithmetic.

inline constexpr std::size_t kMaxStirlingN = 20;

namespace detail {

__extension__ typedef __int128 i128;

inline i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("stirling: 128-bit overflow");
  return r;
}

inline i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("stirling: 128-bit overflow");
  return r;
}

inline i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline i128 factorial128(std::size_t n) {
  i128 f = 1;
  for (std::size_t i = 2; i <= n; ++i) f = checked_mul(f, static_cast<i128>(i));
  return f;
}

inline void check_stirling_domain(long long n, long long k) {
  if (n < 0 || k < 0) throw DomainError("stirling: negative argument");
  if (k > n) throw DomainError("stirling: k > n");
  if (n > static_cast<long long>(kMaxStirlingN)) {
    throw DomainError("stirling: n > " + std::to_string(kMaxStirlingN) + " is not supported");
  }
}

inline std::int64_t to_int64(i128 v) {
  if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN)) {
    throw OverflowError("stirling: result exceeds 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

/// Unsigned Stirling number of the first kind,
///   c(n,k) = (n!/k!) * sum over compositions of n into k parts of 1/(i_1...i_k),
/// summed as an exact reduced fraction.
inline std::int64_t stirling_first_unsigned(long long n, long long k) {
  using detail::i128;
  detail::check_stirling_domain(n, k);
  i128 num = 0;
  i128 den = 1;
  for_each_composition(static_cast<std::size_t>(n), static_cast<std::size_t>(k),
                       [&](std::span<const std::size_t> parts) {
                         i128 prod = 1;
                         for (std::size_t p : parts) prod = detail::checked_mul(prod, static_cast<i128>(p));
                         // num/den + 1/prod
                         num = detail::checked_add(detail::checked_mul(num, prod), den);
                         den = detail::checked_mul(den, prod);
                         const i128 g = detail::gcd128(num, den);
                         num /= g;
                         den /= g;
                       });
  if (num == 0) return 0;
  i128 scale = detail::factorial128(static_cast<std::size_t>(n)) / detail::factorial128(static_cast<std::size_t>(k));
  const i128 g = detail::gcd128(scale, den);
  scale /= g;
  den /= g;
  if (num % den != 0) throw OverflowError("stirling: composition sum is not integral");
  return detail::to_int64(detail::checked_mul(scale, num / den));
}

/// Signed Stirling number of the first kind, (-1)^{n+k} c(n,k).
inline std::int64_t stirling_first(long long n, long long k) {
  const std::int64_t c = stirling_first_unsigned(n, k);
  return (n + k) % 2 == 0 ? c : -c;
}

/// Stirling number of the second kind,
///   S(n,k) = (1/k!) * sum over compositions of n into k parts of n!/(i_1!...i_k!).
inline std::int64_t stirling_second(long long n, long long k) {
  using detail::i128;
  detail::check_stirling_domain(n, k);
  const i128 nfact = detail::factorial128(static_cast<std::size_t>(n));
  i128 total = 0;
  for_each_composition(static_cast<std::size_t>(n), static_cast<std::size_t>(k),
                       [&](std::span<const std::size_t> parts) {
                         i128 m = nfact;
                         for (std::size_t p : parts) m /= detail::factorial128(p);
                         total = detail::checked_add(total, m);
                       });
  const i128 kfact = detail::factorial128(static_cast<std::size_t>(k));
  if (total % kfact != 0) throw OverflowError("stirling: composition sum is not divisible by k!");
  return detail::to_int64(total / kfact);
}

}  // namespace spcomb
