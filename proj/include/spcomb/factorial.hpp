#pragma once

// Falling-factorial measures (gamma)_n and (omega)_n, accessed only through
// pairings with symmetric kernels.
//
// Pairing convention: <f, (gamma)_n> is the sum of f over all ORDERED n-tuples
// of DISTINCT points of gamma. For symmetric f this is n! times the sum over
// n-subsets, and it makes E_phi(gamma) = sum_n <phi^{(x)n}, (gamma)_n> / n!
// hold exactly as a finite sum.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "spcomb/configuration.hpp"
#include "spcomb/kernel.hpp"
#include "spcomb/numeric.hpp"
#include "spcomb/test_function.hpp"

namespace spcomb {

namespace detail {

inline void sort_points(std::vector<const Point*>& ptrs) {
  std::sort(ptrs.begin(), ptrs.end(), [](const Point* a, const Point* b) { return *a < *b; });
}

}  // namespace detail

/// <f, (gamma)_n> for n = f.order(). Zero when n > |gamma|; the scalar f() when n = 0.
inline double pair_factorial(const FiniteConfiguration& config, const SymmetricKernel& f) {
  const std::size_t n = f.order();
  if (n == 0) return f.eval_sorted({});
  if (n > config.size()) return 0.0;
  KahanSum sum;
  std::vector<const Point*> args(n);
  for_each_index_subset(config.size(), n, [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < n; ++i) args[i] = &config[idx[i]];
    sum += f.eval_sorted(args);
  });
  return factorial(n) * sum.value();
}

/// <f(x, .), (gamma)_{n-1}>: the pairing of the section of f at x with the
/// (n-1)-th falling factorial of gamma. Requires f.order() >= 1.
inline double pair_factorial_section(const FiniteConfiguration& config, const SymmetricKernel& f,
                                     const Point& x) {
  if (f.order() == 0) throw ArityError("section of an order-0 kernel");
  const std::size_t m = f.order() - 1;
  if (m > config.size()) return 0.0;
  KahanSum sum;
  std::vector<const Point*> args(m + 1);
  for_each_index_subset(config.size(), m, [&](std::span<const std::size_t> idx) {
    args[0] = &x;
    for (std::size_t i = 0; i < m; ++i) args[i + 1] = &config[idx[i]];
    detail::sort_points(args);
    sum += f.eval_sorted(args);
  });
  return factorial(m) * sum.value();
}

/// <f, (omega)_n> for a discrete measure, from the sequential product formula
/// (omega)_n(x_1..x_n) = omega(x_1) (omega(x_2) - delta_{x_1}(x_2)) ...
///
/// Enumerates ordered atom-index tuples with repetition; the j-th index i_j
/// contributes the factor c_{i_j} - #{l < j : i_l = i_j}. Branches whose
/// partial weight is exactly zero are pruned, so unit weights cost the same as
/// injective enumeration.
inline double pair_factorial_measure(const DiscreteMeasure& measure, const SymmetricKernel& f) {
  const std::size_t n = f.order();
  if (n == 0) return f.eval_sorted({});
  const std::size_t atoms = measure.size();
  KahanSum sum;
  std::vector<std::size_t> used(atoms, 0);
  std::vector<const Point*> args(n);
  std::vector<const Point*> sorted(n);

  auto rec = [&](auto& self, std::size_t depth, double weight) -> void {
    if (depth == n) {
      sorted = args;
      detail::sort_points(sorted);
      sum += weight * f.eval_sorted(sorted);
      return;
    }
    for (std::size_t i = 0; i < atoms; ++i) {
      const double factor = measure[i].weight - static_cast<double>(used[i]);
      const double w = weight * factor;
      if (w == 0.0) continue;
      ++used[i];
      args[depth] = &measure[i].location;
      self(self, depth + 1, w);
      --used[i];
    }
  };
  rec(rec, 0, 1.0);
  return sum.value();
}

/// E_phi(gamma) = prod_{x in gamma} (1 + phi(x)). Throws DomainError when
/// 1 + phi(x) <= 0 at some x in gamma.
inline double generating_functional(const FiniteConfiguration& config, const TestFunction& phi) {
  double p = 1.0;
  for (const Point& x : config) {
    const double v = 1.0 + phi(x);
    if (!(v > 0.0)) throw DomainError("generating functional: 1 + phi(x) <= 0 at a point of the configuration");
    p *= v;
  }
  return p;
}

/// sum_{n=0}^{|gamma|} <phi^{(x)n}, (gamma)_n> / n!, the factorial-series side of E_phi.
inline double generating_functional_series(const FiniteConfiguration& config, const TestFunction& phi) {
  KahanSum sum;
  for (std::size_t n = 0; n <= config.size(); ++n) {
    sum += pair_factorial(config, SymmetricKernel::tensor_power(phi, n)) / factorial(n);
  }
  return sum.value();
}

struct ChuVandermonde {
  double lhs;
  double rhs;
};

/// Both sides of (g1 u g2)_n = sum_k C(n,k) (g1)_k (x) (g2)_{n-k}, paired with phi^{(x)n}.
inline ChuVandermonde check_chu_vandermonde(const FiniteConfiguration& first, const FiniteConfiguration& second,
                                            std::size_t n, const TestFunction& phi) {
  const FiniteConfiguration joined = union_disjoint(first, second);
  ChuVandermonde out{};
  out.lhs = pair_factorial(joined, SymmetricKernel::tensor_power(phi, n));
  KahanSum rhs;
  for (std::size_t k = 0; k <= n; ++k) {
    const double a = pair_factorial(first, SymmetricKernel::tensor_power(phi, k));
    if (a == 0.0) continue;
    rhs += binomial(n, k) * a * pair_factorial(second, SymmetricKernel::tensor_power(phi, n - k));
  }
  out.rhs = rhs.value();
  return out;
}

/// binom(gamma, n) paired with f: <f, (gamma)_n> / n!. n must equal f.order().
inline double newton_binomial(const FiniteConfiguration& config, std::size_t n, const SymmetricKernel& f) {
  if (n != f.order()) throw ArityError("newton_binomial: n differs from kernel order");
  return pair_factorial(config, f) / factorial(n);
}

inline double newton_binomial(const DiscreteMeasure& measure, std::size_t n, const SymmetricKernel& f) {
  if (n != f.order()) throw ArityError("newton_binomial: n differs from kernel order");
  return pair_factorial_measure(measure, f) / factorial(n);
}

}  // namespace spcomb
