#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spcomb/errors.hpp"
#include "spcomb/numeric.hpp"
#include "spcomb/point.hpp"
#include "spcomb/test_function.hpp"

namespace spcomb {

namespace detail {
struct KernelNode;
}

/// Symmetric function f(x_1, ..., x_n) of n points.
///
/// Arguments are sorted canonically before evaluation, so permuting them gives
/// a bitwise identical result.
class SymmetricKernel {
 public:
  /// phi(x_1) * ... * phi(x_n).
  static SymmetricKernel tensor_power(TestFunction phi, std::size_t order);
  /// (1/n!) * sum over permutations pi of prod_i phi_i(x_pi(i)).
  static SymmetricKernel symmetrized_product(std::vector<TestFunction> factors);
  static SymmetricKernel constant(double value, std::size_t order);
  static SymmetricKernel scaled(double factor, SymmetricKernel inner);
  static SymmetricKernel sum(std::vector<SymmetricKernel> terms);

  std::size_t order() const noexcept { return order_; }

  double operator()(std::span<const Point> args) const;
  double operator()(std::initializer_list<Point> args) const {
    return (*this)(std::span<const Point>(args.begin(), args.size()));
  }

  /// Evaluation for arguments already in canonical order.
  double eval_sorted(std::span<const Point* const> args) const;

  const detail::KernelNode& node() const noexcept { return *node_; }

  friend bool operator==(const SymmetricKernel& a, const SymmetricKernel& b);

 private:
  SymmetricKernel(std::shared_ptr<const detail::KernelNode> node, std::size_t order)
      : node_(std::move(node)), order_(order) {}

  std::shared_ptr<const detail::KernelNode> node_;
  std::size_t order_;
};

struct TensorPowerKernel {
  TestFunction phi;
  friend bool operator==(const TensorPowerKernel&, const TensorPowerKernel&) = default;
};

struct SymmetrizedProductKernel {
  std::vector<TestFunction> factors;
  friend bool operator==(const SymmetrizedProductKernel&, const SymmetrizedProductKernel&) = default;
};

struct ConstantKernel {
  double value;
  friend bool operator==(const ConstantKernel&, const ConstantKernel&) = default;
};

struct ScaledKernel {
  double factor;
  SymmetricKernel inner;
  friend bool operator==(const ScaledKernel&, const ScaledKernel&) = default;
};

struct SumKernel {
  std::vector<SymmetricKernel> terms;
  friend bool operator==(const SumKernel&, const SumKernel&) = default;
};

namespace detail {
struct KernelNode {
  std::variant<TensorPowerKernel, SymmetrizedProductKernel, ConstantKernel, ScaledKernel, SumKernel> value;
};
}  // namespace detail

inline bool operator==(const SymmetricKernel& a, const SymmetricKernel& b) {
  return a.order_ == b.order_ && (a.node_ == b.node_ || a.node_->value == b.node_->value);
}

inline SymmetricKernel SymmetricKernel::tensor_power(TestFunction phi, std::size_t order) {
  return SymmetricKernel(
      std::make_shared<const detail::KernelNode>(detail::KernelNode{TensorPowerKernel{std::move(phi)}}), order);
}

inline SymmetricKernel SymmetricKernel::symmetrized_product(std::vector<TestFunction> factors) {
  const std::size_t n = factors.size();
  return SymmetricKernel(std::make_shared<const detail::KernelNode>(
                             detail::KernelNode{SymmetrizedProductKernel{std::move(factors)}}),
                         n);
}

inline SymmetricKernel SymmetricKernel::constant(double value, std::size_t order) {
  if (!std::isfinite(value)) throw DomainError("constant kernel value must be finite");
  return SymmetricKernel(std::make_shared<const detail::KernelNode>(detail::KernelNode{ConstantKernel{value}}),
                         order);
}

inline SymmetricKernel SymmetricKernel::scaled(double factor, SymmetricKernel inner) {
  if (!std::isfinite(factor)) throw DomainError("scale factor must be finite");
  const std::size_t n = inner.order();
  return SymmetricKernel(
      std::make_shared<const detail::KernelNode>(detail::KernelNode{ScaledKernel{factor, std::move(inner)}}), n);
}

inline SymmetricKernel SymmetricKernel::sum(std::vector<SymmetricKernel> terms) {
  if (terms.empty()) throw ArityError("sum of kernels needs at least one term");
  const std::size_t n = terms.front().order();
  for (const SymmetricKernel& t : terms) {
    if (t.order() != n) throw ArityError("sum of kernels requires equal orders");
  }
  return SymmetricKernel(
      std::make_shared<const detail::KernelNode>(detail::KernelNode{SumKernel{std::move(terms)}}), n);
}

inline double SymmetricKernel::eval_sorted(std::span<const Point* const> args) const {
  return std::visit(
      Overloaded{
          [&](const TensorPowerKernel& k) {
            double p = 1.0;
            for (const Point* x : args) p *= k.phi(*x);
            return p;
          },
          [&](const SymmetrizedProductKernel& k) {
            const std::size_t n = args.size();
            if (n == 0) return 1.0;
            // values[i][j] = phi_i(x_j)
            std::vector<double> values(n * n);
            for (std::size_t i = 0; i < n; ++i) {
              for (std::size_t j = 0; j < n; ++j) values[i * n + j] = k.factors[i](*args[j]);
            }
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            double total = 0.0;
            do {
              double p = 1.0;
              for (std::size_t i = 0; i < n; ++i) p *= values[i * n + perm[i]];
              total += p;
            } while (std::next_permutation(perm.begin(), perm.end()));
            return total / factorial(n);
          },
          [&](const ConstantKernel& k) { return k.value; },
          [&](const ScaledKernel& k) { return k.factor * k.inner.eval_sorted(args); },
          [&](const SumKernel& k) {
            double s = 0.0;
            for (const SymmetricKernel& t : k.terms) s += t.eval_sorted(args);
            return s;
          },
      },
      node_->value);
}

inline double SymmetricKernel::operator()(std::span<const Point> args) const {
  if (args.size() != order_) {
    throw ArityError("kernel of order " + std::to_string(order_) + " applied to " + std::to_string(args.size()) +
                     " points");
  }
  std::vector<const Point*> sorted(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) sorted[i] = &args[i];
  std::sort(sorted.begin(), sorted.end(), [](const Point* a, const Point* b) { return *a < *b; });
  return eval_sorted(sorted);
}

/// Free-function form of kernel evaluation.
inline double eval_kernel(const SymmetricKernel& f, std::span<const Point> xs) { return f(xs); }

}  // namespace spcomb
