#pragma once

#include <functional>
#include <utility>
#include <variant>

#include "spcomb/configuration.hpp"
#include "spcomb/factorial.hpp"
#include "spcomb/k_transform.hpp"
#include "spcomb/kernel.hpp"
#include "spcomb/test_function.hpp"

namespace spcomb {

/// A function F on finite configurations.
class Observable {
 public:
  /// E_phi(gamma) = prod (1 + phi(x)).
  struct GeneratingFunctional {
    TestFunction phi;
  };
  /// <f, (gamma)_n>.
  struct NewtonMonomial {
    SymmetricKernel f;
  };
  /// (KG)(gamma).
  struct KTransformOf {
    QuasiObservable g;
  };
  struct Custom {
    std::function<double(const FiniteConfiguration&)> fn;
  };

  static Observable generating_functional(TestFunction phi) { return Observable(GeneratingFunctional{std::move(phi)}); }
  static Observable newton_monomial(SymmetricKernel f) { return Observable(NewtonMonomial{std::move(f)}); }
  static Observable k_transform_of(QuasiObservable g) { return Observable(KTransformOf{std::move(g)}); }
  static Observable custom(std::function<double(const FiniteConfiguration&)> fn) { return Observable(Custom{std::move(fn)}); }

  /// F(gamma) = |gamma|.
  static Observable cardinality() {
    return custom([](const FiniteConfiguration& c) { return static_cast<double>(c.size()); });
  }
  static Observable constant(double value) {
    return custom([value](const FiniteConfiguration&) { return value; });
  }

  double operator()(const FiniteConfiguration& config) const {
    return std::visit(Overloaded{
                          [&](const GeneratingFunctional& d) { return spcomb::generating_functional(config, d.phi); },
                          [&](const NewtonMonomial& d) { return pair_factorial(config, d.f); },
                          [&](const KTransformOf& d) { return k_transform(d.g, config); },
                          [&](const Custom& d) { return d.fn(config); },
                      },
                      descriptor_);
  }

  const std::variant<GeneratingFunctional, NewtonMonomial, KTransformOf, Custom>& descriptor() const noexcept {
    return descriptor_;
  }

 private:
  explicit Observable(std::variant<GeneratingFunctional, NewtonMonomial, KTransformOf, Custom> d)
      : descriptor_(std::move(d)) {}

  std::variant<GeneratingFunctional, NewtonMonomial, KTransformOf, Custom> descriptor_;
};

}  // namespace spcomb
