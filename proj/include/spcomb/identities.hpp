#pragma once

// Exhaustive battery of the exact algebraic identities: every instance is a
// pair of independently computed values that must agree to a relative
// tolerance. Used by the `identities` CLI command and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spcomb/configuration.hpp"
#include "spcomb/difference.hpp"
#include "spcomb/errors.hpp"
#include "spcomb/factorial.hpp"
#include "spcomb/k_transform.hpp"
#include "spcomb/kernel.hpp"
#include "spcomb/numeric.hpp"
#include "spcomb/observable.hpp"
#include "spcomb/random.hpp"
#include "spcomb/serialization.hpp"
#include "spcomb/stirling.hpp"
#include "spcomb/test_function.hpp"

namespace spcomb {

struct IdentityConfig {
  std::size_t dimension = 2;
  /// |gamma| bound for the Stirling, K, star and difference identities.
  std::size_t max_config_size = 5;
  /// Kernel order bound for the same identities.
  std::size_t max_order = 5;
  /// |gamma_1| + |gamma_2| bound for Chu-Vandermonde.
  std::size_t chu_vandermonde_max_size = 6;
  std::size_t chu_vandermonde_max_order = 6;
  /// |gamma| bound for the E_phi product-vs-series identity.
  std::size_t series_max_size = 8;
  std::uint64_t seed = 42;
  double tolerance = 1e-10;

  /// Reads a config object; absent fields keep their defaults. Unknown
  /// fields, wrong types and out-of-range values raise FormatError.
  static IdentityConfig from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw FormatError("identity config must be a JSON object");
    IdentityConfig c;
    auto size_field = [&](const std::string& key, std::size_t& out, std::size_t lo, std::size_t hi) {
      const auto& v = j.at(key);
      if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(lo) ||
          v.get<long long>() > static_cast<long long>(hi)) {
        throw FormatError("config field '" + key + "' must be an integer in [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
      }
      out = v.get<std::size_t>();
    };
    for (const auto& [key, value] : j.items()) {
      if (key == "schema_version") {
        if (!value.is_number_integer() || value.get<long long>() != kSchemaVersion) {
          throw FormatError("unsupported schema_version");
        }
      } else if (key == "dimension") {
        size_field(key, c.dimension, 1, 3);
      } else if (key == "max_config_size") {
        size_field(key, c.max_config_size, 0, 8);
      } else if (key == "max_order") {
        size_field(key, c.max_order, 0, 8);
      } else if (key == "chu_vandermonde_max_size") {
        size_field(key, c.chu_vandermonde_max_size, 0, 9);
      } else if (key == "chu_vandermonde_max_order") {
        size_field(key, c.chu_vandermonde_max_order, 0, 9);
      } else if (key == "series_max_size") {
        size_field(key, c.series_max_size, 0, 12);
      } else if (key == "seed") {
        if (!value.is_number_unsigned()) throw FormatError("config field 'seed' must be a nonnegative integer");
        c.seed = value.get<std::uint64_t>();
      } else if (key == "tolerance") {
        if (!value.is_number() || !(value.get<double>() > 0.0)) {
          throw FormatError("config field 'tolerance' must be a positive number");
        }
        c.tolerance = value.get<double>();
      } else {
        throw FormatError("unknown config field '" + key + "'");
      }
    }
    return c;
  }

  nlohmann::json to_json() const {
    return {{"dimension", dimension},
            {"max_config_size", max_config_size},
            {"max_order", max_order},
            {"chu_vandermonde_max_size", chu_vandermonde_max_size},
            {"chu_vandermonde_max_order", chu_vandermonde_max_order},
            {"series_max_size", series_max_size},
            {"seed", seed},
            {"tolerance", tolerance}};
  }
};

struct IdentityRecord {
  std::string name;
  std::size_t instances_checked = 0;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  double tolerance = 0.0;

  bool passed() const { return max_rel_error <= tolerance; }

  void check(double lhs, double rhs, double scale = 0.0) {
    ++instances_checked;
    const double abs_err = lhs == rhs ? 0.0 : std::abs(lhs - rhs);
    // NaN must never pass
    const double rel_err = std::isnan(abs_err) ? INFINITY : relative_error(lhs, rhs, scale);
    max_abs_error = std::max(max_abs_error, abs_err);
    max_rel_error = std::max(max_rel_error, rel_err);
  }
};

struct IdentityReport {
  IdentityConfig config;
  std::vector<IdentityRecord> records;

  bool all_pass() const {
    return std::all_of(records.begin(), records.end(), [](const IdentityRecord& r) { return r.passed(); });
  }

  const IdentityRecord* find(const std::string& name) const {
    for (const auto& r : records) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }

  nlohmann::json to_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : records) {
      list.push_back({{"name", r.name},
                      {"instances_checked", r.instances_checked},
                      {"max_abs_error", r.max_abs_error},
                      {"max_rel_error", r.max_rel_error},
                      {"tolerance", r.tolerance},
                      {"status", r.passed() ? "pass" : "fail"}});
    }
    return {{"schema_version", kSchemaVersion},
            {"config", config.to_json()},
            {"identities", list},
            {"all_pass", all_pass()}};
  }
};

namespace detail {

inline Point uniform_point(CounterRng& rng, std::size_t d) {
  std::vector<double> c(d);
  for (double& x : c) x = rng.uniform();
  return Point(std::move(c));
}

inline Point filled(std::size_t d, double v) { return Point(std::vector<double>(d, v)); }

/// The fixed battery of test functions on [0,1]^d.
inline std::vector<TestFunction> battery_functions(std::size_t d) {
  return {
      TestFunction::indicator_box(filled(d, 0.2), filled(d, 0.8)),
      TestFunction::gaussian_bump(filled(d, 0.5), 0.3, 0.8),
      TestFunction::sum({TestFunction::scaled(0.5, TestFunction::indicator_box(filled(d, 0.0), filled(d, 0.5))),
                         TestFunction::gaussian_bump(filled(d, 0.3), 0.2, -0.4)}),
  };
}

/// Kernels of order n: a tensor power, a symmetrized product and a linear combination.
inline std::vector<SymmetricKernel> battery_kernels(const std::vector<TestFunction>& phis, std::size_t n) {
  std::vector<TestFunction> factors;
  for (std::size_t i = 0; i < n; ++i) factors.push_back(phis[1 + i % 2]);
  return {
      SymmetricKernel::tensor_power(phis[0], n),
      SymmetricKernel::symmetrized_product(std::move(factors)),
      SymmetricKernel::sum({SymmetricKernel::scaled(0.7, SymmetricKernel::tensor_power(phis[1], n)),
                            SymmetricKernel::constant(0.3, n)}),
  };
}

inline std::vector<QuasiObservable> battery_quasi_observables(const std::vector<TestFunction>& phis,
                                                              std::size_t max_order) {
  std::vector<SymmetricKernel> powers;
  for (std::size_t n = 0; n <= max_order; ++n) powers.push_back(SymmetricKernel::tensor_power(phis[1], n));
  return {
      QuasiObservable::by_kernels(std::move(powers)),
      QuasiObservable::indicator(2),
      QuasiObservable::by_kernels({SymmetricKernel::constant(0.5, 0), SymmetricKernel::tensor_power(phis[2], 1),
                                   SymmetricKernel::symmetrized_product({phis[0], phis[1]})}),
      QuasiObservable::single_order(battery_kernels(phis, 2)[2]),
  };
}

/// |G| as a quasi-observable with the same support.
inline QuasiObservable absolute(const QuasiObservable& g) {
  return QuasiObservable::custom([g](const FiniteConfiguration& eta) { return std::abs(g(eta)); },
                                 g.support_order());
}

/// Calls fn(sub) for every subset of `base` with at most `max_size` points.
template <class Fn>
void for_each_small_subset(const FiniteConfiguration& base, std::size_t max_size, Fn&& fn) {
  for (std::size_t k = 0; k <= std::min(max_size, base.size()); ++k) {
    for_each_index_subset(base.size(), k, [&](std::span<const std::size_t> idx) { fn(base.select(idx)); });
  }
}

}  // namespace detail

inline IdentityReport run_identity_battery(const IdentityConfig& cfg) {
  const std::size_t d = cfg.dimension;
  const auto phis = detail::battery_functions(d);

  const std::size_t base_size =
      std::max({cfg.max_config_size, cfg.chu_vandermonde_max_size, cfg.series_max_size});
  std::vector<Point> base_points;
  {
    CounterRng rng(cfg.seed, 0);
    while (base_points.size() < base_size) {
      Point p = detail::uniform_point(rng, d);
      if (std::find(base_points.begin(), base_points.end(), p) == base_points.end()) base_points.push_back(p);
    }
  }
  // probe points for birth operators, disjoint from the base
  std::vector<Point> probes;
  {
    CounterRng rng(cfg.seed, 1);
    while (probes.size() < 3) {
      Point p = detail::uniform_point(rng, d);
      if (std::find(base_points.begin(), base_points.end(), p) == base_points.end()) probes.push_back(p);
    }
  }
  auto prefix = [&](std::size_t n) {
    return FiniteConfiguration(std::vector<Point>(base_points.begin(), base_points.begin() + static_cast<long>(n)));
  };
  const FiniteConfiguration small_base = prefix(cfg.max_config_size);

  IdentityReport report;
  report.config = cfg;
  auto record = [](const std::string& name, double tolerance) { return IdentityRecord{name, 0, 0.0, 0.0, tolerance}; };

  // Chu-Vandermonde over every split of a subset of the base into (gamma_1, gamma_2).
  {
    IdentityRecord r = record("chu_vandermonde", cfg.tolerance);
    const FiniteConfiguration cv_base = prefix(cfg.chu_vandermonde_max_size);
    const std::size_t m = cv_base.size();
    std::vector<std::uint8_t> label(m, 0);  // 0: unused, 1: gamma_1, 2: gamma_2
    while (true) {
      std::vector<Point> first, second;
      for (std::size_t i = 0; i < m; ++i) {
        if (label[i] == 1) first.push_back(cv_base[i]);
        if (label[i] == 2) second.push_back(cv_base[i]);
      }
      const FiniteConfiguration g1(std::move(first)), g2(std::move(second));
      for (std::size_t n = 0; n <= cfg.chu_vandermonde_max_order; ++n) {
        for (const auto& phi : phis) {
          const auto cv = check_chu_vandermonde(g1, g2, n, phi);
          r.check(cv.lhs, cv.rhs);
        }
      }
      std::size_t i = 0;
      while (i < m && ++label[i] == 3) label[i++] = 0;
      if (i == m) break;
    }
    report.records.push_back(std::move(r));
  }

  // E_phi: product form against the falling-factorial series.
  {
    IdentityRecord r = record("generating_functional_series", cfg.tolerance);
    detail::for_each_small_subset(prefix(cfg.series_max_size), cfg.series_max_size,
                                  [&](const FiniteConfiguration& g) {
                                    for (const auto& phi : phis) {
                                      r.check(generating_functional(g, phi), generating_functional_series(g, phi));
                                    }
                                  });
    report.records.push_back(std::move(r));
  }

  // (omega)_n of a unit-weight measure against (gamma)_n.
  {
    IdentityRecord r = record("factorial_measure_unit_weights", cfg.tolerance);
    detail::for_each_small_subset(small_base, cfg.max_config_size, [&](const FiniteConfiguration& g) {
      const DiscreteMeasure omega = DiscreteMeasure::from_configuration(g);
      for (std::size_t n = 0; n <= cfg.max_order; ++n) {
        for (const auto& f : detail::battery_kernels(phis, n)) {
          r.check(pair_factorial_measure(omega, f), pair_factorial(g, f));
        }
      }
    });
    report.records.push_back(std::move(r));
  }

  // Death derivative of Newton monomials:
  //   D-_psi <f,(gamma)_n> = -n sum_x psi(x) <f(x,.), (gamma \ x)_{n-1}>.
  {
    IdentityRecord r = record("death_newton_monomial", cfg.tolerance);
    detail::for_each_small_subset(small_base, cfg.max_config_size, [&](const FiniteConfiguration& g) {
      for (std::size_t n = 1; n <= cfg.max_order; ++n) {
        for (const auto& f : detail::battery_kernels(phis, n)) {
          const Observable monomial = Observable::newton_monomial(f);
          const double base_value = monomial(g);
          for (const auto& psi : phis) {
            const double lhs = directional_death(monomial, g, psi);
            KahanSum rhs;
            double scale = 0.0;
            for (const Point& x : g) {
              const FiniteConfiguration rest = g.without(x);
              rhs += -static_cast<double>(n) * psi(x) * pair_factorial_section(rest, f, x);
              scale += std::abs(psi(x)) * (std::abs(monomial(rest)) + std::abs(base_value));
            }
            r.check(lhs, rhs.value(), scale);
          }
        }
      }
    });
    report.records.push_back(std::move(r));
  }

  // Birth gradient of Newton monomials, pointwise:
  //   D+_x <f,(gamma)_n> = n <f(x,.), (gamma)_{n-1}>.
  {
    IdentityRecord r = record("birth_newton_monomial", cfg.tolerance);
    detail::for_each_small_subset(small_base, cfg.max_config_size, [&](const FiniteConfiguration& g) {
      for (std::size_t n = 1; n <= cfg.max_order; ++n) {
        for (const auto& f : detail::battery_kernels(phis, n)) {
          const Observable monomial = Observable::newton_monomial(f);
          const double base_value = monomial(g);
          for (const Point& x : probes) {
            const double lhs = birth_gradient(monomial, g, x);
            const double rhs = static_cast<double>(n) * pair_factorial_section(g, f, x);
            r.check(lhs, rhs, std::abs(monomial(g.with(x))) + std::abs(base_value));
          }
        }
      }
    });
    report.records.push_back(std::move(r));
  }

  // Directional birth derivative of Newton monomials, both sides on the same
  // quadrature nodes:
  //   D+_psi <f,(gamma)_n> = n int psi(x) <f(x,.), (gamma)_{n-1}> dx.
  {
    IdentityRecord r = record("birth_directional_newton_monomial", cfg.tolerance);
    const TestFunction& psi = phis[1];
    const Quadrature q = GridQuadrature{psi.bounding_box(), 8};
    detail::for_each_small_subset(small_base, cfg.max_config_size, [&](const FiniteConfiguration& g) {
      for (std::size_t n = 1; n <= std::min<std::size_t>(cfg.max_order, 4); ++n) {
        const auto kernels = detail::battery_kernels(phis, n);
        for (const SymmetricKernel& f : {kernels[0], kernels[2]}) {
          const Observable monomial = Observable::newton_monomial(f);
          const double lhs = directional_birth(monomial, g, psi, q);
          const double rhs = integrate(q, [&](const Point& node) {
                               const double w = psi(node);
                               if (w == 0.0) return 0.0;
                               const Point x = avoid_collision(g, node);
                               return w * static_cast<double>(n) * pair_factorial_section(g, f, x);
                             }).value;
          const double scale = integrate(q, [&](const Point& node) {
                                 const Point x = avoid_collision(g, node);
                                 return std::abs(psi(node)) * (std::abs(monomial(g.with(x))) + std::abs(monomial(g)));
                               }).value;
          r.check(lhs, rhs, scale);
        }
      }
    });
    report.records.push_back(std::move(r));
  }

  // Birth then death returns to the start: D-_x F(gamma u x) = -D+_x F(gamma).
  {
    IdentityRecord r = record("birth_death_inverse", cfg.tolerance);
    const auto quasi = detail::battery_quasi_observables(phis, cfg.max_order);
    const std::vector<Observable> observables = {
        Observable::generating_functional(phis[2]),
        Observable::newton_monomial(detail::battery_kernels(phis, 2)[1]),
        Observable::k_transform_of(quasi[2]),
        Observable::cardinality(),
    };
    detail::for_each_small_subset(small_base, cfg.max_config_size, [&](const FiniteConfiguration& g) {
      for (const auto& f : observables) {
        for (const Point& x : probes) r.check(death_gradient(f, g.with(x), x), -birth_gradient(f, g, x));
      }
    });
    report.records.push_back(std::move(r));
  }

  // Classical difference operators on falling factorials:
  //   D+ (t)_n = n (t)_{n-1},  D- (t)_n = -n (t-1)_{n-1}.
  {
    IdentityRecord r = record("classical_difference_falling_factorial", cfg.tolerance);
    for (int twice_t = -6; twice_t <= 10; ++twice_t) {
      const double t = 0.5 * twice_t;
      for (std::size_t n = 1; n <= 8; ++n) {
        auto ff = [n](double s) { return falling_factorial_poly(s, n); };
        const double nn = static_cast<double>(n);
        const double scale_fwd = std::abs(ff(t + 1.0)) + std::abs(ff(t));
        const double scale_bwd = std::abs(ff(t - 1.0)) + std::abs(ff(t));
        r.check(classical_forward_diff(ff, t), nn * falling_factorial_poly(t, n - 1), scale_fwd);
        r.check(classical_backward_diff(ff, t), -nn * falling_factorial_poly(t - 1.0, n - 1), scale_bwd);
      }
    }
    report.records.push_back(std::move(r));
  }

  // First-kind Stirling expansion reproduces the falling-factorial pairing.
  {
    IdentityRecord r = record("stirling_factorial_via_tensor", cfg.tolerance);
    detail::for_each_small_subset(small_base, cfg.max_config_size, [&](const FiniteConfiguration& g) {
      for (std::size_t n = 0; n <= cfg.max_order; ++n) {
        for (const auto& f : detail::battery_kernels(phis, n)) {
          const SignedSum expansion = expand_factorial_via_tensor_detailed(g, f);
          r.check(expansion.value, pair_factorial(g, f), expansion.magnitude);
        }
      }
    });
    report.records.push_back(std::move(r));
  }

  // Second-kind Stirling expansion reproduces the tensor pairing.
  {
    IdentityRecord r = record("stirling_tensor_via_factorial", cfg.tolerance);
    detail::for_each_small_subset(small_base, cfg.max_config_size, [&](const FiniteConfiguration& g) {
      for (std::size_t n = 0; n <= cfg.max_order; ++n) {
        for (const auto& f : detail::battery_kernels(phis, n)) {
          const SignedSum expansion = expand_tensor_via_factorial_detailed(g, f);
          r.check(expansion.value, pair_tensor(g, f), expansion.magnitude);
        }
      }
    });
    report.records.push_back(std::move(r));
  }

  // sum_k s(n,k) S(k,m) = delta_{nm}, exact integers.
  {
    IdentityRecord r = record("stirling_inversion", 0.0);
    for (long long n = 0; n <= 10; ++n) {
      for (long long m = 0; m <= 10; ++m) {
        std::int64_t total = 0;
        for (long long k = std::min(n, m); k <= std::max(n, m); ++k) {
          if (k > n || m > k) continue;
          total += stirling_first(n, k) * stirling_second(k, m);
        }
        r.check(static_cast<double>(total), n == m ? 1.0 : 0.0);
      }
    }
    report.records.push_back(std::move(r));
  }

  const auto quasi = detail::battery_quasi_observables(phis, cfg.max_order);

  // K^{-1}(KG) = G on every subset.
  {
    IdentityRecord r = record("k_inverse_roundtrip", cfg.tolerance);
    detail::for_each_small_subset(small_base, cfg.max_config_size, [&](const FiniteConfiguration& eta) {
      for (const auto& g : quasi) {
        const auto kg = [&](const FiniteConfiguration& c) { return k_transform(g, c); };
        const SignedSum inv = k_inverse_detailed(kg, eta);
        r.check(inv.value, g(eta), inv.magnitude);
      }
    });
    report.records.push_back(std::move(r));
  }

  // K(G1 * G2) = KG1 . KG2.
  {
    IdentityRecord r = record("star_homomorphism", cfg.tolerance);
    detail::for_each_small_subset(small_base, cfg.max_config_size, [&](const FiniteConfiguration& g) {
      for (const auto& g1 : quasi) {
        for (const auto& g2 : quasi) {
          const double lhs = k_transform(star(g1, g2), g);
          const double rhs = k_transform(g1, g) * k_transform(g2, g);
          const double scale = k_transform(detail::absolute(g1), g) * k_transform(detail::absolute(g2), g);
          r.check(lhs, rhs, scale);
        }
      }
    });
    report.records.push_back(std::move(r));
  }

  // Indicator(0) is the unit of *, and * is commutative.
  {
    IdentityRecord unit = record("star_unit", cfg.tolerance);
    IdentityRecord comm = record("star_commutative", cfg.tolerance);
    const QuasiObservable delta = QuasiObservable::indicator(0);
    detail::for_each_small_subset(small_base, cfg.max_config_size, [&](const FiniteConfiguration& eta) {
      for (const auto& g1 : quasi) {
        unit.check(star_convolution(g1, delta, eta), g1(eta));
        for (const auto& g2 : quasi) comm.check(star_convolution(g1, g2, eta), star_convolution(g2, g1, eta));
      }
    });
    report.records.push_back(std::move(unit));
    report.records.push_back(std::move(comm));
  }

  // Sequence shadow: K(a * b) = Ka . Kb and K^{-1} K = id on random finite sequences.
  {
    IdentityRecord hom = record("sequence_star_homomorphism", cfg.tolerance);
    IdentityRecord inv = record("sequence_k_inverse_roundtrip", cfg.tolerance);
    CounterRng rng(cfg.seed, 2);
    auto random_sequence = [&] {
      SequenceFn a;
      a.values.resize(9);
      for (double& v : a.values) v = 2.0 * rng.uniform() - 1.0;
      return a;
    };
    for (int trial = 0; trial < 100; ++trial) {
      const SequenceFn a = random_sequence();
      const SequenceFn b = random_sequence();
      for (std::size_t n = 0; n <= 10; ++n) {
        hom.check(seq_k(seq_star_transform(a, b), n), seq_k(a, n) * seq_k(b, n));
        SequenceFn ka;
        for (std::size_t m = 0; m <= n; ++m) ka.values.push_back(seq_k(a, m));
        const SignedSum back = seq_k_inverse_detailed(ka, n);
        inv.check(back.value, a(n), back.magnitude);
      }
    }
    report.records.push_back(std::move(hom));
    report.records.push_back(std::move(inv));
  }

  // Coherent states: (K e_lambda)(n) = (1 + lambda)^n.
  {
    IdentityRecord r = record("coherent_state_k", 1e-12);
    for (double lambda : {-1.0, 0.0, 0.5, 1.0}) {
      const SequenceFn e = coherent_state(lambda);
      for (std::size_t n = 0; n <= 12; ++n) r.check(seq_k(e, n), coherent_k(lambda, n));
    }
    report.records.push_back(std::move(r));
  }

  // Newton series of degree <= 5 polynomials reproduce them at integer nodes.
  {
    IdentityRecord r = record("newton_series_reconstruction", cfg.tolerance);
    CounterRng rng(cfg.seed, 3);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t degree = static_cast<std::size_t>(trial % 6);
      std::vector<double> poly(degree + 1);
      for (double& c : poly) c = 4.0 * rng.uniform() - 2.0;
      auto p = [&](double t) {
        double v = 0.0;
        for (std::size_t i = poly.size(); i-- > 0;) v = v * t + poly[i];
        return v;
      };
      const auto coeffs = newton_series_coeffs(p, 5);
      for (int t = 0; t <= 5; ++t) {
        double scale = 0.0;
        for (std::size_t i = 0; i < poly.size(); ++i) scale += std::abs(poly[i]) * std::pow(t, static_cast<double>(i));
        r.check(newton_series_eval(coeffs, t), p(t), scale);
      }
    }
    report.records.push_back(std::move(r));
  }

  return report;
}

}  // namespace spcomb
