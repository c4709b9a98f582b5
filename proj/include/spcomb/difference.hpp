#pragma once

// Birth/death difference operators on observables of finite configurations,
// and their one-variable counterparts D+ f(t) = f(t+1) - f(t),
// D- f(t) = f(t-1) - f(t), with Newton-series interpolation.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

#include "spcomb/configuration.hpp"
#include "spcomb/errors.hpp"
#include "spcomb/numeric.hpp"
#include "spcomb/observable.hpp"
#include "spcomb/random.hpp"
#include "spcomb/test_function.hpp"

namespace spcomb {

/// D-_x F(gamma) = F(gamma \ x) - F(gamma); x must belong to gamma.
inline double death_gradient(const Observable& f, const FiniteConfiguration& config, const Point& x) {
  if (!config.contains(x)) throw MembershipError("death_gradient: point is not in the configuration");
  return f(config.without(x)) - f(config);
}

/// D+_x F(gamma) = F(gamma u x) - F(gamma); x must not belong to gamma.
inline double birth_gradient(const Observable& f, const FiniteConfiguration& config, const Point& x) {
  if (config.contains(x)) throw MembershipError("birth_gradient: point is already in the configuration");
  return f(config.with(x)) - f(config);
}

/// D-_psi F(gamma) = sum_{x in gamma} psi(x) (F(gamma \ x) - F(gamma)).
inline double directional_death(const Observable& f, const FiniteConfiguration& config, const TestFunction& psi) {
  if (config.empty()) return 0.0;
  const double base = f(config);
  KahanSum sum;
  for (const Point& x : config) {
    const double weight = psi(x);
    if (weight == 0.0) continue;
    sum += weight * (f(config.without(x)) - base);
  }
  return sum.value();
}

/// Midpoint rule on a regular grid over `box`.
struct GridQuadrature {
  Box box;
  std::size_t points_per_axis = 64;
};

/// Uniform Monte Carlo over `box`; node i is drawn from counter stream (seed, i).
struct MonteCarloQuadrature {
  Box box;
  std::size_t samples;
  std::uint64_t seed;
};

using Quadrature = std::variant<GridQuadrature, MonteCarloQuadrature>;

/// 64-point-per-axis midpoint grid on the function's bounding box.
inline Quadrature default_quadrature(const TestFunction& psi) { return GridQuadrature{psi.bounding_box(), 64}; }

struct QuadratureEstimate {
  double value;
  /// Grid: Richardson estimate |I_h - I_2h| / 3. Monte Carlo: one standard error.
  double error;
};

namespace detail {

template <class Integrand>
double grid_midpoint(const Box& box, std::size_t per_axis, Integrand& integrand) {
  const std::size_t d = box.dim();
  std::vector<double> step(d);
  double cell = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    step[i] = (box.hi()[i] - box.lo()[i]) / static_cast<double>(per_axis);
    cell *= step[i];
  }
  std::vector<double> values;
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> coords(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) coords[i] = box.lo()[i] + (static_cast<double>(idx[i]) + 0.5) * step[i];
    values.push_back(integrand(Point(coords)));
    std::size_t i = 0;
    while (i < d && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == d) break;
  }
  return cell * pairwise_sum(values);
}

inline void validate(const Quadrature& q) {
  std::visit(Overloaded{
                 [](const GridQuadrature& g) {
                   if (g.points_per_axis < 2) throw InvalidArgument("grid quadrature needs >= 2 points per axis");
                 },
                 [](const MonteCarloQuadrature& m) {
                   if (m.samples < 1) throw InvalidArgument("monte carlo quadrature needs >= 1 sample");
                 },
             },
             q);
}

}  // namespace detail

/// Integral of `integrand` (double(const Point&)) over the quadrature box.
template <class Integrand>
QuadratureEstimate integrate(const Quadrature& q, Integrand&& integrand) {
  detail::validate(q);
  return std::visit(
      Overloaded{
          [&](const GridQuadrature& g) {
            const double fine = detail::grid_midpoint(g.box, g.points_per_axis, integrand);
            const double coarse = detail::grid_midpoint(g.box, g.points_per_axis / 2, integrand);
            return QuadratureEstimate{fine, std::abs(fine - coarse) / 3.0};
          },
          [&](const MonteCarloQuadrature& m) {
            const std::size_t d = m.box.dim();
            std::vector<double> values(m.samples);
            std::vector<double> coords(d);
            for (std::size_t s = 0; s < m.samples; ++s) {
              CounterRng rng(m.seed, s);
              for (std::size_t i = 0; i < d; ++i) {
                coords[i] = m.box.lo()[i] + rng.uniform() * (m.box.hi()[i] - m.box.lo()[i]);
              }
              values[s] = integrand(Point(coords));
            }
            const double n = static_cast<double>(m.samples);
            const double mean = pairwise_sum(values) / n;
            double stderr_mean = 0.0;
            if (m.samples > 1) {
              for (double& v : values) v = (v - mean) * (v - mean);
              stderr_mean = std::sqrt(pairwise_sum(values) / (n - 1.0) / n);
            }
            const double vol = m.box.volume();
            return QuadratureEstimate{vol * mean, vol * stderr_mean};
          },
      },
      q);
}

/// Returns x, or x nudged up by one ulp in its first coordinate until it
/// leaves the configuration.
inline Point avoid_collision(const FiniteConfiguration& config, Point x) {
  while (config.contains(x)) {
    std::vector<double> c(x.coords().begin(), x.coords().end());
    c[0] = std::nextafter(c[0], std::numeric_limits<double>::infinity());
    x = Point(std::move(c));
  }
  return x;
}

/// D+_psi F(gamma) = integral of psi(x) (F(gamma u x) - F(gamma)) dx, with error estimate.
inline QuadratureEstimate directional_birth_estimate(const Observable& f, const FiniteConfiguration& config,
                                                     const TestFunction& psi, const Quadrature& q) {
  const double base = f(config);
  return integrate(q, [&](const Point& node) {
    const double weight = psi(node);
    if (weight == 0.0) return 0.0;
    const Point x = avoid_collision(config, node);
    return weight * (f(config.with(x)) - base);
  });
}

inline double directional_birth(const Observable& f, const FiniteConfiguration& config, const TestFunction& psi,
                                const Quadrature& q) {
  return directional_birth_estimate(f, config, psi, q).value;
}

inline double directional_birth(const Observable& f, const FiniteConfiguration& config, const TestFunction& psi) {
  return directional_birth(f, config, psi, default_quadrature(psi));
}

// One-variable difference calculus.

template <class Fn>
double classical_forward_diff(Fn&& f, double t) {
  return f(t + 1.0) - f(t);
}

template <class Fn>
double classical_backward_diff(Fn&& f, double t) {
  return f(t - 1.0) - f(t);
}

/// (t)_n = t (t-1) ... (t-n+1); 1 for n = 0.
inline double falling_factorial_poly(double t, std::size_t n) noexcept {
  double p = 1.0;
  for (std::size_t i = 0; i < n; ++i) p *= t - static_cast<double>(i);
  return p;
}

/// N_n(t) = (t)_n / n!.
inline double newton_poly(double t, std::size_t n) noexcept { return falling_factorial_poly(t, n) / factorial(n); }

/// e_lambda(t) = (1 + lambda)^t, the generating function of the Newton polynomials.
inline double newton_generating(double lambda, double t) { return std::pow(1.0 + lambda, t); }

/// a_n = (D+^n f)(0) for n = 0..m, from the forward-difference table on 0..m.
template <class Fn>
std::vector<double> newton_series_coeffs(Fn&& f, std::size_t m) {
  std::vector<double> row(m + 1);
  for (std::size_t i = 0; i <= m; ++i) row[i] = f(static_cast<double>(i));
  std::vector<double> coeffs(m + 1);
  for (std::size_t n = 0; n <= m; ++n) {
    coeffs[n] = row[0];
    for (std::size_t i = 0; i + n < m; ++i) row[i] = row[i + 1] - row[i];
  }
  return coeffs;
}

/// sum_n a_n N_n(t), compensated.
inline double newton_series_eval(const std::vector<double>& coeffs, double t) {
  KahanSum sum;
  for (std::size_t n = 0; n < coeffs.size(); ++n) sum += coeffs[n] * newton_poly(t, n);
  return sum.value();
}

}  // namespace spcomb
