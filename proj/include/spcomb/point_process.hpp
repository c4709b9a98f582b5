#pragma once

// Poisson point process on a bounded window, Monte Carlo estimators of its
// correlation functionals, and the classical laws on N.
//
// For the Poisson process of intensity sigma the correlation functions are
// k^(n) = sigma^n, so every estimator below has a closed-form target.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "spcomb/configuration.hpp"
#include "spcomb/errors.hpp"
#include "spcomb/factorial.hpp"
#include "spcomb/k_transform.hpp"
#include "spcomb/kernel.hpp"
#include "spcomb/numeric.hpp"
#include "spcomb/parallel.hpp"
#include "spcomb/random.hpp"
#include "spcomb/test_function.hpp"

namespace spcomb {

struct PoissonSpec {
  double intensity;
  Box window;
  std::uint64_t seed;
};

inline void validate(const PoissonSpec& spec) {
  if (!(spec.intensity > 0.0) || !std::isfinite(spec.intensity)) {
    throw DomainError("poisson intensity must be positive and finite");
  }
}

/// Sample number `index` of the process: N ~ Poisson(sigma * vol), then N
/// independent uniform points in the window. Sample i depends only on
/// (spec, i). A coinciding point (probability zero) is redrawn.
inline FiniteConfiguration sample_poisson(const PoissonSpec& spec, std::uint64_t index = 0) {
  validate(spec);
  CounterRng rng(spec.seed, index);
  std::poisson_distribution<std::int64_t> count_dist(spec.intensity * spec.window.volume());
  const std::int64_t count = count_dist(rng);
  const std::size_t d = spec.window.dim();
  std::set<Point> points;
  std::vector<double> coords(d);
  while (points.size() < static_cast<std::size_t>(count)) {
    for (std::size_t i = 0; i < d; ++i) {
      const double lo = spec.window.lo()[i];
      coords[i] = lo + rng.uniform() * (spec.window.hi()[i] - lo);
    }
    points.insert(Point(coords));
  }
  return FiniteConfiguration(std::vector<Point>(points.begin(), points.end()));
}

/// Samples 0 .. count-1.
inline std::vector<FiniteConfiguration> sample_poisson_batch(const PoissonSpec& spec, std::size_t count,
                                                             std::size_t threads = 0) {
  validate(spec);
  return parallel_evaluate(count, threads, [&](std::size_t i) { return sample_poisson(spec, i); });
}

/// Monte Carlo mean with its standard error.
struct Estimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;

  /// |estimate - target| in units of the standard error (0 when equal,
  /// infinity when the error is zero but the values differ).
  double sigma_distance(double target) const {
    const double diff = std::abs(estimate - target);
    if (diff == 0.0) return 0.0;
    if (std_error == 0.0) return std::numeric_limits<double>::infinity();
    return diff / std_error;
  }
};

enum class StatStatus { pass, warn, fail };

inline constexpr double kWarnSigmas = 3.0;
inline constexpr double kFailSigmas = 5.0;

inline StatStatus classify_sigma_distance(double distance) {
  if (distance <= kWarnSigmas) return StatStatus::pass;
  if (distance <= kFailSigmas) return StatStatus::warn;
  return StatStatus::fail;
}

inline const char* to_string(StatStatus s) {
  switch (s) {
    case StatStatus::pass:
      return "pass";
    case StatStatus::warn:
      return "warn";
    case StatStatus::fail:
      return "fail";
  }
  return "fail";
}

inline constexpr std::size_t kMinMonteCarloSamples = 100;

/// Mean of fn(sample_i) over i < samples. Per-sample values are computed in
/// parallel and reduced by a fixed pairwise tree, so the result is bitwise
/// independent of the thread count.
template <class Fn>
Estimate monte_carlo_mean(const PoissonSpec& spec, std::size_t samples, std::size_t threads, Fn&& fn) {
  validate(spec);
  if (samples < kMinMonteCarloSamples) {
    throw InvalidArgument("monte carlo estimation needs at least " + std::to_string(kMinMonteCarloSamples) +
                          " samples");
  }
  std::vector<double> values =
      parallel_evaluate(samples, threads, [&](std::size_t i) { return fn(sample_poisson(spec, i)); });
  const double n = static_cast<double>(samples);
  const double mean = pairwise_sum(values) / n;
  for (double& v : values) v = (v - mean) * (v - mean);
  const double variance = pairwise_sum(values) / (n - 1.0);
  return Estimate{mean, std::sqrt(variance / n), samples};
}

inline void require_support_in_window(const TestFunction& phi, const Box& window) {
  if (phi.dim() != window.dim()) throw DimensionError("test function and window differ in dimension");
  if (!window.contains(phi.bounding_box())) {
    throw SupportError("test function support is not contained in the observation window");
  }
}

/// Monte Carlo estimate of E <phi^{(x)n}, (gamma)_n>; target (sigma * int phi)^n.
inline Estimate empirical_factorial_moment(const PoissonSpec& spec, std::size_t n, const TestFunction& phi,
                                           std::size_t samples, std::size_t threads = 0) {
  require_support_in_window(phi, spec.window);
  if (n == 0) {
    if (samples < kMinMonteCarloSamples) throw InvalidArgument("monte carlo estimation needs at least 100 samples");
    return Estimate{1.0, 0.0, samples};
  }
  const SymmetricKernel kernel = SymmetricKernel::tensor_power(phi, n);
  return monte_carlo_mean(spec, samples, threads,
                          [&](const FiniteConfiguration& config) { return pair_factorial(config, kernel); });
}

/// Monte Carlo estimate of B(phi) = E prod_{x in gamma} (1 + phi(x)); target exp(sigma * int phi).
inline Estimate empirical_bogoliubov(const PoissonSpec& spec, const TestFunction& phi, std::size_t samples,
                                     std::size_t threads = 0) {
  require_support_in_window(phi, spec.window);
  require_log_domain(phi);
  return monte_carlo_mean(spec, samples, threads,
                          [&](const FiniteConfiguration& config) { return generating_functional(config, phi); });
}

/// (sigma * int phi)^n.
inline double poisson_factorial_moment_target(double intensity, const TestFunction& phi, std::size_t n) {
  return std::pow(intensity * phi.integral(), static_cast<double>(n));
}

/// exp(sigma * int phi).
inline double poisson_bogoliubov_target(double intensity, const TestFunction& phi) {
  return std::exp(intensity * phi.integral());
}

/// sum_n x^n / n!, truncated once the remainder bound drops below 1e-12 of the
/// running absolute sum. This is the correlation-function series of the
/// Poisson Bogoliubov functional with x = sigma * int phi.
inline double poisson_bogoliubov_series(double x) {
  KahanSum sum;
  double abs_sum = 0.0;
  double term = 1.0;
  for (std::size_t n = 0; n < 10000; ++n) {
    sum += term;
    abs_sum += std::abs(term);
    const double next = term * x / static_cast<double>(n + 1);
    const double ratio = std::abs(x) / static_cast<double>(n + 2);
    if (ratio < 1.0 && std::abs(next) / (1.0 - ratio) <= 1e-12 * abs_sum) return sum.value();
    term = next;
  }
  throw TailTruncationError("bogoliubov series did not converge within 10^4 terms");
}

namespace detail {

/// int over window^n of f, for the closed-form kernels.
inline double window_integral(const SymmetricKernel& f, const Box& window) {
  return std::visit(
      Overloaded{
          [&](const TensorPowerKernel& k) {
            require_support_in_window(k.phi, window);
            return std::pow(k.phi.integral(), static_cast<double>(f.order()));
          },
          [&](const SymmetrizedProductKernel& k) {
            double p = 1.0;
            for (const TestFunction& phi : k.factors) {
              require_support_in_window(phi, window);
              p *= phi.integral();
            }
            return p;
          },
          [&](const ConstantKernel& k) { return k.value * std::pow(window.volume(), static_cast<double>(f.order())); },
          [&](const ScaledKernel& k) { return k.factor * window_integral(k.inner, window); },
          [&](const SumKernel& k) {
            double s = 0.0;
            for (const SymmetricKernel& t : k.terms) s += window_integral(t, window);
            return s;
          },
      },
      f.node().value);
}

}  // namespace detail

/// Closed form of int (KG) d pi_sigma = sum_n (sigma^n / n!) int_{W^n} G^(n),
/// the pairing of G with the Poisson correlation measure on the window.
inline double poisson_correlation_pairing(double intensity, const Box& window, const QuasiObservable& g) {
  return std::visit(
      Overloaded{
          [&](const QuasiObservable::ByKernels& d) {
            KahanSum sum;
            for (std::size_t n = 0; n < d.kernels.size(); ++n) {
              sum += std::pow(intensity, static_cast<double>(n)) / factorial(n) *
                     detail::window_integral(d.kernels[n], window);
            }
            return sum.value();
          },
          [&](const QuasiObservable::Indicator& d) {
            return std::pow(intensity * window.volume(), static_cast<double>(d.cardinality)) /
                   factorial(d.cardinality);
          },
          [](const QuasiObservable::Custom&) -> double {
            throw AnalyticUnavailableError("no closed-form correlation pairing for a custom quasi-observable");
          },
      },
      g.descriptor());
}

struct DualityResult {
  Estimate lhs;
  double rhs;
};

/// lhs: Monte Carlo mean of (KG)(gamma); rhs: its closed-form correlation pairing.
inline DualityResult duality_check(const PoissonSpec& spec, const QuasiObservable& g, std::size_t samples,
                                   std::size_t threads = 0) {
  validate(spec);
  const double rhs = poisson_correlation_pairing(spec.intensity, spec.window, g);
  const Estimate lhs = monte_carlo_mean(spec, samples, threads,
                                        [&](const FiniteConfiguration& config) { return k_transform(g, config); });
  return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// Laws on N.

/// pi_sigma(n) = e^{-sigma} sigma^n / n!.
inline double poisson_pmf(double intensity, std::size_t n) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) throw DomainError("poisson_pmf: sigma must be positive");
  const double nn = static_cast<double>(n);
  return std::exp(-intensity + nn * std::log(intensity) - std::lgamma(nn + 1.0));
}

/// mu(n) = pi_sigma(n) beyond the explicit values.
struct PoissonTail {
  double intensity;
  friend bool operator==(const PoissonTail&, const PoissonTail&) = default;
};

/// Probability law on N: explicit mu(0..m-1) then a tail rule.
class DiscreteLaw {
 public:
  using Tail = std::variant<ZeroTail, PoissonTail>;

  static constexpr double kMassTolerance = 1e-9;

  DiscreteLaw(std::vector<double> values, Tail tail) : values_(std::move(values)), tail_(tail) {
    for (double v : values_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("law values must be nonnegative and finite");
    }
    KahanSum mass;
    for (double v : values_) mass += v;
    if (const auto* p = std::get_if<PoissonTail>(&tail_)) {
      double head = 0.0;
      for (std::size_t n = 0; n < values_.size(); ++n) head += poisson_pmf(p->intensity, n);
      mass += 1.0 - head;
    }
    if (std::abs(mass.value() - 1.0) > kMassTolerance) throw DomainError("law total mass differs from 1");
  }

  static DiscreteLaw poisson(double intensity) {
    if (!(intensity > 0.0) || !std::isfinite(intensity)) throw DomainError("poisson law: sigma must be positive");
    return DiscreteLaw({}, PoissonTail{intensity});
  }

  static DiscreteLaw from_pmf(std::vector<double> values) { return DiscreteLaw(std::move(values), ZeroTail{}); }

  double operator()(std::size_t n) const {
    if (n < values_.size()) return values_[n];
    if (const auto* p = std::get_if<PoissonTail>(&tail_)) return poisson_pmf(p->intensity, n);
    return 0.0;
  }

  const std::vector<double>& values() const noexcept { return values_; }
  const Tail& tail() const noexcept { return tail_; }

 private:
  std::vector<double> values_;
  Tail tail_;
};

inline constexpr double kTailRemainder = 1e-12;
inline constexpr std::size_t kMaxTailTerms = 10000;

namespace detail {

/// Adds sum_{m >= start} t_m where t_{m+1} = t_m * ratio(m), stopping once
/// |t_{m+1}| / (1 - sup ratio) <= kTailRemainder * running absolute sum.
/// `ratio_bound(m)` must bound |ratio(j)| for all j >= m and be nonincreasing.
template <class Ratio, class RatioBound>
void add_certified_tail(double first, std::size_t start, Ratio ratio, RatioBound ratio_bound, KahanSum& sum,
                        double& abs_sum) {
  double term = first;
  for (std::size_t i = 0, m = start; i < kMaxTailTerms; ++i, ++m) {
    sum += term;
    abs_sum += std::abs(term);
    const double next = term * ratio(m);
    const double bound = ratio_bound(m + 1);
    if (bound < 1.0 && std::abs(next) / (1.0 - bound) <= kTailRemainder * abs_sum) return;
    term = next;
  }
  throw TailTruncationError("series tail could not be certified within 10^4 terms");
}

}  // namespace detail

/// rho_mu(n) = sum_{m >= n} C(m, n) mu(m) = E[(X)_n] / n!.
inline double rho_sequence(const DiscreteLaw& law, std::size_t n) {
  KahanSum sum;
  double abs_sum = 0.0;
  const auto& values = law.values();
  for (std::size_t m = n; m < values.size(); ++m) {
    const double t = binomial(m, n) * values[m];
    sum += t;
    abs_sum += std::abs(t);
  }
  if (const auto* p = std::get_if<PoissonTail>(&law.tail())) {
    const double sigma = p->intensity;
    const std::size_t start = std::max(n, values.size());
    const double s = static_cast<double>(start);
    const double nn = static_cast<double>(n);
    // C(m, n) pi_sigma(m) = e^{-sigma} sigma^m / (n! (m-n)!)
    const double first =
        std::exp(-sigma + s * std::log(sigma) - std::lgamma(nn + 1.0) - std::lgamma(s - nn + 1.0));
    detail::add_certified_tail(
        first, start, [&](std::size_t m) { return sigma / static_cast<double>(m + 1 - n); },
        [&](std::size_t m) { return sigma / static_cast<double>(m + 1 - n); }, sum, abs_sum);
  }
  return sum.value();
}

/// B(lambda) = sum_n mu(n) (1 + lambda)^n.
inline double bogoliubov_sequence(const DiscreteLaw& law, double lambda) {
  const double base = 1.0 + lambda;
  KahanSum sum;
  double abs_sum = 0.0;
  const auto& values = law.values();
  for (std::size_t m = 0; m < values.size(); ++m) {
    const double t = values[m] * std::pow(base, static_cast<double>(m));
    sum += t;
    abs_sum += std::abs(t);
  }
  if (const auto* p = std::get_if<PoissonTail>(&law.tail())) {
    const double sigma = p->intensity;
    const std::size_t start = values.size();
    const double first = poisson_pmf(sigma, start) * std::pow(base, static_cast<double>(start));
    detail::add_certified_tail(
        first, start, [&](std::size_t m) { return sigma * base / static_cast<double>(m + 1); },
        [&](std::size_t m) { return sigma * std::abs(base) / static_cast<double>(m + 1); }, sum, abs_sum);
  }
  return sum.value();
}

/// Values of B at lambda and at its reflection -2 - lambda (|1 + lambda| is
/// shared). Finiteness of both is necessary, not sufficient, for B to extend
/// holomorphically; no decision is attempted.
struct HolomorphyProbe {
  double at_lambda;
  double at_reflection;
  bool both_finite;
};

inline HolomorphyProbe holomorphy_probe(const DiscreteLaw& law, double lambda) {
  auto eval = [&](double l) {
    try {
      return bogoliubov_sequence(law, l);
    } catch (const TailTruncationError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  HolomorphyProbe probe{eval(lambda), eval(-2.0 - lambda), false};
  probe.both_finite = std::isfinite(probe.at_lambda) && std::isfinite(probe.at_reflection);
  return probe;
}

}  // namespace spcomb
