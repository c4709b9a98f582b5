#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "spcomb/difference.hpp"
#include "spcomb/factorial.hpp"

using namespace spcomb;

namespace {

TestFunction phi2() { return TestFunction::gaussian_bump(Point{0.5, 0.5}, 0.2, 0.8); }
TestFunction psi2() { return TestFunction::gaussian_bump(Point{0.4, 0.6}, 0.15, 1.3); }
TestFunction box2() { return TestFunction::indicator_box(Point{0.2, 0.2}, Point{0.8, 0.8}); }

}  // namespace

TEST(DeathGradient, WorkedExamples) {
  const FiniteConfiguration g = oracle::random_configuration(1, 4, 2);
  const Point& x = g[2];
  EXPECT_EQ(death_gradient(Observable::cardinality(), g, x), -1.0);
  EXPECT_EQ(death_gradient(Observable::constant(3.5), g, x), 0.0);
  const Observable e = Observable::generating_functional(phi2());
  const double want = generating_functional(g, phi2()) * (1.0 / (1.0 + phi2()(x)) - 1.0);
  EXPECT_LE(relative_error(death_gradient(e, g, x), want), 1e-12);
  EXPECT_THROW(death_gradient(e, g.without(x), x), MembershipError);
}

TEST(BirthGradient, WorkedExamples) {
  const FiniteConfiguration g = oracle::random_configuration(2, 4, 2);
  const Point x{0.31, 0.47};
  EXPECT_EQ(birth_gradient(Observable::cardinality(), g, x), 1.0);
  EXPECT_EQ(birth_gradient(Observable::constant(3.5), g, x), 0.0);
  const Observable e = Observable::generating_functional(phi2());
  EXPECT_LE(relative_error(birth_gradient(e, g, x), phi2()(x) * generating_functional(g, phi2())), 1e-12);
  EXPECT_THROW(birth_gradient(e, g.with(x), x), MembershipError);
}

TEST(BirthDeath, AreInverse) {
  const Observable e = Observable::generating_functional(phi2());
  const Observable m = Observable::newton_monomial(SymmetricKernel::tensor_power(psi2(), 2));
  for (std::size_t size = 0; size <= 6; ++size) {
    const FiniteConfiguration g = oracle::random_configuration(10 + size, size, 2);
    const Point x{0.123, 0.456};
    for (const Observable& f : {e, m, Observable::cardinality()}) {
      EXPECT_EQ(death_gradient(f, g.with(x), x), -birth_gradient(f, g, x));
    }
  }
}

TEST(DirectionalDeath, WorkedExamples) {
  const FiniteConfiguration g = oracle::random_configuration(3, 5, 2);
  double sum = 0.0;
  for (const Point& x : g) sum += psi2()(x);
  EXPECT_LE(relative_error(directional_death(Observable::cardinality(), g, psi2()), -sum), 1e-14);
  EXPECT_EQ(directional_death(Observable::generating_functional(phi2()), FiniteConfiguration{}, psi2()), 0.0);
}

// D-_psi <phi^n, (g)_n> = -n sum_x psi(x) phi(x) <phi^(n-1), (g \ x)_(n-1)>.
TEST(DirectionalDeath, NewtonMonomialFormula) {
  for (std::size_t size = 0; size <= 6; ++size) {
    const FiniteConfiguration g = oracle::random_configuration(20 + size, size, 2);
    for (std::size_t n = 1; n <= 4; ++n) {
      const Observable m = Observable::newton_monomial(SymmetricKernel::tensor_power(phi2(), n));
      double rhs = 0.0, scale = 0.0;
      for (const Point& x : g) {
        const double term = psi2()(x) * phi2()(x) *
                            oracle::pair_factorial(g.without(x), SymmetricKernel::tensor_power(phi2(), n - 1));
        rhs -= static_cast<double>(n) * term;
        scale += std::abs(static_cast<double>(n) * term);
      }
      EXPECT_LE(relative_error(directional_death(m, g, psi2()), rhs, scale), 1e-12);
    }
  }
}

TEST(DirectionalBirth, ZeroDirectionIsExactlyZero) {
  const FiniteConfiguration g = oracle::random_configuration(4, 3, 2);
  const TestFunction zero = TestFunction::scaled(0.0, psi2());
  EXPECT_EQ(directional_birth(Observable::generating_functional(phi2()), g, zero), 0.0);
}

// D+_psi E_phi(g) = (int psi phi) E_phi(g), independently of g.
TEST(DirectionalBirth, GeneratingFunctional) {
  // int of a product of gaussians in closed form
  const double w1 = 0.2, w2 = 0.15, a1 = 0.8, a2 = 1.3;
  const double s2 = w1 * w1 + w2 * w2;
  const double dist2 = 0.1 * 0.1 + 0.1 * 0.1;
  const double overlap = a1 * a2 * (2.0 * M_PI * w1 * w1 * w2 * w2 / s2) * std::exp(-dist2 / (2.0 * s2));

  const Observable e = Observable::generating_functional(phi2());
  for (std::size_t size = 0; size <= 4; ++size) {
    const FiniteConfiguration g = oracle::random_configuration(30 + size, size, 2);
    const QuadratureEstimate est =
        directional_birth_estimate(e, g, psi2(), GridQuadrature{psi2().bounding_box(), 128});
    const double ratio = est.value / generating_functional(g, phi2());
    EXPECT_NEAR(ratio, overlap, std::max(3.0 * est.error / generating_functional(g, phi2()), 1e-9));
  }
}

TEST(DirectionalBirth, MonteCarloQuadratureWithinThreeErrors) {
  const Observable e = Observable::generating_functional(phi2());
  const FiniteConfiguration g = oracle::random_configuration(40, 3, 2);
  const QuadratureEstimate exact = directional_birth_estimate(e, g, box2(), GridQuadrature{box2().bounding_box(), 256});
  const QuadratureEstimate mc =
      directional_birth_estimate(e, g, box2(), MonteCarloQuadrature{box2().bounding_box(), 20000, 11});
  EXPECT_GT(mc.error, 0.0);
  EXPECT_NEAR(mc.value, exact.value, 3.0 * mc.error + 3.0 * exact.error);
  // seed-deterministic
  EXPECT_EQ(mc.value,
            directional_birth_estimate(e, g, box2(), MonteCarloQuadrature{box2().bounding_box(), 20000, 11}).value);
}

// D+_psi <phi^n,(g)_n> = n (int psi phi) <phi^(n-1),(g)_(n-1)> for a factorized kernel.
TEST(DirectionalBirth, NewtonMonomialClosedForm) {
  const double w1 = 0.2, w2 = 0.15, a1 = 0.8, a2 = 1.3;
  const double s2 = w1 * w1 + w2 * w2;
  const double overlap = a1 * a2 * (2.0 * M_PI * w1 * w1 * w2 * w2 / s2) * std::exp(-0.02 / (2.0 * s2));
  for (std::size_t size = 0; size <= 4; ++size) {
    const FiniteConfiguration g = oracle::random_configuration(50 + size, size, 2);
    for (std::size_t n = 1; n <= 3; ++n) {
      const Observable m = Observable::newton_monomial(SymmetricKernel::tensor_power(phi2(), n));
      const double got = directional_birth(m, g, psi2(), GridQuadrature{psi2().bounding_box(), 128});
      const double want =
          static_cast<double>(n) * overlap * pair_factorial(g, SymmetricKernel::tensor_power(phi2(), n - 1));
      EXPECT_NEAR(got, want, 1e-8 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(DirectionalBirth, NodeCollisionIsNudged) {
  // the single midpoint node of a 2-per-axis grid on [0,2] is 0.5; put a point there
  const FiniteConfiguration g{Point{0.5}};
  const Point moved = avoid_collision(g, Point{0.5});
  EXPECT_EQ(moved[0], std::nextafter(0.5, 1.0));
  const TestFunction ind = TestFunction::indicator_box(Point{0.0}, Point{2.0});
  EXPECT_NO_THROW(directional_birth(Observable::cardinality(), g, ind, GridQuadrature{Box(Point{0.0}, Point{2.0}), 2}));
  EXPECT_DOUBLE_EQ(directional_birth(Observable::cardinality(), g, ind, GridQuadrature{Box(Point{0.0}, Point{2.0}), 2}),
                   2.0);
}

TEST(Quadrature, Validation) {
  const Observable c = Observable::cardinality();
  const FiniteConfiguration g;
  EXPECT_THROW(directional_birth(c, g, box2(), GridQuadrature{box2().bounding_box(), 1}), InvalidArgument);
  EXPECT_THROW(directional_birth(c, g, box2(), MonteCarloQuadrature{box2().bounding_box(), 0, 1}), InvalidArgument);
}

TEST(ClassicalDifferences, WorkedExamples) {
  auto ff3 = [](double t) { return falling_factorial_poly(t, 3); };
  EXPECT_EQ(classical_forward_diff(ff3, 2.0), 6.0);
  EXPECT_EQ(3.0 * falling_factorial_poly(2.0, 2), 6.0);
  EXPECT_EQ(classical_backward_diff(ff3, 3.0), -6.0);
  auto e = [](double t) { return newton_generating(0.5, t); };
  EXPECT_DOUBLE_EQ(classical_forward_diff(e, 1.0), 0.5 * 1.5);
}

TEST(ClassicalDifferences, FallingFactorialLaw) {
  for (int twice = -6; twice <= 10; ++twice) {
    const double t = 0.5 * twice;
    for (std::size_t n = 1; n <= 8; ++n) {
      auto ff = [n](double s) { return falling_factorial_poly(s, n); };
      const double scale = std::abs(ff(t + 1.0)) + std::abs(ff(t));
      EXPECT_LE(relative_error(classical_forward_diff(ff, t), n * falling_factorial_poly(t, n - 1), scale), 1e-10);
      EXPECT_LE(relative_error(classical_backward_diff(ff, t), -1.0 * n * falling_factorial_poly(t - 1.0, n - 1),
                               std::abs(ff(t - 1.0)) + std::abs(ff(t))),
                1e-10);
    }
  }
}

TEST(FallingFactorialPoly, WorkedExamples) {
  EXPECT_EQ(falling_factorial_poly(5.0, 2), 20.0);
  EXPECT_EQ(newton_poly(5.0, 2), 10.0);
  EXPECT_EQ(falling_factorial_poly(0.5, 2), -0.25);
  EXPECT_EQ(falling_factorial_poly(3.7, 0), 1.0);
}

TEST(NewtonSeries, WorkedExamples) {
  const auto sq = newton_series_coeffs([](double t) { return t * t; }, 2);
  EXPECT_EQ(sq, (std::vector<double>{0.0, 1.0, 2.0}));
  EXPECT_EQ(newton_series_eval(sq, 3.0), 9.0);

  const auto constant = newton_series_coeffs([](double) { return 4.5; }, 3);
  EXPECT_EQ(constant, (std::vector<double>{4.5, 0.0, 0.0, 0.0}));

  const auto n2 = newton_series_coeffs([](double t) { return newton_poly(t, 2); }, 2);
  EXPECT_EQ(n2, (std::vector<double>{0.0, 0.0, 1.0}));
}

TEST(NewtonSeries, ReconstructsPolynomials) {
  CounterRng rng(8, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t degree = static_cast<std::size_t>(trial % 6);
    std::vector<double> coef(degree + 1);
    for (double& x : coef) x = 4.0 * rng.uniform() - 2.0;
    auto p = [&](double t) {
      double v = 0.0;
      for (std::size_t i = coef.size(); i-- > 0;) v = v * t + coef[i];
      return v;
    };
    const auto a = newton_series_coeffs(p, 5);
    for (int t = 0; t <= 5; ++t) {
      double scale = 0.0;
      for (std::size_t i = 0; i < coef.size(); ++i) scale += std::abs(coef[i]) * std::pow(t, i);
      EXPECT_LE(relative_error(newton_series_eval(a, t), p(t), scale), 1e-10);
    }
  }
}
