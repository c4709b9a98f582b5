#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "spcomb/factorial.hpp"
#include "spcomb/k_transform.hpp"
#include "spcomb/observable.hpp"

using namespace spcomb;

namespace {

TestFunction phi2() { return TestFunction::gaussian_bump(Point{0.5, 0.5}, 0.3, 0.8); }
TestFunction psi2() {
  return TestFunction::sum({TestFunction::indicator_box(Point{0.0, 0.0}, Point{0.6, 0.6}),
                            TestFunction::gaussian_bump(Point{0.3, 0.3}, 0.2, -0.4)});
}

std::vector<QuasiObservable> battery() {
  std::vector<SymmetricKernel> powers;
  for (std::size_t n = 0; n <= 5; ++n) powers.push_back(SymmetricKernel::tensor_power(phi2(), n));
  return {QuasiObservable::by_kernels(powers), QuasiObservable::indicator(2),
          QuasiObservable::by_kernels({SymmetricKernel::constant(0.5, 0), SymmetricKernel::tensor_power(psi2(), 1),
                                       SymmetricKernel::symmetrized_product({phi2(), psi2()})}),
          QuasiObservable::single_order(SymmetricKernel::constant(-1.5, 3))};
}

std::function<double(const FiniteConfiguration&)> fn(const QuasiObservable& g) {
  return [g](const FiniteConfiguration& eta) { return g(eta); };
}

}  // namespace

TEST(QuasiObservable, Descriptors) {
  const FiniteConfiguration g = oracle::random_configuration(1, 3, 2);
  EXPECT_EQ(QuasiObservable::indicator(3)(g), 1.0);
  EXPECT_EQ(QuasiObservable::indicator(2)(g), 0.0);
  const QuasiObservable byk = QuasiObservable::by_kernels({SymmetricKernel::constant(2.0, 0)});
  EXPECT_EQ(byk(FiniteConfiguration{}), 2.0);
  EXPECT_EQ(byk(g), 0.0);
  EXPECT_EQ(byk.support_order(), 0u);
  EXPECT_THROW(QuasiObservable::by_kernels({SymmetricKernel::constant(1.0, 1)}), ArityError);
}

TEST(KTransform, WorkedExamples) {
  for (std::size_t size = 0; size <= 6; ++size) {
    const FiniteConfiguration g = oracle::random_configuration(size, size, 2);
    EXPECT_EQ(k_transform(QuasiObservable::indicator(1), g), static_cast<double>(size));
    for (std::size_t k = 0; k <= 7; ++k) EXPECT_EQ(k_transform(QuasiObservable::indicator(k), g), binomial(size, k));

    std::vector<SymmetricKernel> powers;
    for (std::size_t n = 0; n <= size; ++n) powers.push_back(SymmetricKernel::tensor_power(psi2(), n));
    EXPECT_LE(relative_error(k_transform(QuasiObservable::by_kernels(powers), g), generating_functional(g, psi2())),
              1e-12);
  }
}

TEST(KTransform, MatchesSubsetOracle) {
  for (std::size_t size = 0; size <= 6; ++size) {
    const FiniteConfiguration g = oracle::random_configuration(10 + size, size, 2);
    for (const auto& q : battery()) {
      EXPECT_LE(relative_error(k_transform(q, g), oracle::k_transform(fn(q), g)), 1e-12);
    }
  }
}

TEST(KTransform, RespectsDeclaredSupportOrder) {
  int calls_above = 0;
  const QuasiObservable g = QuasiObservable::custom(
      [&](const FiniteConfiguration& eta) {
        if (eta.size() > 1) ++calls_above;
        return 1.0;
      },
      1);
  const FiniteConfiguration c = oracle::random_configuration(3, 5, 1);
  EXPECT_EQ(k_transform(g, c), 6.0);
  EXPECT_EQ(calls_above, 0);
}

TEST(KInverse, WorkedExamples) {
  const Observable one = Observable::constant(1.0);
  const Observable card = Observable::cardinality();
  const Observable e = Observable::generating_functional(psi2());
  for (std::size_t size = 0; size <= 4; ++size) {
    const FiniteConfiguration eta = oracle::random_configuration(20 + size, size, 2);
    EXPECT_EQ(k_inverse(one, eta), size == 0 ? 1.0 : 0.0);
    EXPECT_EQ(k_inverse(card, eta), size == 1 ? 1.0 : 0.0);
    double prod = 1.0;
    for (const Point& x : eta) prod *= psi2()(x);
    const SignedSum inv = k_inverse_detailed(e, eta);
    EXPECT_LE(relative_error(inv.value, prod, inv.magnitude), 1e-12);
  }
}

TEST(KInverse, InvertsK) {
  for (std::size_t size = 0; size <= 5; ++size) {
    const FiniteConfiguration g = oracle::random_configuration(30 + size, size, 2);
    for (const auto& q : battery()) {
      const auto kq = [&](const FiniteConfiguration& c) { return k_transform(q, c); };
      const SignedSum inv = k_inverse_detailed(kq, g);
      EXPECT_LE(relative_error(inv.value, q(g), inv.magnitude), 1e-10);
      // and the other way round, through the quasi-observable wrapper
      const QuasiObservable back = k_inverse_of(kq);
      EXPECT_LE(relative_error(k_transform(back, g), k_transform(q, g), inv.magnitude + std::abs(q(g))), 1e-10);
    }
  }
}

TEST(Star, WorkedExamples) {
  const auto qs = battery();
  EXPECT_EQ(star_convolution(qs[0], qs[2], FiniteConfiguration{}), qs[0](FiniteConfiguration{}) * qs[2](FiniteConfiguration{}));
  const QuasiObservable delta = QuasiObservable::indicator(0);
  EXPECT_EQ(star_convolution(delta, delta, FiniteConfiguration{Point{0.5}}), 0.0);

  const FiniteConfiguration ab{Point{0.2, 0.7}, Point{0.6, 0.1}};
  for (const auto& g1 : qs) {
    for (const auto& g2 : qs) {
      EXPECT_LE(relative_error(k_transform(star(g1, g2), ab), k_transform(g1, ab) * k_transform(g2, ab)), 1e-12);
    }
  }
}

TEST(Star, MatchesDisjointTripleOracle) {
  const auto qs = battery();
  for (std::size_t size = 0; size <= 5; ++size) {
    const FiniteConfiguration eta = oracle::random_configuration(50 + size, size, 2);
    for (const auto& g1 : qs) {
      for (const auto& g2 : qs) {
        EXPECT_LE(relative_error(star_convolution(g1, g2, eta), oracle::star(fn(g1), fn(g2), eta)), 1e-12);
      }
    }
  }
}

TEST(Star, HomomorphismUnitAndCommutativity) {
  const auto qs = battery();
  const QuasiObservable delta = QuasiObservable::indicator(0);
  for (std::size_t size = 0; size <= 5; ++size) {
    const FiniteConfiguration g = oracle::random_configuration(60 + size, size, 2);
    for (const auto& g1 : qs) {
      EXPECT_EQ(star_convolution(g1, delta, g), g1(g));
      for (const auto& g2 : qs) {
        const double lhs = k_transform(star(g1, g2), g);
        const double rhs = k_transform(g1, g) * k_transform(g2, g);
        const double scale = oracle::k_transform([&](const FiniteConfiguration& e) { return std::abs(g1(e)); }, g) *
                             oracle::k_transform([&](const FiniteConfiguration& e) { return std::abs(g2(e)); }, g);
        EXPECT_LE(relative_error(lhs, rhs, scale), 1e-10);
        EXPECT_EQ(star_convolution(g1, g2, g), star_convolution(g2, g1, g));
      }
    }
  }
}

TEST(Star, SupportOrderAdds) {
  EXPECT_EQ(star(QuasiObservable::indicator(2), QuasiObservable::indicator(3)).support_order(), 5u);
}

// ---------------------------------------------------------------------------
// Sequences.

namespace {

SequenceFn delta(std::size_t k) {
  SequenceFn s;
  s.values.assign(k + 1, 0.0);
  s.values[k] = 1.0;
  return s;
}

SequenceFn random_sequence(CounterRng& rng, std::size_t len) {
  SequenceFn s;
  for (std::size_t i = 0; i < len; ++i) s.values.push_back(2.0 * rng.uniform() - 1.0);
  return s;
}

}  // namespace

TEST(Sequences, WorkedExamples) {
  const SequenceFn d0 = delta(0);
  for (std::size_t n = 0; n <= 6; ++n) {
    EXPECT_EQ(seq_star(d0, d0, n), n == 0 ? 1.0 : 0.0);
    EXPECT_EQ(seq_k(seq_star_transform(d0, d0), n), seq_k(d0, n) * seq_k(d0, n));
  }
  for (std::size_t k = 0; k <= 5; ++k) {
    for (std::size_t n = 0; n <= 10; ++n) EXPECT_EQ(seq_k(delta(k), n), binomial(n, k));
  }
  CounterRng rng(5, 0);
  for (int t = 0; t < 20; ++t) {
    const SequenceFn a = random_sequence(rng, 9);
    SequenceFn ka;
    for (std::size_t n = 0; n <= 8; ++n) ka.values.push_back(seq_k(a, n));
    for (std::size_t n = 0; n <= 8; ++n) {
      const SignedSum back = seq_k_inverse_detailed(ka, n);
      EXPECT_LE(relative_error(back.value, a(n), back.magnitude), 1e-10);
    }
  }
}

TEST(Sequences, StarMatchesLabellingOracle) {
  CounterRng rng(6, 0);
  for (int t = 0; t < 10; ++t) {
    const SequenceFn a = random_sequence(rng, 5), b = random_sequence(rng, 4);
    for (std::size_t n = 0; n <= 9; ++n) {
      const double want = oracle::seq_star([&](std::size_t i) { return a(i); }, [&](std::size_t i) { return b(i); }, n);
      EXPECT_LE(relative_error(seq_star(a, b, n), want), 1e-12);
    }
  }
}

// The unweighted sum is not a K-homomorphism: a = b = delta_1 is the smallest witness.
TEST(Sequences, DeltaOneWitness) {
  const SequenceFn d1 = delta(1);
  EXPECT_EQ(seq_star(d1, d1, 1), 1.0);
  EXPECT_EQ(seq_star(d1, d1, 2), 2.0);
  for (std::size_t n = 0; n <= 6; ++n) {
    EXPECT_EQ(seq_k(seq_star_transform(d1, d1), n), static_cast<double>(n * n));
  }
}

TEST(Sequences, StarHomomorphismOnRandomPairs) {
  CounterRng rng(42, 9);
  for (int t = 0; t < 100; ++t) {
    const SequenceFn a = random_sequence(rng, 9), b = random_sequence(rng, 9);
    const SequenceFn ab = seq_star_transform(a, b);
    EXPECT_EQ(ab.values.size(), 17u);
    for (std::size_t n = 0; n <= 10; ++n) {
      EXPECT_LE(relative_error(seq_k(ab, n), seq_k(a, n) * seq_k(b, n)), 1e-10);
    }
  }
}

TEST(Sequences, CoherentStates) {
  for (std::size_t n = 0; n <= 12; ++n) {
    EXPECT_EQ(coherent_k(0.0, n), 1.0);
    EXPECT_EQ(seq_k(coherent_state(0.0), n), 1.0);
    EXPECT_EQ(coherent_k(-1.0, n), n == 0 ? 1.0 : 0.0);
    EXPECT_EQ(seq_k(coherent_state(-1.0), n), n == 0 ? 1.0 : 0.0);
    for (double l : {0.5, 1.0}) EXPECT_LE(relative_error(seq_k(coherent_state(l), n), coherent_k(l, n)), 1e-12);
  }
  EXPECT_EQ(coherent_k(1.0, 3), 8.0);
  EXPECT_EQ(seq_k(coherent_state(1.0), 3), 8.0);
}

TEST(Sequences, WholeSequenceClosedForms) {
  const SequenceFn ke = seq_k_transform(coherent_state(0.5));
  EXPECT_EQ(std::get<GeometricTail>(ke.tail).ratio, 1.5);
  const SequenceFn back = seq_k_inverse_transform(ke);
  EXPECT_EQ(std::get<GeometricTail>(back.tail).ratio, 0.5);
  const SequenceFn s = seq_star_transform(coherent_state(0.5), coherent_state(2.0));
  EXPECT_EQ(std::get<GeometricTail>(s.tail).ratio, 0.5 + 2.0 + 1.0);
  for (std::size_t n = 0; n <= 8; ++n) {
    EXPECT_LE(relative_error(seq_star(coherent_state(0.5), coherent_state(2.0), n), std::pow(3.5, n)), 1e-12);
  }
  EXPECT_THROW(seq_k_transform(delta(2)), UnsupportedTailError);
  EXPECT_THROW(seq_star_transform(delta(1), coherent_state(0.5)), UnsupportedTailError);
  EXPECT_EQ(seq_k_transform(SequenceFn{}), SequenceFn{});
}

TEST(Sequences, ClassicalSpatialConsistency) {
  for (std::size_t size = 0; size <= 6; ++size) {
    const FiniteConfiguration g = oracle::random_configuration(size, size, 1);
    for (std::size_t k = 0; k <= 6; ++k) {
      EXPECT_EQ(k_transform(QuasiObservable::indicator(k), g), seq_k(delta(k), size));
    }
  }
}
