// Small tour: factorial pairings, the K-transform and the star product on a
// three-point configuration in the plane.

#include <cstdio>

#include "spcomb/spcomb.hpp"

using namespace spcomb;

int main() {
  const FiniteConfiguration g{Point{0.1, 0.2}, Point{0.5, 0.5}, Point{0.8, 0.3}};
  const TestFunction phi = TestFunction::gaussian_bump(Point{0.5, 0.4}, 0.3, 0.8);

  std::printf("configuration of %zu points\n", g.size());
  for (std::size_t n = 0; n <= 4; ++n) {
    const SymmetricKernel f = SymmetricKernel::tensor_power(phi, n);
    std::printf("  n=%zu  <(g)_n, phi^n> = %-12.8g  <g^n, phi^n> = %-12.8g  via Stirling = %.8g\n", n,
                pair_factorial(g, f), pair_tensor(g, f), expand_tensor_via_factorial(g, f));
  }

  // E_phi(g) = prod (1 + phi(x)) = sum_n <(g)_n, phi^n> / n!
  std::printf("E_phi(g) = %.12g, series = %.12g\n", generating_functional(g, phi), generating_functional_series(g, phi));

  // K of a quasi-observable and back again
  const QuasiObservable a = QuasiObservable::by_kernels(
      {SymmetricKernel::constant(1.0, 0), SymmetricKernel::tensor_power(phi, 1), SymmetricKernel::tensor_power(phi, 2)});
  const QuasiObservable b = QuasiObservable::indicator(1);
  std::printf("(K a)(g) = %.12g\n", k_transform(a, g));
  const Observable ka = Observable::k_transform_of(a);
  const FiniteConfiguration two = g.without(g[2]);
  std::printf("(K^-1 K a)(g) = %.3g, a(g) = %.3g  (a vanishes above two points)\n", k_inverse(ka, g), a(g));
  std::printf("(K^-1 K a)(h) = %.12g, a(h) = %.12g on two points\n", k_inverse(ka, two), a(two));

  // K turns star into a pointwise product
  const QuasiObservable ab = star(a, b);
  std::printf("K(a * b)(g) = %.12g, (Ka)(g) (Kb)(g) = %.12g\n", k_transform(ab, g),
              k_transform(a, g) * k_transform(b, g));

  // one-dimensional shadow: sequences on the integers
  const SequenceFn e = coherent_state(0.5);
  std::printf("(K e_0.5)(6) = %.12g = 1.5^6\n", seq_k(e, 6));
  return 0;
}
