// Factorial moments and the Bogoliubov functional of a Poisson process,
// estimated by Monte Carlo and compared with sigma^n (int phi)^n and
// exp(sigma int phi).

#include <cmath>
#include <cstdio>

#include "spcomb/spcomb.hpp"

using namespace spcomb;

int main(int argc, char** argv) {
  const double sigma = argc > 1 ? std::atof(argv[1]) : 2.0;
  const std::size_t samples = argc > 2 ? static_cast<std::size_t>(std::atol(argv[2])) : 50000;

  const Box window(Point{0.0, 0.0}, Point{1.0, 1.0});
  const PoissonSpec spec{sigma, window, 2024};
  const TestFunction phi = TestFunction::indicator_box(Point{0.1, 0.1}, Point{0.9, 0.7});

  std::printf("sigma = %g, %zu samples, int phi = %g\n", sigma, samples, phi.integral());
  for (std::size_t n = 1; n <= 4; ++n) {
    const Estimate e = empirical_factorial_moment(spec, n, phi, samples);
    const double target = poisson_factorial_moment_target(sigma, phi, n);
    const double dist = e.sigma_distance(target);
    std::printf("  n=%zu  %10.5f +- %-8.5f target %10.5f  %5.2f sigma  %s\n", n, e.estimate, e.std_error, target, dist,
                to_string(classify_sigma_distance(dist)));
  }

  const TestFunction half = TestFunction::scaled(-0.5, phi);
  const Estimate b = empirical_bogoliubov(spec, half, samples);
  const double target = poisson_bogoliubov_target(sigma, half);
  std::printf("  B(-phi/2)  %.5f +- %.5f target %.5f\n", b.estimate, b.std_error, target);

  // the same Poisson law seen through its counting distribution
  const DiscreteLaw law = DiscreteLaw::poisson(sigma * phi.integral());
  std::printf("  bogoliubov_sequence(-0.5) = %.12g, exp = %.12g\n", bogoliubov_sequence(law, -0.5),
              std::exp(-0.5 * sigma * phi.integral()));
  return 0;
}
