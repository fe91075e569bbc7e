// Gaussian Gabor frame on a torus: frame bounds, reconstruction and a kernel estimate.
#include <cstdio>
#include <random>

#include "amk/amk.hpp"

int main() {
  const amk::Grid grid(1, 16.0, 128);
  const auto sys = amk::make_gabor_system(amk::gaussian_window(grid), 0.5);
  std::printf("lattice %d x %d, frame bounds [%.4f, %.4f]\n", sys.lattice.times, sys.lattice.freqs, sys.bounds.lower,
              sys.bounds.upper);

  std::mt19937_64 rng(3);
  const auto f = amk::random_bandlimited_signal(grid, 0.75, rng);
  std::printf("reconstruction error %.2e\n", amk::relative_l2_error(amk::gabor_reconstruct(f, sys), f));

  const auto K = amk::make_kernel_fixture(amk::FixtureKind::localized_convolution, grid);
  const auto R = amk::gabor_kernel_bound(K, sys, 1.0, 1.0);
  std::printf("kernel sandwich: empirical %.4g, pattern bound %.4g, ratio %.3f\n", R.n1, R.n2, R.ratio);
}
