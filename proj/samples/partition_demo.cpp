// Builds alpha-coverings of a 1-d torus and prints their band layout and validation numbers.
#include <cstdio>

#include "amk/amk.hpp"

int main() {
  const amk::Grid grid(1, 32.0, 1024);
  for (double alpha : {0.0, 0.5}) {
    const auto P = amk::build_partition(alpha, grid);
    const auto R = amk::validate_partition(P);
    std::printf("alpha = %.2f: %zu bands, sum deviation %.2e, gradient spread %.2f\n", alpha, P.size(),
                R.max_sum_deviation, R.gradient_spread);
    for (const auto& b : P.bands)
      if (b.k[0] >= 0) std::printf("  k = %3d  center %8.3f  radius %7.3f\n", b.k[0], b.center[0], b.radius);
  }
}
