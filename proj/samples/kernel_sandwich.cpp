// Compares the three size measures of a rank-one kernel and classifies its tail decay.
#include <cstdio>

#include "amk/amk.hpp"

int main() {
  const amk::Grid grid(1, 8.0, 128);
  const auto P = amk::build_partition(0.5, grid);
  const auto A = amk::build_atoms(P, 1.5);
  const auto K = amk::make_kernel_fixture(amk::FixtureKind::rank1, grid);

  const auto R = amk::boundedness_report(K, P, A, 1.0, 1.0);
  std::printf("empirical %.4g  atom bound %.4g  kernel norm %.4g  -> %s\n", R.n1, R.n2, R.n3,
              R.pass ? "consistent" : "inconsistent");

  const auto C = amk::compactness_report(K, P, A, 1.0, 1.0);
  for (std::size_t i = 0; i < C.profile.levels.size(); ++i)
    std::printf("  N = %2d  T(N)/T(0) = %.3e\n", C.profile.levels[i], C.profile.ratio(i));
  std::printf("verdict: %s\n", amk::to_string(C.verdict).c_str());
}
