#pragma once

#include <random>

#include "amk/amk.hpp"

namespace amk::testing {

/// Complex Gaussian samples with a Gaussian envelope centered in the fundamental domain.
inline Signal random_envelope_signal(const Grid& g, std::mt19937_64& rng, double width = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Signal f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.unflatten(i);
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) r2 += g.centered_coord(p[a]) * g.centered_coord(p[a]);
    f.values[i] = cplx(normal(rng), normal(rng)) * std::exp(-kPi * r2 / (width * width));
  }
  return f;
}

/// Pure exponential e^{2 pi i x m / L} on a 1-d grid.
inline Signal exponential(const Grid& g, int m) {
  Signal f(g);
  for (int j = 0; j < g.n; ++j) f.values[j] = std::polar(1.0, 2.0 * kPi * m * g.coord(j) / g.extent);
  return f;
}

inline double max_abs_diff(const Signal& a, const Signal& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

}  // namespace amk::testing
