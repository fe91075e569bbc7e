#pragma once

#include "amk/amk.hpp"

namespace amk::testing {

/// (sum |v|^p dx)^{1/p} written out without the shared accumulator; dx = 1 for sequences.
inline double reference_lp(const std::vector<double>& mags, double p, double dx = 1.0) {
  if (p == kInf) {
    double m = 0.0;
    for (double v : mags) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : mags) s += std::pow(v, p);
  return std::pow(s * dx, 1.0 / p);
}

/**
 * @brief Mixed kernel norm by literal summation: direct 2-d DFT, band multipliers, direct inverse,
 * then the four nested reductions. O(n^4) per band pair; intended for n <= 32.
 */
inline double reference_mixed_norm(const Kernel2D& K, const AlphaPartition& P, const MixedNormParams& mp) {
  const Grid& g = K.grid;
  const int n = g.n;
  const double L = g.extent, dx = g.dx();
  auto freq = [&](int p) { return (p - n / 2) / L; };
  std::vector<cplx> Khat(static_cast<std::size_t>(n) * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      cplx acc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          acc += K(i, j) * std::polar(1.0, -2.0 * kPi * (i * dx * freq(p) + j * dx * freq(q)));
      Khat[static_cast<std::size_t>(p) * n + q] = dx * dx * acc;
    }
  const std::size_t B = P.size();
  std::vector<std::vector<double>> eta(B);
  for (std::size_t b = 0; b < B; ++b) eta[b] = P.eta[b].dense(n);
  auto bracket = [&](std::size_t b) { return std::sqrt(1.0 + double(P.bands[b].k[0]) * P.bands[b].k[0]); };
  // blocks[a][b][x * n + y]
  std::vector<std::vector<std::vector<cplx>>> blocks(B, std::vector<std::vector<cplx>>(B));
  for (std::size_t a = 0; a < B; ++a)
    for (std::size_t b = 0; b < B; ++b) {
      auto& G = blocks[a][b];
      G.assign(static_cast<std::size_t>(n) * n, cplx{});
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          cplx acc = 0.0;
          for (int p = 0; p < n; ++p) {
            if (eta[a][p] == 0.0) continue;
            for (int q = 0; q < n; ++q) {
              if (eta[b][q] == 0.0) continue;
              acc += Khat[static_cast<std::size_t>(p) * n + q] * eta[a][p] * eta[b][q] *
                     std::polar(1.0, 2.0 * kPi * (x * dx * freq(p) + y * dx * freq(q)));
            }
          }
          G[static_cast<std::size_t>(x) * n + y] = acc / (L * L);
        }
    }
  const double ws = mp.s / (1.0 - P.alpha), wt = mp.t / (1.0 - P.alpha);
  const bool c1 = mp.variant == Variant::c1;
  std::vector<double> outer_vals;
  for (std::size_t o = 0; o < B; ++o) {
    std::vector<double> per_v;
    for (int v = 0; v < n; ++v) {
      std::vector<double> per_inner;
      for (std::size_t in = 0; in < B; ++in) {
        const std::size_t a = c1 ? in : o, b = c1 ? o : in;
        std::vector<double> line;
        for (int u = 0; u < n; ++u) {
          const int x = c1 ? u : v, y = c1 ? v : u;
          line.push_back(std::abs(blocks[a][b][static_cast<std::size_t>(x) * n + y]));
        }
        per_inner.push_back(std::pow(bracket(a), ws) * std::pow(bracket(b), wt) * reference_lp(line, mp.p1, dx));
      }
      per_v.push_back(reference_lp(per_inner, mp.p2));
    }
    outer_vals.push_back(reference_lp(per_v, mp.q1, dx));
  }
  return reference_lp(outer_vals, mp.q2);
}

}  // namespace amk::testing
