#pragma once

#include "amk/kernel.hpp"

namespace amk {

enum class FixtureKind { zero, rank1, identity, convolution, localized_convolution, random_band };

inline FixtureKind parse_fixture_kind(const std::string& s) {
  if (s == "zero") return FixtureKind::zero;
  if (s == "rank1") return FixtureKind::rank1;
  if (s == "identity") return FixtureKind::identity;
  if (s == "convolution") return FixtureKind::convolution;
  if (s == "localized-convolution") return FixtureKind::localized_convolution;
  if (s == "random-band") return FixtureKind::random_band;
  throw std::invalid_argument("unknown fixture kind: " + s);
}

inline std::string to_string(FixtureKind k) {
  switch (k) {
    case FixtureKind::zero: return "zero";
    case FixtureKind::rank1: return "rank1";
    case FixtureKind::identity: return "identity";
    case FixtureKind::convolution: return "convolution";
    case FixtureKind::localized_convolution: return "localized-convolution";
    default: return "random-band";
  }
}

/// Removes the unpaired Nyquist row and column of the kernel spectrum, keeping the fixture symmetric under xi -> -xi.
inline Kernel2D drop_nyquist(const Kernel2D& K) {
  auto F = kernel_spectrum(K);
  const int n = K.n();
  for (int j = 0; j < n; ++j) {
    F[j] = 0.0;
    F[static_cast<std::size_t>(j) * n] = 0.0;
  }
  return inverse_kernel_spectrum(K.grid, std::move(F));
}

/// Gaussian bump exp(-pi (x - x0)^2 / w^2) e^{2 pi i f0 x} in centered torus coordinates.
inline Signal gaussian_packet(const Grid& g, double width, double x0 = 0.0, double f0 = 0.0) {
  Signal s(g);
  for (int m = 0; m < g.n; ++m) {
    const double x = g.centered_coord(m);
    double d = x - x0;
    d -= g.extent * std::round(d / g.extent);
    s.values[m] = std::exp(-kPi * d * d / (width * width)) * std::polar(1.0, 2.0 * kPi * f0 * x);
  }
  return s;
}

/// Rank-one kernel u(x) conj(v(y)).
inline Kernel2D rank_one_kernel(const Signal& u, const Signal& v) {
  require_same_grid(u.grid, v.grid);
  Kernel2D K(u.grid);
  for (int i = 0; i < K.n(); ++i)
    for (int j = 0; j < K.n(); ++j) K(i, j) = u.values[i] * std::conj(v.values[j]);
  return K;
}

/// Convolution kernel k(x - y) whose multiplier is exp(-pi xi^2 / s^2).
inline Kernel2D gaussian_convolution_kernel(const Grid& g, double spread) {
  Spectrum S(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = frequency_at(g, i)[0];
    S.coeffs[i] = std::exp(-kPi * xi * xi / (spread * spread));
  }
  const Signal k = inverse_spectrum(S);
  Kernel2D K(g);
  for (int i = 0; i < K.n(); ++i)
    for (int j = 0; j < K.n(); ++j) K(i, j) = k.values[mod_floor(i - j, g.n)];
  return K;
}

struct FixtureParams {
  double alpha = 0.0;
  double C = 2.0;
  double r = 1.5;
  std::uint64_t seed = 7;
};

/**
 * @brief Deterministic kernels of the built-in suite.
 *
 * identity is the band-limited delta without its Nyquist mode; localized-convolution is
 * w(x) k(x - y) with a Gaussian envelope w; random-band has complex Gaussian spectrum on the
 * retained-band region in both variables.
 */
inline Kernel2D make_kernel_fixture(FixtureKind kind, const Grid& g, const FixtureParams& fp = {}) {
  if (g.dim != 1) throw std::invalid_argument("kernel fixtures need a 1-d grid");
  switch (kind) {
    case FixtureKind::zero: return Kernel2D(g);
    case FixtureKind::identity: {
      Kernel2D K(g);
      for (int i = 0; i < K.n(); ++i) K(i, i) = 1.0 / g.dx();
      return drop_nyquist(K);
    }
    case FixtureKind::rank1: {
      const Signal u = gaussian_packet(g, 0.5);
      const Signal v = gaussian_packet(g, 0.7, 1.0, 1.0);
      return drop_nyquist(rank_one_kernel(u, v));
    }
    case FixtureKind::convolution: return drop_nyquist(gaussian_convolution_kernel(g, 1.5));
    case FixtureKind::localized_convolution: {
      Kernel2D K = gaussian_convolution_kernel(g, 1.5);
      const Signal w = gaussian_packet(g, 1.0);
      for (int i = 0; i < K.n(); ++i)
        for (int j = 0; j < K.n(); ++j) K(i, j) *= w.values[i];
      return drop_nyquist(K);
    }
    case FixtureKind::random_band: {
      const auto P = build_partition(fp.alpha, g, fp.C);
      const auto A = build_atoms(P, fp.r);
      const auto mask = retained_region(P, A);
      std::mt19937_64 rng(fp.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<cplx> F(static_cast<std::size_t>(g.n) * g.n);
      for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
          const double re = normal(rng), im = normal(rng);
          if (mask[i] && mask[j]) F[static_cast<std::size_t>(i) * g.n + j] = {re, im};
        }
      return drop_nyquist(inverse_kernel_spectrum(g, std::move(F)));
    }
  }
  throw std::invalid_argument("unknown fixture kind");
}

/// Random signal supported on the retained-band region of a partition.
inline Signal random_band_signal(const AlphaPartition& P, const AtomFamily& A, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto mask = retained_region(P, A);
  return random_masked_signal(P.grid, mask, rng);
}

}  // namespace amk
