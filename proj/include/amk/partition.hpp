#pragma once

#include <cstdint>
#include <optional>

#include "amk/fft.hpp"
#include "amk/profile.hpp"

namespace amk {

using BandIndex = std::vector<int>;

/// Covering constant used when none is supplied.
inline double default_covering_constant(int dim) { return dim == 1 ? 2.0 : 3.0; }

inline void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0, 1)");
}

/// Japanese bracket (1 + |k|^2)^{1/2}.
inline double bracket(std::span<const int> k) {
  double s = 1.0;
  for (int v : k) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

/**
 * @brief Ball of one band: center <k>^e k and radius C <k>^e with e = alpha / (1 - alpha).
 */
struct BandGeometry {
  double alpha = 0.0;
  double C = 1.0;
  BandIndex k;
  double bracket = 1.0;
  /// <k>^{alpha/(1-alpha)}, the band's dilation factor.
  double scale = 1.0;
  std::vector<double> center;
  double radius = 1.0;
};

inline BandGeometry band_geometry(double alpha, std::span<const int> k, double C) {
  require_alpha(alpha);
  if (!(C > 0.0)) throw std::invalid_argument("covering constant must be positive");
  BandGeometry b;
  b.alpha = alpha;
  b.C = C;
  b.k.assign(k.begin(), k.end());
  b.bracket = amk::bracket(k);
  b.scale = std::pow(b.bracket, alpha / (1.0 - alpha));
  for (int v : k) b.center.push_back(b.scale * v);
  b.radius = C * b.scale;
  return b;
}

inline BandGeometry band_geometry(double alpha, int k, double C) {
  return band_geometry(alpha, std::span<const int>(&k, 1), C);
}

/// Euclidean distance from a point to the closed cube [-h, h]^dim.
inline double distance_to_cube(std::span<const double> c, double h) {
  double s = 0.0;
  for (double v : c) {
    const double excess = std::abs(v) - h;
    if (excess > 0.0) s += excess * excess;
  }
  return std::sqrt(s);
}

/// Distance from xi to a band center.
inline double distance_to_center(const std::array<double, 2>& xi, const BandGeometry& b) {
  double s = 0.0;
  for (std::size_t a = 0; a < b.center.size(); ++a) {
    const double d = xi[a] - b.center[a];
    s += d * d;
  }
  return std::sqrt(s);
}

/**
 * @brief All k whose open ball meets the open Nyquist cube, in lexicographic order.
 */
inline std::vector<BandIndex> active_bands(double alpha, const Grid& grid, double C) {
  require_alpha(alpha);
  grid.validate();
  const double h = grid.nyquist();
  const double e = alpha / (1.0 - alpha);
  // <m>^e (m - C) is increasing once m >= C: past the first m reaching h sqrt(dim) no ball can meet the cube
  int kmax = 0;
  while (true) {
    const double m = kmax;
    if (m >= C && std::pow(1.0 + m * m, e / 2.0) * (m - C) >= h * std::sqrt(grid.dim)) break;
    ++kmax;
  }
  std::vector<BandIndex> out;
  auto consider = [&](BandIndex k) {
    const auto b = band_geometry(alpha, k, C);
    if (distance_to_cube(b.center, h) < b.radius) out.push_back(std::move(k));
  };
  if (grid.dim == 1) {
    for (int a = -kmax; a <= kmax; ++a) consider({a});
  } else {
    for (int a = -kmax; a <= kmax; ++a)
      for (int c = -kmax; c <= kmax; ++c) consider({a, c});
  }
  return out;
}

/// Nonzero grid samples of a frequency function, by flat spectral position.
struct SparseMask {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  [[nodiscard]] std::vector<double> dense(std::size_t size) const {
    std::vector<double> out(size, 0.0);
    for (std::size_t i = 0; i < index.size(); ++i) out[index[i]] = value[i];
    return out;
  }
  /// Spectrum multiplied by this mask.
  [[nodiscard]] Spectrum apply(const Spectrum& F) const {
    Spectrum out(F.grid);
    for (std::size_t i = 0; i < index.size(); ++i) out.coeffs[index[i]] = F.coeffs[index[i]] * value[i];
    return out;
  }
};

/**
 * @brief The normalized family eta_k = rho_k / sum_l rho_l over the active bands.
 *
 * Every grid frequency is covered; the arrays are exact zeros outside each band's open ball.
 */
struct AlphaPartition {
  Grid grid;
  double alpha = 0.0;
  double C = 2.0;
  std::vector<BandGeometry> bands;
  std::vector<SparseMask> eta;
  /// Minimum over the grid of sum_l rho_l.
  double min_cover = 0.0;

  [[nodiscard]] std::size_t size() const { return bands.size(); }

  [[nodiscard]] std::optional<std::size_t> find(std::span<const int> k) const {
    for (std::size_t i = 0; i < bands.size(); ++i)
      if (std::equal(bands[i].k.begin(), bands[i].k.end(), k.begin(), k.end())) return i;
    return std::nullopt;
  }
  [[nodiscard]] std::size_t require(std::span<const int> k) const {
    if (auto i = find(k)) return *i;
    throw std::out_of_range("band index is not active");
  }
};

/// Error raised when sum_l rho_l nearly vanishes somewhere on the grid.
struct covering_error : std::invalid_argument {
  double min_cover;
  explicit covering_error(double m) : std::invalid_argument("covering constant too small"), min_cover(m) {}
};

template <RadialProfile Profile = SmoothStepProfile>
AlphaPartition build_partition(double alpha, const Grid& grid, double C, Profile profile = {}) {
  AlphaPartition P;
  P.grid = grid;
  P.alpha = alpha;
  P.C = C;
  const auto ks = active_bands(alpha, grid, C);
  const std::size_t size = grid.size();
  std::vector<double> total(size, 0.0);
  std::vector<SparseMask> rho;
  for (const auto& k : ks) {
    BandGeometry b = band_geometry(alpha, k, C);
    SparseMask m;
    const double dilation = 2.0 * C * b.scale;
    for (std::size_t i = 0; i < size; ++i) {
      const double d = distance_to_center(frequency_at(grid, i), b);
      if (d >= b.radius) continue;
      const double v = profile(d / dilation);
      if (v == 0.0) continue;
      m.index.push_back(static_cast<std::uint32_t>(i));
      m.value.push_back(v);
      total[i] += v;
    }
    P.bands.push_back(std::move(b));
    rho.push_back(std::move(m));
  }
  P.min_cover = *std::min_element(total.begin(), total.end());
  if (P.min_cover < 1e-6) throw covering_error(P.min_cover);
  for (auto& m : rho)
    for (std::size_t i = 0; i < m.index.size(); ++i) m.value[i] /= total[m.index[i]];
  P.eta = std::move(rho);
  return P;
}

inline AlphaPartition build_partition(double alpha, const Grid& grid) {
  return build_partition(alpha, grid, default_covering_constant(grid.dim));
}

/**
 * @brief Companion atoms phi_k: 1 on the band ball, supported in the ball enlarged by r.
 *
 * Only bands whose enlarged ball fits inside the Nyquist window are retained;
 * `band[i]` is the partition position of retained atom i.
 */
struct AtomFamily {
  Grid grid;
  double alpha = 0.0;
  double C = 2.0;
  double r = 1.5;
  std::vector<std::size_t> band;
  std::vector<SparseMask> phi;
  std::vector<BandIndex> dropped;

  [[nodiscard]] std::size_t size() const { return band.size(); }
  [[nodiscard]] std::optional<std::size_t> find_band(std::size_t partition_pos) const {
    for (std::size_t i = 0; i < band.size(); ++i)
      if (band[i] == partition_pos) return i;
    return std::nullopt;
  }
};

inline AtomFamily build_atoms(const AlphaPartition& P, double r) {
  if (!(r > 1.0)) throw std::invalid_argument("enlargement factor r must exceed 1");
  AtomFamily A;
  A.grid = P.grid;
  A.alpha = P.alpha;
  A.C = P.C;
  A.r = r;
  const double h = P.grid.nyquist();
  for (std::size_t pos = 0; pos < P.size(); ++pos) {
    const auto& b = P.bands[pos];
    const double outer = r * b.radius;
    const bool fits = std::all_of(b.center.begin(), b.center.end(), [&](double c) { return std::abs(c) + outer <= h; });
    if (!fits) {
      A.dropped.push_back(b.k);
      continue;
    }
    const RadialBump bump{b.radius, outer};
    SparseMask m;
    for (std::size_t i = 0; i < P.grid.size(); ++i) {
      const double v = bump(distance_to_center(frequency_at(P.grid, i), b));
      if (v == 0.0) continue;
      m.index.push_back(static_cast<std::uint32_t>(i));
      m.value.push_back(v);
    }
    A.band.push_back(pos);
    A.phi.push_back(std::move(m));
  }
  if (A.band.empty()) throw std::invalid_argument("no band fits the Nyquist window at this enlargement");
  return A;
}

/// Grid frequencies where every dropped band's eta vanishes: signals supported here are retained-band.
inline std::vector<char> retained_region(const AlphaPartition& P, const AtomFamily& A) {
  std::vector<char> mask(P.grid.size(), 1);
  for (std::size_t pos = 0; pos < P.size(); ++pos) {
    if (A.find_band(pos)) continue;
    for (auto i : P.eta[pos].index) mask[i] = 0;
  }
  return mask;
}

/// Diagnostic summary of a partition against its structural invariants.
struct PartitionReport {
  double max_sum_deviation = 0.0;
  std::vector<std::size_t> support_violations;
  std::size_t range_violations = 0;
  /// max over the grid of |grad eta_k| * <k>^{alpha/(1-alpha)}, per band.
  std::vector<double> scaled_gradient;
  /// Bands whose ball lies inside the window; only these enter the spread.
  std::vector<char> interior;
  double gradient_spread = 1.0;
  double sum_tolerance = 1e-10;
  double spread_tolerance = 50.0;
  bool pass = false;
};

inline PartitionReport validate_partition(const AlphaPartition& P, double sum_tolerance = 1e-10,
                                          double spread_tolerance = 50.0) {
  PartitionReport R;
  R.sum_tolerance = sum_tolerance;
  R.spread_tolerance = spread_tolerance;
  const Grid& g = P.grid;
  const std::size_t size = g.size();
  std::vector<double> total(size, 0.0);
  R.support_violations.assign(P.size(), 0);
  R.scaled_gradient.assign(P.size(), 0.0);
  R.interior.assign(P.size(), 0);
  const double h = g.nyquist();
  for (std::size_t pos = 0; pos < P.size(); ++pos) {
    const auto& b = P.bands[pos];
    const auto& m = P.eta[pos];
    for (std::size_t i = 0; i < m.index.size(); ++i) {
      total[m.index[i]] += m.value[i];
      if (distance_to_center(frequency_at(g, m.index[i]), b) >= b.radius) ++R.support_violations[pos];
      if (m.value[i] < 0.0 || m.value[i] > 1.0) ++R.range_violations;
    }
    const auto dense = m.dense(size);
    double grad = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      const auto p = g.unflatten(i);
      double sq = 0.0;
      if (p[0] + 1 < g.n) {
        const std::size_t j = g.dim == 1 ? i + 1 : i + g.n;
        const double d = (dense[j] - dense[i]) / g.dxi();
        sq += d * d;
      }
      if (g.dim == 2 && p[1] + 1 < g.n) {
        const double d = (dense[i + 1] - dense[i]) / g.dxi();
        sq += d * d;
      }
      grad = std::max(grad, std::sqrt(sq));
    }
    R.scaled_gradient[pos] = grad * b.scale;
    R.interior[pos] = std::all_of(b.center.begin(), b.center.end(),
                                  [&](double c) { return std::abs(c) + b.radius <= h; });
  }
  for (double t : total) R.max_sum_deviation = std::max(R.max_sum_deviation, std::abs(t - 1.0));
  double lo = kInf, hi = 0.0;
  for (std::size_t pos = 0; pos < P.size(); ++pos) {
    if (!R.interior[pos] || R.scaled_gradient[pos] <= 0.0) continue;
    lo = std::min(lo, R.scaled_gradient[pos]);
    hi = std::max(hi, R.scaled_gradient[pos]);
  }
  R.gradient_spread = hi > 0.0 ? hi / lo : 1.0;
  const bool supports_ok = std::all_of(R.support_violations.begin(), R.support_violations.end(),
                                       [](std::size_t c) { return c == 0; });
  R.pass = R.max_sum_deviation <= sum_tolerance && supports_ok && R.range_violations == 0 &&
           R.gradient_spread <= spread_tolerance;
  return R;
}

}  // namespace amk
