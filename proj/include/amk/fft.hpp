#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "amk/grid.hpp"

namespace amk {
namespace fft {

enum class Direction : int { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

/**
 * @brief Process-wide cache of FFTW plans keyed by transform shape.
 *
 * Planning is serialized under a mutex; executing a cached plan on fresh
 * arrays through the new-array interface is safe from any thread.
 */
class PlanCache {
 public:
  struct Shape {
    std::vector<int> dims;
    int howmany = 1;
    int stride = 1;
    int dist = 0;
    Direction dir = Direction::forward;
    friend bool operator<(const Shape& a, const Shape& b) {
      return std::tie(a.dims, a.howmany, a.stride, a.dist, a.dir) <
             std::tie(b.dims, b.howmany, b.stride, b.dist, b.dir);
    }
  };

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

  fftw_plan plan(const Shape& shape) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(shape); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d : shape.dims) total *= static_cast<std::size_t>(d);
    const std::size_t span = static_cast<std::size_t>(shape.howmany - 1) * shape.dist +
                             (total - 1) * static_cast<std::size_t>(shape.stride) + 1;
    auto* scratch = fftw_alloc_complex(span);
    fftw_plan p = fftw_plan_many_dft(static_cast<int>(shape.dims.size()), shape.dims.data(), shape.howmany,
                                     scratch, nullptr, shape.stride, shape.dist, scratch, nullptr, shape.stride,
                                     shape.dist, static_cast<int>(shape.dir), FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (p == nullptr) throw std::runtime_error("fftw planning failed");
    plans_.emplace(shape, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [shape, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<Shape, fftw_plan> plans_;
};

inline fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

/// Unnormalized in-place DFT over a row-major array with the given axis lengths.
inline void transform(std::span<cplx> data, std::span<const int> dims, Direction dir) {
  if (data.empty()) return;
  PlanCache::Shape shape{{dims.begin(), dims.end()}, 1, 1, 0, dir};
  fftw_execute_dft(PlanCache::instance().plan(shape), as_fftw(data.data()), as_fftw(data.data()));
}

/// Batch of `howmany` in-place 1-d DFTs of length `len`, element stride `stride`, batch distance `dist`.
inline void transform_many(std::span<cplx> data, int len, int howmany, int stride, int dist, Direction dir) {
  if (data.empty()) return;
  PlanCache::Shape shape{{len}, howmany, stride, dist, dir};
  fftw_execute_dft(PlanCache::instance().plan(shape), as_fftw(data.data()), as_fftw(data.data()));
}

/// Swap halves along every axis: standard order <-> signed order (n even, so the swap is an involution).
inline void swap_halves(std::span<cplx> data, int n, int dim) {
  const int h = n / 2;
  if (dim == 1) {
    std::swap_ranges(data.begin(), data.begin() + h, data.begin() + h);
    return;
  }
  for (int r = 0; r < n; ++r) {
    auto row = data.subspan(static_cast<std::size_t>(r) * n, n);
    std::swap_ranges(row.begin(), row.begin() + h, row.begin() + h);
  }
  const auto half = static_cast<std::size_t>(h) * n;
  std::swap_ranges(data.begin(), data.begin() + half, data.begin() + half);
}

}  // namespace fft

/// Quadrature Fourier transform under the e^{-2 pi i x.xi} convention.
inline Spectrum spectrum(const Signal& f) {
  Spectrum out(f.grid, f.values);
  const std::array<int, 2> dims{f.grid.n, f.grid.n};
  fft::transform(out.coeffs, std::span<const int>(dims.data(), f.grid.dim), fft::Direction::forward);
  fft::swap_halves(out.coeffs, f.grid.n, f.grid.dim);
  const double w = f.grid.cell();
  for (auto& c : out.coeffs) c *= w;
  return out;
}

/// Inverse of spectrum(): v[m] = (1/L)^dim sum_j F_j e^{2 pi i x_m.xi_j}.
inline Signal inverse_spectrum(const Spectrum& F) {
  Signal out(F.grid, F.coeffs);
  fft::swap_halves(out.values, F.grid.n, F.grid.dim);
  const std::array<int, 2> dims{F.grid.n, F.grid.n};
  fft::transform(out.values, std::span<const int>(dims.data(), F.grid.dim), fft::Direction::backward);
  const double w = F.grid.spectral_cell();
  for (auto& v : out.values) v *= w;
  return out;
}

/// Signed frequency vector (xi_0[, xi_1]) of the spectrum position idx.
inline std::array<double, 2> frequency_at(const Grid& g, std::size_t idx) {
  const auto p = g.unflatten(idx);
  return {g.freq(p[0]), g.dim == 2 ? g.freq(p[1]) : 0.0};
}

/// Shift f(. - y) by phase multiplication; y is read modulo the extent.
inline Signal translate(const Signal& f, std::span<const double> y) {
  if (static_cast<int>(y.size()) != f.grid.dim) throw std::invalid_argument("shift dimension mismatch");
  Spectrum F = spectrum(f);
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const auto xi = frequency_at(F.grid, i);
    double phase = y[0] * xi[0];
    if (y.size() > 1) phase += y[1] * xi[1];
    F.coeffs[i] *= std::polar(1.0, -2.0 * kPi * phase);
  }
  return inverse_spectrum(F);
}

inline Signal translate(const Signal& f, double y) { return translate(f, std::span<const double>(&y, 1)); }

/// Direct band-limited evaluation (1/L)^dim sum_j F_j e^{2 pi i x.xi_j} at an arbitrary point.
inline cplx evaluate_at(const Spectrum& F, std::span<const double> x) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    if (F.coeffs[i] == cplx{}) continue;
    const auto xi = frequency_at(F.grid, i);
    double phase = x[0] * xi[0];
    if (x.size() > 1) phase += x[1] * xi[1];
    acc += F.coeffs[i] * std::polar(1.0, 2.0 * kPi * phase);
  }
  return acc * F.grid.spectral_cell();
}

/// Non-negative remainder of j modulo m.
inline int mod_floor(int j, int m) {
  const int r = j % m;
  return r < 0 ? r + m : r;
}

/**
 * @brief Samples of the band-limited function with spectrum F at x = l * (L/M), l in [0, M)^dim.
 *
 * Exact for any M: the spectrum is folded modulo M and a length-M inverse DFT is applied.
 */
inline std::vector<cplx> sample_lattice(const Spectrum& F, int M) {
  if (M < 1) throw std::invalid_argument("lattice size must be positive");
  const Grid& g = F.grid;
  const std::size_t total = g.dim == 1 ? M : static_cast<std::size_t>(M) * M;
  std::vector<cplx> folded(total);
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    if (F.coeffs[i] == cplx{}) continue;
    const auto p = g.unflatten(i);
    std::size_t dst = mod_floor(g.freq_index(p[0]), M);
    if (g.dim == 2) dst = dst * M + mod_floor(g.freq_index(p[1]), M);
    folded[dst] += F.coeffs[i];
  }
  const std::array<int, 2> dims{M, M};
  fft::transform(folded, std::span<const int>(dims.data(), g.dim), fft::Direction::backward);
  const double w = g.spectral_cell();
  for (auto& v : folded) v *= w;
  return folded;
}

/**
 * @brief Spectrum of sum_l c_l * T_{l L/M} w-check, where w is the window sampled on the grid.
 *
 * `window` holds the grid samples of w in signed spectral order; the result is w_j * DFT_M(c)[j mod M].
 */
inline Spectrum synthesize_lattice(const Grid& g, std::span<const cplx> coeffs, int M, std::span<const double> window) {
  std::vector<cplx> c(coeffs.begin(), coeffs.end());
  const std::array<int, 2> dims{M, M};
  fft::transform(c, std::span<const int>(dims.data(), g.dim), fft::Direction::forward);
  Spectrum out(g);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    if (window[i] == 0.0) continue;
    const auto p = g.unflatten(i);
    std::size_t src = mod_floor(g.freq_index(p[0]), M);
    if (g.dim == 2) src = src * M + mod_floor(g.freq_index(p[1]), M);
    out.coeffs[i] = window[i] * c[src];
  }
  return out;
}

/// Lattice size M = ceil(L / spacing): the torus lattice spacing L/M never exceeds the requested one.
inline int lattice_size(double extent, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  const double ratio = extent / spacing;
  const double rounded = std::round(ratio);
  // a ratio within rounding noise of an integer keeps the requested spacing exactly
  if (std::abs(ratio - rounded) < 1e-9 * std::max(1.0, ratio)) return static_cast<int>(rounded);
  return static_cast<int>(std::ceil(ratio));
}

/// Signed representative of a lattice index l in [0, M): values at or beyond M/2 wrap to l - M.
inline int signed_lattice_index(int l, int M) { return l < (M + 1) / 2 ? l : l - M; }

}  // namespace amk
