#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace amk {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/**
 * @brief Uniform periodic grid on the cube [0, extent)^dim.
 *
 * Spatial samples sit at x_m = m * dx. Frequency samples sit at xi_j = j / extent
 * for j in [-n/2, n/2), stored in signed order so position p holds j = p - n/2.
 */
struct Grid {
  int dim = 1;
  double extent = 1.0;
  int n = 8;

  Grid() = default;
  Grid(int dim_, double extent_, int n_) : dim(dim_), extent(extent_), n(n_) { validate(); }

  void validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid dim must be 1 or 2");
    if (!(extent > 0.0) || !std::isfinite(extent)) throw std::invalid_argument("grid extent must be positive");
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("grid n must be even and at least 8");
  }

  [[nodiscard]] double dx() const { return extent / n; }
  [[nodiscard]] double dxi() const { return 1.0 / extent; }
  /// Half-width of the Nyquist window: the band is [-nyquist, nyquist) per axis.
  [[nodiscard]] double nyquist() const { return n / (2.0 * extent); }
  [[nodiscard]] std::size_t size() const {
    return dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
  }
  /// Quadrature weight dx^dim.
  [[nodiscard]] double cell() const { return std::pow(dx(), dim); }
  /// Spectral weight (1/extent)^dim.
  [[nodiscard]] double spectral_cell() const { return std::pow(dxi(), dim); }

  /// Signed frequency index stored at position p along one axis.
  [[nodiscard]] int freq_index(int p) const { return p - n / 2; }
  [[nodiscard]] double freq(int p) const { return freq_index(p) / extent; }
  /// Spatial coordinate of sample m read in the fundamental domain [-L/2, L/2).
  [[nodiscard]] double centered_coord(int m) const {
    const int s = m < n / 2 ? m : m - n;
    return s * dx();
  }
  [[nodiscard]] double coord(int m) const { return m * dx(); }

  /// Axis positions of a flat row-major index.
  [[nodiscard]] std::array<int, 2> unflatten(std::size_t idx) const {
    if (dim == 1) return {static_cast<int>(idx), 0};
    return {static_cast<int>(idx / n), static_cast<int>(idx % n)};
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim == b.dim && a.n == b.n && a.extent == b.extent;
  }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

/// Complex samples of a function on a Grid, row-major over axes.
struct Signal {
  Grid grid;
  std::vector<cplx> values;

  Signal() = default;
  explicit Signal(const Grid& g) : grid(g), values(g.size()) {}
  Signal(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw std::invalid_argument("signal length does not match grid");
  }

  Signal& operator+=(const Signal& o) {
    require_same_grid(grid, o.grid);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
  }
  Signal& operator-=(const Signal& o) {
    require_same_grid(grid, o.grid);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
  }
  Signal& operator*=(cplx c) {
    for (auto& v : values) v *= c;
    return *this;
  }
  friend Signal operator+(Signal a, const Signal& b) { return a += b; }
  friend Signal operator-(Signal a, const Signal& b) { return a -= b; }
  friend Signal operator*(cplx c, Signal a) { return a *= c; }
};

/**
 * @brief Quadrature Fourier transform samples in signed frequency order.
 *
 * coeffs[j] = dx^dim * sum_m values[m] * exp(-2 pi i x_m . xi_j).
 */
struct Spectrum {
  Grid grid;
  std::vector<cplx> coeffs;

  Spectrum() = default;
  explicit Spectrum(const Grid& g) : grid(g), coeffs(g.size()) {}
  Spectrum(const Grid& g, std::vector<cplx> c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.size() != grid.size()) throw std::invalid_argument("spectrum length does not match grid");
  }
};

/// Exponent validation shared by every norm: p in (0, inf].
inline void require_exponent(double p, const char* name = "p") {
  if (!(p > 0.0)) throw std::invalid_argument(std::string(name) + " must lie in (0, inf]");
}

/// Accumulates |a|^p (or the running max for p = inf) and finishes to the l^p value.
class LpAccumulator {
 public:
  explicit LpAccumulator(double p) : p_(p) { require_exponent(p); }

  void add(double magnitude) {
    if (p_ == kInf) {
      acc_ = std::max(acc_, magnitude);
    } else if (magnitude > 0.0) {
      acc_ += p_ == 2.0 ? magnitude * magnitude : p_ == 1.0 ? magnitude : std::pow(magnitude, p_);
    }
  }
  void add_power(double already_raised) {
    if (p_ == kInf) acc_ = std::max(acc_, already_raised);
    else acc_ += already_raised;
  }
  /// Raw accumulated sum of powers (or max).
  [[nodiscard]] double raw() const { return acc_; }
  [[nodiscard]] double value(double weight = 1.0) const {
    if (p_ == kInf) return acc_;
    if (acc_ == 0.0) return 0.0;
    const double s = weight * acc_;
    return p_ == 1.0 ? s : p_ == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p_);
  }

 private:
  double p_;
  double acc_ = 0.0;
};

/// Discrete L^p norm (dx^dim sum |f|^p)^{1/p}; p = inf gives the max modulus.
inline double lp_norm(const Signal& f, double p) {
  LpAccumulator acc(p);
  for (const auto& v : f.values) acc.add(std::abs(v));
  return acc.value(f.grid.cell());
}

/// Sequence l^p norm; p = inf gives the sup.
template <class Range>
double lp_seq_norm(const Range& a, double p) {
  LpAccumulator acc(p);
  for (const auto& v : a) acc.add(std::abs(v));
  return acc.value();
}

inline double lp_seq_norm(std::initializer_list<cplx> a, double p) {
  return lp_seq_norm(std::span<const cplx>(a.begin(), a.size()), p);
}

/// Relative L^2 distance ||a - b|| / ||b|| (absolute when b vanishes).
inline double relative_l2_error(const Signal& a, const Signal& b) {
  require_same_grid(a.grid, b.grid);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace amk
