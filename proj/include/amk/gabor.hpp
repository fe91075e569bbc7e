#pragma once

#include <Eigen/Dense>

#include "amk/kernel.hpp"

namespace amk {

/// A time-frequency shift pi(x, xi) f(t) = e^{2 pi i t xi} f(t - x).
struct TimeFrequencyShift {
  double x = 0.0;
  double xi = 0.0;
};

inline int grid_steps(double value, double step, const char* what) {
  const double r = value / step;
  const double k = std::round(r);
  if (std::abs(r - k) > 1e-9 * std::max(1.0, std::abs(r)))
    throw std::invalid_argument(std::string(what) + " is not a multiple of the grid step");
  return static_cast<int>(k);
}

/// pi(z) f on the torus; x must be a multiple of dx and xi a multiple of 1/L.
inline Signal tf_shift(const Signal& f, const TimeFrequencyShift& z) {
  const Grid& g = f.grid;
  if (g.dim != 1) throw std::invalid_argument("time-frequency shifts are implemented for d = 1");
  const int s = grid_steps(z.x, g.dx(), "time shift");
  const int j = grid_steps(z.xi, g.dxi(), "frequency shift");
  Signal out(g);
  for (int m = 0; m < g.n; ++m) {
    const cplx phase = std::polar(1.0, 2.0 * kPi * static_cast<double>(mod_floor(j, g.n)) * m / g.n);
    out.values[m] = phase * f.values[mod_floor(m - s, g.n)];
  }
  return out;
}

/// L^2-normalized Gaussian window 2^{1/4} w^{-1/2} exp(-pi x^2 / w^2), centered at 0 on the torus.
inline Signal gaussian_window(const Grid& g, double width = 1.0) {
  if (g.dim != 1) throw std::invalid_argument("windows are implemented for d = 1");
  if (!(width > 0.0)) throw std::invalid_argument("window width must be positive");
  Signal w(g);
  const double c = std::pow(2.0, 0.25) / std::sqrt(width);
  for (int m = 0; m < g.n; ++m) {
    const double x = g.centered_coord(m);
    w.values[m] = c * std::exp(-kPi * x * x / (width * width));
  }
  return w;
}

/**
 * @brief Full STFT V_g f(x_m, xi_j) = <f, pi(x_m, xi_j) g> on the sample-by-frequency grid.
 *
 * Row m holds time shift x_m; column p holds frequency xi at signed position p.
 */
inline std::vector<cplx> stft(const Signal& f, const Signal& g) {
  require_same_grid(f.grid, g.grid);
  if (f.grid.dim != 1) throw std::invalid_argument("stft is implemented for d = 1");
  if (lp_norm(g, 2.0) == 0.0) throw std::invalid_argument("stft window must be nonzero");
  const int n = f.grid.n;
  std::vector<cplx> out(static_cast<std::size_t>(n) * n);
  parallel_for(n, [&](std::size_t m) {
    Signal h(f.grid);
    for (int t = 0; t < n; ++t) h.values[t] = f.values[t] * std::conj(g.values[mod_floor(t - static_cast<int>(m), n)]);
    const Spectrum H = spectrum(h);
    std::copy(H.coeffs.begin(), H.coeffs.end(), out.begin() + static_cast<std::ptrdiff_t>(m * n));
  });
  return out;
}

/// Phase-space L^2 norm of an STFT array with measure dx * (1/L).
inline double stft_l2_norm(const std::vector<cplx>& V, const Grid& g) {
  double s = 0.0;
  for (const auto& v : V) s += std::norm(v);
  return std::sqrt(s * g.dx() * g.dxi());
}

/// Lattice delta Z x delta Z on the torus phase space: times a delta, frequencies b delta inside the Nyquist window.
struct GaborLattice {
  double delta = 0.5;
  int times = 1;
  int freq_lo = 0;
  int freqs = 1;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(times) * freqs; }
  [[nodiscard]] TimeFrequencyShift point(std::size_t i) const {
    const int a = static_cast<int>(i / freqs), b = static_cast<int>(i % freqs);
    return {a * delta, (freq_lo + b) * delta};
  }
  /// Signed (time, frequency) lattice indices of point i.
  [[nodiscard]] std::array<int, 2> signed_index(std::size_t i) const {
    const int a = static_cast<int>(i / freqs), b = static_cast<int>(i % freqs);
    return {signed_lattice_index(a, times), freq_lo + b};
  }
};

inline GaborLattice make_lattice(const Grid& g, double delta) {
  if (g.dim != 1) throw std::invalid_argument("gabor lattices are implemented for d = 1");
  if (!(delta > 0.0)) throw std::invalid_argument("lattice step must be positive");
  grid_steps(delta, g.dx(), "lattice time step");
  grid_steps(delta, g.dxi(), "lattice frequency step");
  GaborLattice lat;
  lat.delta = delta;
  lat.times = grid_steps(g.extent, delta, "extent over lattice step");
  const double h = g.nyquist();
  lat.freq_lo = static_cast<int>(std::ceil(-h / delta - 1e-9));
  const int hi = static_cast<int>(std::ceil(h / delta - 1e-9));
  lat.freqs = hi - lat.freq_lo;
  return lat;
}

/// Matrix with columns pi(lambda) g over the lattice.
inline Eigen::MatrixXcd synthesis_matrix(const Signal& window, const GaborLattice& lat) {
  const int n = window.grid.n;
  Eigen::MatrixXcd G(n, static_cast<Eigen::Index>(lat.size()));
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Signal s = tf_shift(window, lat.point(i));
    for (int m = 0; m < n; ++m) G(m, static_cast<Eigen::Index>(i)) = s.values[m];
  }
  return G;
}

/// Matrix of S f = sum_lambda <f, pi(lambda) g> pi(lambda) g under the quadrature inner product.
inline Eigen::MatrixXcd frame_matrix(const Signal& window, const GaborLattice& lat) {
  const Eigen::MatrixXcd G = synthesis_matrix(window, lat);
  return window.grid.dx() * (G * G.adjoint());
}

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  [[nodiscard]] double condition() const { return lower > 0.0 ? upper / lower : kInf; }
};

inline FrameBounds frame_bounds(const Eigen::MatrixXcd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

struct not_a_frame : std::domain_error {
  double lower;
  explicit not_a_frame(double l)
      : std::domain_error("not a frame at this density (min eigenvalue " + std::to_string(l) + ")"), lower(l) {}
};

/**
 * @brief Gabor system G(g, Lambda) with verified frame bounds and its canonical dual window S^{-1} g.
 */
struct GaborSystem {
  Grid grid;
  Signal window;
  GaborLattice lattice;
  FrameBounds bounds;
  Eigen::MatrixXcd S;
  Signal dual;
};

inline GaborSystem make_gabor_system(const Signal& window, double delta, double singular_tol = 1e-8) {
  if (lp_norm(window, 2.0) == 0.0) throw std::invalid_argument("gabor window must be nonzero");
  GaborSystem sys;
  sys.grid = window.grid;
  sys.window = window;
  sys.lattice = make_lattice(window.grid, delta);
  sys.S = frame_matrix(window, sys.lattice);
  sys.bounds = frame_bounds(sys.S);
  if (sys.bounds.lower < singular_tol) throw not_a_frame(sys.bounds.lower);
  Eigen::VectorXcd g(window.grid.n);
  for (int m = 0; m < window.grid.n; ++m) g(m) = window.values[m];
  const Eigen::VectorXcd gamma = sys.S.llt().solve(g);
  sys.dual = Signal(window.grid);
  for (int m = 0; m < window.grid.n; ++m) sys.dual.values[m] = gamma(m);
  return sys;
}

/// The frame operator as a kernel: S = dx K, so K = S / dx.
inline Kernel2D frame_operator(const GaborSystem& sys) {
  Kernel2D K(sys.grid);
  const double inv = 1.0 / sys.grid.dx();
  for (int i = 0; i < sys.grid.n; ++i)
    for (int j = 0; j < sys.grid.n; ++j) K(i, j) = sys.S(i, j) * inv;
  return K;
}

inline Signal dual_window(const GaborSystem& sys) { return sys.dual; }

/// Coefficients <f, pi(lambda) w> in lattice order, for w the window or (with use_dual) the dual window.
inline std::vector<cplx> gabor_coefficients(const Signal& f, const GaborSystem& sys, bool use_dual = false) {
  require_same_grid(f.grid, sys.grid);
  const Signal& w = use_dual ? sys.dual : sys.window;
  const auto& lat = sys.lattice;
  const int n = sys.grid.n;
  const int step = grid_steps(lat.delta, sys.grid.dx(), "lattice time step");
  std::vector<cplx> out(lat.size());
  parallel_for(static_cast<std::size_t>(lat.times), [&](std::size_t a) {
    Signal h(f.grid);
    const int s = static_cast<int>(a) * step;
    for (int t = 0; t < n; ++t) h.values[t] = f.values[t] * std::conj(w.values[mod_floor(t - s, n)]);
    const Spectrum H = spectrum(h);
    for (int b = 0; b < lat.freqs; ++b) {
      const int j = grid_steps((lat.freq_lo + b) * lat.delta, sys.grid.dxi(), "lattice frequency");
      out[a * lat.freqs + b] = H.coeffs[mod_floor(j + n / 2, n)];
    }
  });
  return out;
}

/// sum_lambda c_lambda pi(lambda) w.
inline Signal gabor_synthesis(std::span<const cplx> coeffs, const GaborSystem& sys, bool use_dual = false) {
  const Signal& w = use_dual ? sys.dual : sys.window;
  Signal out(sys.grid);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == cplx{}) continue;
    const Signal s = tf_shift(w, sys.lattice.point(i));
    for (int m = 0; m < sys.grid.n; ++m) out.values[m] += coeffs[i] * s.values[m];
  }
  return out;
}

/// f = sum_lambda <f, pi(lambda) gamma> pi(lambda) g.
inline Signal gabor_reconstruct(const Signal& f, const GaborSystem& sys) {
  return gabor_synthesis(gabor_coefficients(f, sys, true), sys, false);
}

/// Cell-normalized lattice norm: (delta^2)^{1/p} ||{<f, pi(lambda) g>}||_{l^p}.
inline double gabor_norm(const Signal& f, const GaborSystem& sys, double p, bool use_dual = false) {
  require_exponent(p);
  const auto c = gabor_coefficients(f, sys, use_dual);
  const double cell = sys.lattice.delta * sys.lattice.delta;
  LpAccumulator acc(p);
  for (const auto& v : c) acc.add(std::abs(v));
  return acc.value(p == kInf ? 1.0 : cell);
}

/// Band-limited random signal with complex Gaussian coefficients on |xi| < fraction * nyquist.
template <class Rng>
Signal random_bandlimited_signal(const Grid& g, double fraction, Rng& rng) {
  std::vector<char> mask(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = frequency_at(g, i);
    mask[i] = std::hypot(xi[0], xi[1]) < fraction * g.nyquist();
  }
  return random_masked_signal(g, mask, rng);
}

/**
 * @brief Values V[lambda][mu] = V_{g (x) g-bar} K at (mu_1, lambda_1, mu_2, -lambda_2) over the lattice.
 *
 * Computed from the 2-d STFT of K: one 2-d transform per pair of lattice times.
 */
inline std::vector<cplx> kernel_stft_pattern(const Kernel2D& K, const GaborSystem& sys) {
  require_same_grid(K.grid, sys.grid);
  const auto& lat = sys.lattice;
  const int n = sys.grid.n;
  const int step = grid_steps(lat.delta, sys.grid.dx(), "lattice time step");
  const std::size_t L = lat.size();
  std::vector<cplx> V(L * L);
  const auto& g = sys.window.values;
  std::vector<int> freq_pos(lat.freqs), neg_pos(lat.freqs);
  for (int b = 0; b < lat.freqs; ++b) {
    const int j = grid_steps((lat.freq_lo + b) * lat.delta, sys.grid.dxi(), "lattice frequency");
    freq_pos[b] = mod_floor(j + n / 2, n);
    neg_pos[b] = mod_floor(-j + n / 2, n);
  }
  const std::size_t pairs = static_cast<std::size_t>(lat.times) * lat.times;
  parallel_for(pairs, [&](std::size_t pr) {
    const int a_in = static_cast<int>(pr / lat.times), a_out = static_cast<int>(pr % lat.times);
    Kernel2D W(sys.grid);
    for (int x = 0; x < n; ++x) {
      const cplx gx = std::conj(g[mod_floor(x - a_out * step, n)]);
      for (int y = 0; y < n; ++y) W(x, y) = K(x, y) * gx * g[mod_floor(y - a_in * step, n)];
    }
    const auto F = kernel_spectrum(W);
    for (int b_in = 0; b_in < lat.freqs; ++b_in) {
      const std::size_t lam = static_cast<std::size_t>(a_in) * lat.freqs + b_in;
      for (int b_out = 0; b_out < lat.freqs; ++b_out) {
        const std::size_t mu = static_cast<std::size_t>(a_out) * lat.freqs + b_out;
        V[lam * L + mu] = F[static_cast<std::size_t>(freq_pos[b_out]) * n + neg_pos[b_in]];
      }
    }
  });
  return V;
}

/// The same pattern by the operator route V_g(A pi(lambda) g)(mu).
inline std::vector<cplx> operator_stft_pattern(const Kernel2D& K, const GaborSystem& sys) {
  const std::size_t L = sys.lattice.size();
  std::vector<cplx> V(L * L);
  parallel_for(L, [&](std::size_t lam) {
    const auto c = gabor_coefficients(apply_kernel(K, tf_shift(sys.window, sys.lattice.point(lam))), sys);
    std::copy(c.begin(), c.end(), V.begin() + static_cast<std::ptrdiff_t>(lam * L));
  });
  return V;
}

struct GaborKernelReport {
  double p = 1.0, q = 1.0, delta = 0.5;
  double n1 = 0.0;  ///< empirical M^p -> M^q norm over Gabor atoms and random signals
  double n2 = 0.0;  ///< sup_lambda of the cell-normalized l^q_mu norm of the kernel STFT pattern
  double ratio = 1.0;
  double route_deviation = 0.0;  ///< max |kernel route - operator route| relative to the pattern max
  double band = 10.0;
  bool pass = false;
};

inline GaborKernelReport gabor_kernel_bound(const Kernel2D& K, const GaborSystem& sys, double p, double q,
                                            int trials = 16, std::uint64_t seed = 7, double band = 10.0) {
  require_bounded_exponents(p, q);
  GaborKernelReport R;
  R.p = p;
  R.q = q;
  R.delta = sys.lattice.delta;
  R.band = band;
  const std::size_t L = sys.lattice.size();
  const auto V = kernel_stft_pattern(K, sys);
  const auto W = operator_stft_pattern(K, sys);
  double vmax = 0.0, dev = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    vmax = std::max(vmax, std::abs(V[i]));
    dev = std::max(dev, std::abs(V[i] - W[i]));
  }
  R.route_deviation = vmax > 0.0 ? dev / vmax : dev;
  const double cell = sys.lattice.delta * sys.lattice.delta;
  for (std::size_t lam = 0; lam < L; ++lam) {
    LpAccumulator acc(q);
    for (std::size_t mu = 0; mu < L; ++mu) acc.add(std::abs(V[lam * L + mu]));
    R.n2 = std::max(R.n2, acc.value(q == kInf ? 1.0 : cell));
  }
  std::vector<Signal> witnesses;
  for (std::size_t lam = 0; lam < L; ++lam) witnesses.push_back(tf_shift(sys.window, sys.lattice.point(lam)));
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) witnesses.push_back(random_bandlimited_signal(sys.grid, 0.75, rng));
  const auto vals = parallel_map<double>(witnesses.size(), [&](std::size_t i) {
    const double den = gabor_norm(witnesses[i], sys, p);
    return den > 0.0 ? gabor_norm(apply_kernel(K, witnesses[i]), sys, q) / den : 0.0;
  });
  R.n1 = *std::max_element(vals.begin(), vals.end());
  R.ratio = safe_ratio(R.n1, R.n2);
  R.pass = within_band(R.ratio, band);
  return R;
}

struct GaborCompactnessReport {
  double p = 1.0, q = 1.0, delta = 0.5;
  CompactnessOptions options;
  TailProfile profile;
  std::size_t decisive_level = 0;
  double decisive_ratio = 0.0;
  CompactVerdict verdict = CompactVerdict::indeterminate;
};

/// Tails of the kernel STFT pattern over mu outside [-N, N]^2, sup over lambda.
inline GaborCompactnessReport gabor_compactness(const Kernel2D& K, const GaborSystem& sys, double p, double q,
                                                const CompactnessOptions& opt = {}) {
  require_bounded_exponents(p, q);
  if (q == kInf) throw std::invalid_argument("compactness statements require q < inf");
  GaborCompactnessReport R;
  R.p = p;
  R.q = q;
  R.delta = sys.lattice.delta;
  R.options = opt;
  const std::size_t L = sys.lattice.size();
  const auto V = kernel_stft_pattern(K, sys);
  const double cell_root = std::pow(sys.lattice.delta * sys.lattice.delta, 1.0 / q);
  auto lv = normalize_levels(opt.levels);
  std::vector<std::vector<double>> tails(L);
  std::vector<int> extents(L);
  for (std::size_t lam = 0; lam < L; ++lam) {
    IndexedCoefficients c;
    c.dim = 2;
    for (std::size_t mu = 0; mu < L; ++mu) {
      const auto idx = sys.lattice.signed_index(mu);
      c.push(idx, cell_root * V[lam * L + mu]);
    }
    tails[lam] = member_tails(c, q, lv);
    extents[lam] = member_extent(c);
  }
  R.profile = sup_profile(std::move(lv), tails, extents);
  R.verdict = classify_tail(R.profile, opt.decay_threshold, opt.plateau_threshold, R.decisive_level, R.decisive_ratio);
  return R;
}

}  // namespace amk
