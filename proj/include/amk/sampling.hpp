#pragma once

#include "amk/modulation.hpp"

namespace amk {

/**
 * @brief Smooth frequency window psi: 1 on B(0, plateau), supported in B(0, 1/2).
 */
struct WindowPsi {
  double plateau = 0.25;
  double support = 0.5;

  [[nodiscard]] double operator()(double radius) const { return RadialBump{plateau, support}(radius); }
};

/// Window for the standard expansion: plateau r_std / 2 with r_std in (0, 1).
inline WindowPsi standard_window(double r_std) {
  if (!(r_std > 0.0 && r_std < 1.0)) throw std::invalid_argument("r_std must lie in (0, 1)");
  return {r_std / 2.0, 0.5};
}

/// Window for the shifted expansion: plateau 1 / (2 r_shift) with r_shift > 1.
inline WindowPsi shifted_window(double r_shift) {
  if (!(r_shift > 1.0)) throw std::invalid_argument("r_shift must exceed 1");
  return {1.0 / (2.0 * r_shift), 0.5};
}

/// Ball B(xi0, R) in frequency space together with the shifted expansion's r.
struct BallSpec {
  std::vector<double> xi0;
  double R = 1.0;
  double r = 1.5;
};

/// Spectrum found outside the ball an expansion requires.
struct support_violation : std::domain_error {
  double leakage;
  explicit support_violation(double l)
      : std::domain_error("spectrum leaks outside the admissible ball (relative leakage " + std::to_string(l) + ")"),
        leakage(l) {}
};

/// Largest |F| outside B(center, radius) relative to the largest |F| overall.
inline double spectral_leakage(const Spectrum& F, std::span<const double> center, double radius) {
  double inside = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const auto xi = frequency_at(F.grid, i);
    double d2 = 0.0;
    for (std::size_t a = 0; a < center.size(); ++a) d2 += (xi[a] - center[a]) * (xi[a] - center[a]);
    const double m = std::abs(F.coeffs[i]);
    if (std::sqrt(d2) < radius) inside = std::max(inside, m);
    else outside = std::max(outside, m);
  }
  const double scale = std::max(inside, outside);
  return scale > 0.0 ? outside / scale : 0.0;
}

/// Grid samples of psi(|xi - center| / dilation).
inline std::vector<double> dilated_window(const Grid& g, std::span<const double> center, double dilation,
                                          const WindowPsi& psi) {
  std::vector<double> window(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = frequency_at(g, i);
    double d2 = 0.0;
    for (std::size_t a = 0; a < center.size(); ++a) d2 += (xi[a] - center[a]) * (xi[a] - center[a]);
    window[i] = psi(std::sqrt(d2) / dilation);
  }
  return window;
}

/// Lattice samples of f and the synthesized reconstruction spacing^d sum_k f(k h) T_{k h} window-check.
struct LatticeExpansion {
  double requested_spacing = 0.0;
  double spacing = 0.0;
  int M = 1;
  std::vector<cplx> samples;
  Signal reconstruction;
};

/**
 * @brief Expansion of f against the window psi((xi - center) / dilation) on the lattice of the given spacing.
 *
 * f must have its spectrum inside B(center, dilation * psi.plateau), where the dilated window is 1.
 */
inline LatticeExpansion lattice_expand(const Signal& f, std::span<const double> center, double dilation,
                                       const WindowPsi& psi, double spacing, double leakage_tol = 1e-12) {
  const Grid& g = f.grid;
  if (static_cast<int>(center.size()) != g.dim) throw std::invalid_argument("ball center dimension mismatch");
  for (double c : center)
    if (std::abs(c) + dilation * psi.support > g.nyquist())
      throw std::invalid_argument("window support exceeds the Nyquist window");
  const Spectrum F = spectrum(f);
  const double leak = spectral_leakage(F, center, dilation * psi.plateau);
  if (leak > leakage_tol) throw support_violation(leak);
  LatticeExpansion out;
  out.requested_spacing = spacing;
  out.M = lattice_size(g.extent, spacing);
  out.spacing = g.extent / out.M;
  out.samples = sample_lattice(F, out.M);
  const auto window = dilated_window(g, center, dilation, psi);
  std::vector<cplx> weighted(out.samples);
  const double w = std::pow(out.spacing, g.dim);
  for (auto& c : weighted) c *= w;
  out.reconstruction = inverse_spectrum(synthesize_lattice(g, weighted, out.M, window));
  return out;
}

/// f(x) = lambda^d sum_k f(lambda k) T_{lambda k} psi-check for spectra inside B(0, r_std / 2).
inline LatticeExpansion standard_expand(const Signal& f, const WindowPsi& psi, double lambda) {
  require_lambda(lambda);
  const std::vector<double> origin(f.grid.dim, 0.0);
  return lattice_expand(f, origin, 1.0, psi, lambda);
}

/// Lattice lambda / (2 r R) and window psi((xi - xi0) / (2 r R)) for spectra inside B(xi0, R).
inline LatticeExpansion shifted_expand(const Signal& f, const BallSpec& ball, const WindowPsi& psi, double lambda) {
  require_lambda(lambda);
  if (!(ball.r > 1.0)) throw std::invalid_argument("r_shift must exceed 1");
  if (!(ball.R > 0.0)) throw std::invalid_argument("ball radius must be positive");
  const double dilation = 2.0 * ball.r * ball.R;
  return lattice_expand(f, ball.xi0, dilation, psi, lambda / dilation);
}

/// ||f||_{L^p} / (h^{d/p} ||{f(h k)}||_{l^p}) on the lattice of spacing h (snapped to close on the torus).
inline double lp_sampling_ratio(const Signal& f, double p, double spacing) {
  require_exponent(p);
  const int M = lattice_size(f.grid.extent, spacing);
  const double h = f.grid.extent / M;
  const auto samples = sample_lattice(spectrum(f), M);
  const double seq = lp_seq_norm(samples, p);
  if (seq == 0.0) throw std::domain_error("sampling ratio undefined for the zero signal");
  const double scale = p == kInf ? 1.0 : std::pow(h, f.grid.dim / p);
  return lp_norm(f, p) / (scale * seq);
}

/// ||f||_{L^q} / (R^{d(1/p - 1/q)} ||f||_{L^p}) for f with spectrum inside B(xi0, R).
inline double bernstein_ratio(const Signal& f, double p, double q, const BallSpec& ball, double leakage_tol = 1e-12) {
  require_exponent(p);
  require_exponent(q, "q");
  if (p > q) throw std::invalid_argument("bernstein ratio requires p <= q");
  const double leak = spectral_leakage(spectrum(f), ball.xi0, ball.R);
  if (leak > leakage_tol) throw support_violation(leak);
  const double inv_q = q == kInf ? 0.0 : 1.0 / q;
  const double exponent = f.grid.dim * (1.0 / p - inv_q);
  const double lp = lp_norm(f, p);
  if (lp == 0.0) throw std::domain_error("bernstein ratio undefined for the zero signal");
  return lp_norm(f, q) / (std::pow(ball.R, exponent) * lp);
}

/// Synthesis restricted to the lattice indices flagged in `keep` (the truncated sum over a subset).
inline Signal truncated_synthesis(const Grid& g, const LatticeExpansion& e, std::span<const double> center,
                                  double dilation, const WindowPsi& psi, std::span<const char> keep) {
  std::vector<cplx> weighted(e.samples.size());
  const double w = std::pow(e.spacing, g.dim);
  for (std::size_t i = 0; i < weighted.size(); ++i) weighted[i] = keep[i] ? w * e.samples[i] : cplx{};
  const auto window = dilated_window(g, center, dilation, psi);
  return inverse_spectrum(synthesize_lattice(g, weighted, e.M, window));
}

}  // namespace amk
