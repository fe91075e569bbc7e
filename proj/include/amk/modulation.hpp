#pragma once

#include "amk/parallel.hpp"
#include "amk/partition.hpp"

namespace amk {

/// Exponents and weight of the norm M^{p,q}_{s,alpha}.
struct ModNormParams {
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;
  double alpha = 0.0;
};

/// Band projection of a precomputed spectrum: inverse transform of eta_k * F.
inline Signal band_project(const Spectrum& F, const AlphaPartition& P, std::size_t pos) {
  return inverse_spectrum(P.eta.at(pos).apply(F));
}

inline Signal band_project(const Signal& f, const AlphaPartition& P, std::span<const int> k) {
  require_same_grid(f.grid, P.grid);
  return band_project(spectrum(f), P, P.require(k));
}

inline Signal band_project(const Signal& f, const AlphaPartition& P, int k) {
  return band_project(f, P, std::span<const int>(&k, 1));
}

/// ||box_k f||_{L^p} for every active band, in partition order.
inline std::vector<double> band_lp_norms(const Spectrum& F, const AlphaPartition& P, double p) {
  require_exponent(p);
  std::vector<double> out(P.size(), 0.0);
  for (std::size_t pos = 0; pos < P.size(); ++pos) {
    const auto& m = P.eta[pos];
    bool any = false;
    for (auto i : m.index)
      if (F.coeffs[i] != cplx{}) {
        any = true;
        break;
      }
    if (any) out[pos] = lp_norm(band_project(F, P, pos), p);
  }
  return out;
}

/// Weighted l^q combination of per-band L^p norms with weight <k>^{s/(1-alpha)}.
inline double combine_band_norms(std::span<const double> per_band, const AlphaPartition& P, double q, double s) {
  LpAccumulator acc(q);
  const double w = s / (1.0 - P.alpha);
  for (std::size_t pos = 0; pos < per_band.size(); ++pos) {
    const double weight = w == 0.0 ? 1.0 : std::pow(P.bands[pos].bracket, w);
    acc.add(weight * per_band[pos]);
  }
  return acc.value();
}

inline void require_matching_alpha(const ModNormParams& params, const AlphaPartition& P) {
  if (std::abs(params.alpha - P.alpha) > 1e-15) throw std::invalid_argument("norm alpha differs from partition alpha");
}

inline double alpha_mod_norm(const Spectrum& F, const AlphaPartition& P, const ModNormParams& params) {
  require_matching_alpha(params, P);
  require_exponent(params.q, "q");
  const auto per_band = band_lp_norms(F, P, params.p);
  return combine_band_norms(per_band, P, params.q, params.s);
}

/// The alpha-modulation norm (sum_k <k>^{sq/(1-alpha)} ||box_k f||_p^q)^{1/q}, sup when q = inf.
inline double alpha_mod_norm(const Signal& f, const AlphaPartition& P, const ModNormParams& params) {
  require_same_grid(f.grid, P.grid);
  return alpha_mod_norm(spectrum(f), P, params);
}

/// Shorthand M^p_alpha = M^{p,p}_{0,alpha}.
inline double mod_norm(const Signal& f, const AlphaPartition& P, double p) {
  return alpha_mod_norm(f, P, {p, p, 0.0, P.alpha});
}

inline void require_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in (0, 1]");
}

/**
 * @brief Sampling lattice of one atom band.
 *
 * The requested spacing lambda / (2 r C <k>^e) is snapped down to L/M with M = ceil(L / spacing),
 * so the periodic lattice closes on the torus.
 */
struct BandLattice {
  double requested = 0.0;
  double spacing = 0.0;
  int M = 1;
};

inline BandLattice band_lattice(const Grid& g, const BandGeometry& b, double r, double lambda) {
  BandLattice lat;
  lat.requested = lambda / (2.0 * r * b.radius);
  lat.M = lattice_size(g.extent, lat.requested);
  lat.spacing = g.extent / lat.M;
  return lat;
}

/// Coefficients c_{k,k'} = beta_k^d (box_k f)(beta_k k') of one retained band.
struct BandCoefficients {
  std::size_t atom = 0;
  BandIndex k;
  BandLattice lattice;
  std::vector<cplx> coeffs;
};

struct AtomCoefficients {
  Grid grid;
  double lambda = 1.0;
  std::vector<BandCoefficients> bands;
};

inline AtomCoefficients atom_expand(const Signal& f, const AlphaPartition& P, const AtomFamily& A, double lambda) {
  require_lambda(lambda);
  require_same_grid(f.grid, P.grid);
  const Spectrum F = spectrum(f);
  AtomCoefficients out;
  out.grid = f.grid;
  out.lambda = lambda;
  out.bands.resize(A.size());
  parallel_for(A.size(), [&](std::size_t a) {
    const auto& b = P.bands[A.band[a]];
    auto& bc = out.bands[a];
    bc.atom = a;
    bc.k = b.k;
    bc.lattice = band_lattice(f.grid, b, A.r, lambda);
    bc.coeffs = sample_lattice(P.eta[A.band[a]].apply(F), bc.lattice.M);
    const double w = std::pow(bc.lattice.spacing, f.grid.dim);
    for (auto& c : bc.coeffs) c *= w;
  });
  return out;
}

/// Sum over (k, k') of c_{k,k'} T_{beta_k k'} phi_k-check, evaluated on the grid.
inline Signal atom_reconstruct(const AtomCoefficients& coeffs, const AtomFamily& A) {
  const Grid& g = coeffs.grid;
  Spectrum total(g);
  for (const auto& bc : coeffs.bands) {
    const auto window = A.phi.at(bc.atom).dense(g.size());
    const Spectrum part = synthesize_lattice(g, bc.coeffs, bc.lattice.M, window);
    for (std::size_t i = 0; i < total.coeffs.size(); ++i) total.coeffs[i] += part.coeffs[i];
  }
  return inverse_spectrum(total);
}

/**
 * @brief The atom T_{l L/M} phi_k-check of retained atom `a`, for a lattice multi-index l.
 */
inline Signal atom_signal(const AtomFamily& A, std::size_t a, std::span<const int> l, int M) {
  const Grid& g = A.grid;
  Spectrum S(g);
  const double step = g.extent / M;
  const auto& m = A.phi.at(a);
  for (std::size_t i = 0; i < m.index.size(); ++i) {
    const auto xi = frequency_at(g, m.index[i]);
    double phase = l[0] * step * xi[0];
    if (l.size() > 1) phase += l[1] * step * xi[1];
    S.coeffs[m.index[i]] = m.value[i] * std::polar(1.0, -2.0 * kPi * phase);
  }
  return inverse_spectrum(S);
}

/// l^p norm over (k, k') of beta_k^{d/p} (box_k f)(beta_k k').
inline double sampled_norm(const Signal& f, const AlphaPartition& P, const AtomFamily& A, double p, double lambda) {
  require_exponent(p);
  const auto coeffs = atom_expand(f, P, A, lambda);
  LpAccumulator acc(p);
  for (const auto& bc : coeffs.bands) {
    const double beta_d = std::pow(bc.lattice.spacing, f.grid.dim);
    // c = beta^d * sample, so beta^{d/p} * |sample| = beta^{d/p - d} * |c|
    const double w = p == kInf ? 1.0 / beta_d : std::pow(beta_d, 1.0 / p - 1.0);
    for (const auto& c : bc.coeffs) acc.add(w * std::abs(c));
  }
  return acc.value();
}

}  // namespace amk
