#pragma once

#include <random>

#include "amk/modulation.hpp"
#include "amk/total_boundedness.hpp"

namespace amk {

/**
 * @brief Samples K(x_i, y_j) of an operator kernel on the product of a 1-d grid with itself.
 *
 * Row-major with the output variable x outer. The operator is (Af)(x_i) = dx sum_j K_ij f_j.
 */
struct Kernel2D {
  Grid grid;
  std::vector<cplx> values;

  Kernel2D() = default;
  explicit Kernel2D(const Grid& g) : grid(g), values(static_cast<std::size_t>(g.n) * g.n) {
    if (g.dim != 1) throw std::invalid_argument("kernels live on the product of 1-d grids");
  }
  Kernel2D(const Grid& g, std::vector<cplx> v) : Kernel2D(g) {
    if (v.size() != values.size()) throw std::invalid_argument("kernel size does not match grid");
    values = std::move(v);
  }

  [[nodiscard]] int n() const { return grid.n; }
  cplx& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * grid.n + j]; }
  [[nodiscard]] const cplx& operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.n + j]; }

  Kernel2D& operator*=(cplx c) {
    for (auto& v : values) v *= c;
    return *this;
  }
  friend Kernel2D operator*(cplx c, Kernel2D K) { return K *= c; }
};

inline Signal apply_kernel(const Kernel2D& K, const Signal& f) {
  require_same_grid(K.grid, f.grid);
  const int n = K.n();
  Signal out(f.grid);
  const double dx = K.grid.dx();
  for (int i = 0; i < n; ++i) {
    cplx acc = 0.0;
    const cplx* row = &K.values[static_cast<std::size_t>(i) * n];
    for (int j = 0; j < n; ++j) acc += row[j] * f.values[j];
    out.values[i] = dx * acc;
  }
  return out;
}

/// The kernel of the adjoint, conj(K(y, x)).
inline Kernel2D flip_conjugate(const Kernel2D& K) {
  Kernel2D out(K.grid);
  for (int i = 0; i < K.n(); ++i)
    for (int j = 0; j < K.n(); ++j) out(i, j) = std::conj(K(j, i));
  return out;
}

/// 2-d quadrature transform of K, signed order in both frequency axes (xi outer).
inline std::vector<cplx> kernel_spectrum(const Kernel2D& K) {
  std::vector<cplx> F(K.values);
  const std::array<int, 2> dims{K.n(), K.n()};
  fft::transform(F, dims, fft::Direction::forward);
  fft::swap_halves(F, K.n(), 2);
  const double w = K.grid.dx() * K.grid.dx();
  for (auto& c : F) c *= w;
  return F;
}

inline Kernel2D inverse_kernel_spectrum(const Grid& g, std::vector<cplx> F) {
  fft::swap_halves(F, g.n, 2);
  const std::array<int, 2> dims{g.n, g.n};
  fft::transform(F, dims, fft::Direction::backward);
  const double w = g.dxi() * g.dxi();
  for (auto& c : F) c *= w;
  return Kernel2D(g, std::move(F));
}

/// Tensor block box_{a,b} K: the kernel spectrum multiplied by eta_a(xi) eta_b(zeta).
inline Kernel2D mixed_block(const Kernel2D& K, const AlphaPartition& P, int a, int b) {
  require_same_grid(K.grid, P.grid);
  const auto pa = P.require(std::span<const int>(&a, 1));
  const auto pb = P.require(std::span<const int>(&b, 1));
  auto F = kernel_spectrum(K);
  const auto ea = P.eta[pa].dense(K.n());
  const auto eb = P.eta[pb].dense(K.n());
  for (int i = 0; i < K.n(); ++i)
    for (int j = 0; j < K.n(); ++j) F[static_cast<std::size_t>(i) * K.n() + j] *= ea[i] * eb[j];
  return inverse_kernel_spectrum(K.grid, std::move(F));
}

enum class Variant { c1, c2 };

inline std::string to_string(Variant v) { return v == Variant::c1 ? "c1" : "c2"; }
inline Variant parse_variant(const std::string& s) {
  if (s == "c1") return Variant::c1;
  if (s == "c2") return Variant::c2;
  throw std::invalid_argument("variant must be c1 or c2");
}

/**
 * @brief Exponents of a mixed kernel norm.
 *
 * c1 reduces L^{p1}_x, l^{p2}_a, L^{q1}_y, l^{q2}_b in that order;
 * c2 reduces L^{p1}_y, l^{p2}_b, L^{q1}_x, l^{q2}_a. Block a pairs with x and b with y.
 */
struct MixedNormParams {
  double p1 = 1.0, p2 = 1.0, q1 = kInf, q2 = kInf;
  double s = 0.0, t = 0.0;
  double alpha = 0.0;
  Variant variant = Variant::c1;
};

/**
 * @brief Shared machinery for the blocks box_{a,b} K of one kernel.
 *
 * Holds H_b = inverse transform in zeta of (K-hat * eta_b) for every band, with xi rows in
 * standard FFT order, so each block costs one batch of column transforms.
 */
class BlockEngine {
 public:
  BlockEngine(const Kernel2D& K, const AlphaPartition& P) : grid_(K.grid), P_(&P) {
    require_same_grid(K.grid, P.grid);
    const int n = grid_.n;
    const auto F = kernel_spectrum(K);
    eta_.resize(P.size());
    for (std::size_t b = 0; b < P.size(); ++b) eta_[b] = P.eta[b].dense(n);
    H_.resize(P.size());
    nonzero_row_.resize(P.size());
    parallel_for(P.size(), [&](std::size_t b) {
      std::vector<cplx> H(static_cast<std::size_t>(n) * n);
      std::vector<char> nz(n, 0);
      for (int pxi = 0; pxi < n; ++pxi) {
        const int row = mod_floor(pxi - n / 2, n);
        cplx* dst = &H[static_cast<std::size_t>(row) * n];
        bool any = false;
        for (int pz = 0; pz < n; ++pz) {
          const cplx v = F[static_cast<std::size_t>(pxi) * n + pz] * eta_[b][pz];
          dst[mod_floor(pz - n / 2, n)] = v;
          any = any || v != cplx{};
        }
        nz[pxi] = any;
      }
      fft::transform_many(H, n, n, 1, n, fft::Direction::backward);
      const double w = grid_.dxi();
      for (auto& v : H) v *= w;
      H_[b] = std::move(H);
      nonzero_row_[b] = std::move(nz);
    });
  }

  [[nodiscard]] std::size_t bands() const { return P_->size(); }
  [[nodiscard]] const Grid& grid() const { return grid_; }

  /// False when the block is identically zero (no overlap of the kernel spectrum with eta_a x eta_b).
  [[nodiscard]] bool block_nonzero(std::size_t a, std::size_t b) const {
    for (auto i : P_->eta[a].index)
      if (nonzero_row_[b][i]) return true;
    return false;
  }

  /// Block samples G[x * n + y]; `out` is resized as needed.
  void block(std::size_t a, std::size_t b, std::vector<cplx>& out) const {
    const int n = grid_.n;
    out.assign(static_cast<std::size_t>(n) * n, cplx{});
    const auto& m = P_->eta[a];
    for (std::size_t t = 0; t < m.index.size(); ++t) {
      const int pxi = static_cast<int>(m.index[t]);
      const int row = mod_floor(pxi - n / 2, n);
      const cplx* src = &H_[b][static_cast<std::size_t>(row) * n];
      cplx* dst = &out[static_cast<std::size_t>(row) * n];
      for (int y = 0; y < n; ++y) dst[y] = m.value[t] * src[y];
    }
    fft::transform_many(out, n, n, n, 1, fft::Direction::backward);
    const double w = grid_.dxi();
    for (auto& v : out) v *= w;
  }

 private:
  Grid grid_;
  const AlphaPartition* P_;
  std::vector<std::vector<double>> eta_;
  std::vector<std::vector<cplx>> H_;
  std::vector<std::vector<char>> nonzero_row_;
};

inline double mixed_norm(const BlockEngine& E, const AlphaPartition& P, const MixedNormParams& params) {
  for (double e : {params.p1, params.p2, params.q1, params.q2}) require_exponent(e);
  if (std::abs(params.alpha - P.alpha) > 1e-15) throw std::invalid_argument("norm alpha differs from partition alpha");
  const int n = E.grid().n;
  const double dx = E.grid().dx();
  const std::size_t B = E.bands();
  const double ws = params.s / (1.0 - P.alpha), wt = params.t / (1.0 - P.alpha);
  auto weight = [&](std::size_t a, std::size_t b) {
    double w = 1.0;
    if (ws != 0.0) w *= std::pow(P.bands[a].bracket, ws);
    if (wt != 0.0) w *= std::pow(P.bands[b].bracket, wt);
    return w;
  };
  const bool c1 = params.variant == Variant::c1;
  // outer index: b for c1, a for c2; the innermost variable pairs with the inner index
  const auto outer = parallel_map<double>(B, [&](std::size_t o) {
    std::vector<cplx> G;
    std::vector<LpAccumulator> acc(n, LpAccumulator(params.p2));
    for (std::size_t in = 0; in < B; ++in) {
      const std::size_t a = c1 ? in : o, b = c1 ? o : in;
      if (!E.block_nonzero(a, b)) continue;
      E.block(a, b, G);
      const double w = weight(a, b);
      for (int v = 0; v < n; ++v) {
        LpAccumulator inner(params.p1);
        // c1 integrates x for each fixed y; c2 integrates y for each fixed x
        for (int u = 0; u < n; ++u) {
          const std::size_t idx = c1 ? static_cast<std::size_t>(u) * n + v : static_cast<std::size_t>(v) * n + u;
          inner.add(std::abs(G[idx]));
        }
        acc[v].add(w * inner.value(dx));
      }
    }
    LpAccumulator mid(params.q1);
    for (int v = 0; v < n; ++v) mid.add(acc[v].value());
    return mid.value(dx);
  });
  LpAccumulator top(params.q2);
  for (double v : outer) top.add(v);
  return top.value();
}

inline double mixed_norm(const Kernel2D& K, const AlphaPartition& P, const MixedNormParams& params) {
  BlockEngine E(K, P);
  return mixed_norm(E, P, params);
}

/// Lattice translate T_{l beta_k} phi_k-check of a retained atom, with its band weight bracket.
struct AtomInstance {
  std::size_t atom = 0;
  int shift = 0;
  int M = 1;
  double bracket = 1.0;
  Signal f;
};

/// Every atom of the family on its beta_k lattice (d = 1).
inline std::vector<AtomInstance> atom_instances(const AlphaPartition& P, const AtomFamily& A, double lambda) {
  require_lambda(lambda);
  if (P.grid.dim != 1) throw std::invalid_argument("atom instances are enumerated for d = 1");
  std::vector<std::pair<std::size_t, int>> plan;
  std::vector<int> sizes(A.size());
  for (std::size_t a = 0; a < A.size(); ++a) {
    sizes[a] = band_lattice(P.grid, P.bands[A.band[a]], A.r, lambda).M;
    for (int l = 0; l < sizes[a]; ++l) plan.emplace_back(a, l);
  }
  return parallel_map<AtomInstance>(plan.size(), [&](std::size_t i) {
    const auto [a, l] = plan[i];
    return AtomInstance{a, l, sizes[a], P.bands[A.band[a]].bracket, atom_signal(A, a, std::span<const int>(&l, 1), sizes[a])};
  });
}

/// Band weight <k>^{(alpha d/(1-alpha))(1/p - 1)} of the boundedness statements (d = 1).
inline double atom_weight(double bracket, double alpha, double p) {
  const double e = alpha / (1.0 - alpha) * (1.0 / p - 1.0);
  return e == 0.0 ? 1.0 : std::pow(bracket, e);
}

inline void require_bounded_exponents(double p, double q) {
  require_exponent(p);
  require_exponent(q, "q");
  if (p > std::min(q, 1.0)) throw std::invalid_argument("boundedness statements require p <= min(q, 1)");
}

/// Value and location of a supremum over atoms.
struct AtomSup {
  double value = 0.0;
  BandIndex k;
  int shift = 0;
};

inline AtomSup atom_image_bound(const Kernel2D& K, const AlphaPartition& P, const std::vector<AtomInstance>& atoms,
                                const AtomFamily& A, double p, double q) {
  require_bounded_exponents(p, q);
  const auto vals = parallel_map<double>(atoms.size(), [&](std::size_t i) {
    const auto& at = atoms[i];
    return atom_weight(at.bracket, P.alpha, p) * mod_norm(apply_kernel(K, at.f), P, q);
  });
  AtomSup out;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i] > out.value) out = {vals[i], P.bands[A.band[atoms[i].atom]].k, atoms[i].shift};
  return out;
}

/// sup over atoms of <k>^{(alpha/(1-alpha))(1/p-1)} ||A(T_{beta_k k'} phi_k-check)||_{M^q_alpha}.
inline AtomSup atom_image_bound(const Kernel2D& K, const AlphaPartition& P, const AtomFamily& A, double p, double q,
                                double lambda) {
  return atom_image_bound(K, P, atom_instances(P, A, lambda), A, p, q);
}

/// Signal with complex Gaussian spectral coefficients on the flagged frequencies.
template <class Rng>
Signal random_masked_signal(const Grid& g, std::span<const char> mask, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Spectrum F(g);
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const double re = normal(rng), im = normal(rng);
    if (mask[i]) F.coeffs[i] = {re, im};
  }
  return inverse_spectrum(F);
}

/**
 * @brief Test inputs for lower-bound operator norm searches.
 *
 * Atoms on the lattice, random retained-band signals, translates of every eta_k-check
 * on a coarse lattice, and Gaussian wave packets.
 */
inline std::vector<Signal> witness_signals(const AlphaPartition& P, const AtomFamily& A, double lambda, int trials,
                                           std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  const Grid& g = P.grid;
  std::vector<Signal> out;
  for (auto& at : atom_instances(P, A, lambda)) out.push_back(std::move(at.f));
  std::mt19937_64 rng(seed);
  const auto mask = retained_region(P, A);
  for (int t = 0; t < trials; ++t) out.push_back(random_masked_signal(g, mask, rng));
  const int shifts = 8;
  for (std::size_t pos = 0; pos < P.size(); ++pos) {
    const Signal base = inverse_spectrum(Spectrum(g, [&] {
      std::vector<cplx> c(g.size());
      const auto& m = P.eta[pos];
      for (std::size_t i = 0; i < m.index.size(); ++i) c[m.index[i]] = m.value[i];
      return c;
    }()));
    for (int s = 0; s < shifts; ++s) out.push_back(translate(base, g.extent * s / shifts));
  }
  const double h = g.nyquist();
  for (double width : {0.25, 0.5, 1.0, 2.0}) {
    for (double x0 : {0.0, 0.3 * g.extent}) {
      for (double f0 = -0.75 * h; f0 <= 0.75 * h + 1e-12; f0 += 0.25 * h) {
        Signal w(g);
        for (int m = 0; m < g.n; ++m) {
          const double x = g.centered_coord(m) - x0;
          const double xw = x - g.extent * std::round(x / g.extent);
          w.values[m] = std::exp(-kPi * xw * xw / (width * width)) * std::polar(1.0, 2.0 * kPi * f0 * g.centered_coord(m));
        }
        out.push_back(std::move(w));
      }
    }
  }
  return out;
}

/// sup over witnesses of ||A f||_{M^q_alpha} / ||f||_{M^p_alpha}: a certified lower bound for ||A||.
inline double op_norm_empirical(const Kernel2D& K, const AlphaPartition& P, std::span<const Signal> witnesses, double p,
                                double q) {
  const auto vals = parallel_map<double>(witnesses.size(), [&](std::size_t i) {
    const double den = mod_norm(witnesses[i], P, p);
    if (den <= 0.0) return 0.0;
    return mod_norm(apply_kernel(K, witnesses[i]), P, q) / den;
  });
  return vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
}

inline double op_norm_empirical(const Kernel2D& K, const AlphaPartition& P, const AtomFamily& A, double p, double q,
                                int trials, std::uint64_t seed = 7, double lambda = 1.0) {
  const auto w = witness_signals(P, A, lambda, trials, seed);
  return op_norm_empirical(K, P, w, p, q);
}

/// a / b with 0 / 0 read as 1 (two vanishing equivalent norms agree).
inline double safe_ratio(double a, double b) {
  if (a == 0.0 && b == 0.0) return 1.0;
  if (b == 0.0) return kInf;
  return a / b;
}

inline bool within_band(double ratio, double band) { return ratio >= 1.0 / band && ratio <= band; }

struct SandwichOptions {
  double lambda = 1.0;
  int trials = 16;
  std::uint64_t seed = 7;
  double band = 10.0;
};

/// Three equivalent size measures of an operator and their pairwise ratios.
struct BoundednessReport {
  double p = 1.0, q = 1.0, alpha = 0.0;
  SandwichOptions options;
  double n1 = 0.0;  ///< empirical operator norm over the witness set
  double n2 = 0.0;  ///< weighted sup of atom image norms
  double n3 = 0.0;  ///< mixed c1 kernel norm (q, q, inf, inf; s = 0, t = alpha (1/p - 1))
  AtomSup n2_argmax;
  double r21 = 1.0, r31 = 1.0, r32 = 1.0;
  bool pass = false;
};

inline BoundednessReport boundedness_report(const Kernel2D& K, const AlphaPartition& P, const AtomFamily& A, double p,
                                            double q, const SandwichOptions& opt = {}) {
  require_bounded_exponents(p, q);
  BoundednessReport R;
  R.p = p;
  R.q = q;
  R.alpha = P.alpha;
  R.options = opt;
  const auto atoms = atom_instances(P, A, opt.lambda);
  const auto witnesses = witness_signals(P, A, opt.lambda, opt.trials, opt.seed);
  R.n1 = op_norm_empirical(K, P, witnesses, p, q);
  R.n2_argmax = atom_image_bound(K, P, atoms, A, p, q);
  R.n2 = R.n2_argmax.value;
  R.n3 = mixed_norm(K, P, {q, q, kInf, kInf, 0.0, P.alpha * (1.0 / p - 1.0), P.alpha, Variant::c1});
  R.r21 = safe_ratio(R.n2, R.n1);
  R.r31 = safe_ratio(R.n3, R.n1);
  R.r32 = safe_ratio(R.n3, R.n2);
  R.pass = within_band(R.r21, opt.band) && within_band(R.r31, opt.band) && within_band(R.r32, opt.band);
  return R;
}

/// Conjugate exponent p' with 1/p + 1/p' = 1.
inline double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (p == kInf) return 1.0;
  return p / (p - 1.0);
}

struct DualReport {
  double p = 1.0, p_conj = kInf, alpha = 0.0;
  SandwichOptions options;
  double n1 = 0.0;  ///< empirical M^p -> M^inf norm
  double n3 = 0.0;  ///< mixed c2 kernel norm (p', p', inf, inf)
  double ratio = 1.0;
  bool pass = false;
};

inline DualReport dual_bound_report(const Kernel2D& K, const AlphaPartition& P, const AtomFamily& A, double p,
                                    const SandwichOptions& opt = {}) {
  if (!(p >= 1.0)) throw std::invalid_argument("dual estimate requires p in [1, inf]; use boundedness for p < 1");
  DualReport R;
  R.p = p;
  R.p_conj = conjugate_exponent(p);
  R.alpha = P.alpha;
  R.options = opt;
  auto witnesses = witness_signals(P, A, opt.lambda, opt.trials, opt.seed);
  // adjoint images of translated band functions pick out the directions the operator sees
  const Kernel2D adj = flip_conjugate(K);
  const Grid& g = P.grid;
  const int shifts = 8;
  for (std::size_t pos = 0; pos < P.size(); ++pos) {
    Spectrum S(g);
    const auto& m = P.eta[pos];
    for (std::size_t i = 0; i < m.index.size(); ++i) S.coeffs[m.index[i]] = m.value[i];
    const Signal base = inverse_spectrum(S);
    for (int s = 0; s < shifts; ++s) {
      Signal w = apply_kernel(adj, translate(base, g.extent * s / shifts));
      if (lp_norm(w, 2.0) > 0.0) witnesses.push_back(std::move(w));
    }
  }
  R.n1 = op_norm_empirical(K, P, witnesses, p, kInf);
  R.n3 = mixed_norm(K, P, {R.p_conj, R.p_conj, kInf, kInf, 0.0, 0.0, P.alpha, Variant::c2});
  R.ratio = safe_ratio(R.n1, R.n3);
  R.pass = within_band(R.ratio, opt.band);
  return R;
}

enum class CompactVerdict { compact_consistent, not_compact_consistent, indeterminate };

inline std::string to_string(CompactVerdict v) {
  switch (v) {
    case CompactVerdict::compact_consistent: return "compact-consistent";
    case CompactVerdict::not_compact_consistent: return "not compact-consistent";
    default: return "indeterminate";
  }
}

struct CompactnessOptions {
  double lambda = 1.0;
  std::vector<int> levels{1, 2, 4, 8, 16};
  double decay_threshold = 0.1;
  double plateau_threshold = 0.5;
};

/// Tail functional T(N) of the atom images and the decay verdict.
struct CompactnessReport {
  double p = 1.0, q = 1.0, alpha = 0.0;
  CompactnessOptions options;
  TailProfile profile;
  std::size_t decisive_level = 0;
  double decisive_ratio = 0.0;
  CompactVerdict verdict = CompactVerdict::indeterminate;
};

/// Verdict at the last resolvable level of a tail profile.
inline CompactVerdict classify_tail(const TailProfile& T, double decay, double plateau, std::size_t& level,
                                    double& ratio) {
  level = T.last_resolvable();
  ratio = T.ratio(level);
  if (T.total == 0.0 || ratio <= decay) return CompactVerdict::compact_consistent;
  if (ratio >= plateau) return CompactVerdict::not_compact_consistent;
  return CompactVerdict::indeterminate;
}

/**
 * @brief T(N) = sup over atoms of <k>^{(alpha/(1-alpha))(1/p-1)} times the l^q norm, outside [-N, N]^2,
 * of <l>^{-alpha/((1-alpha)q)} (box_l A atom)(beta_l l').
 */
inline CompactnessReport compactness_report(const Kernel2D& K, const AlphaPartition& P, const AtomFamily& A, double p,
                                            double q, const CompactnessOptions& opt = {}) {
  require_bounded_exponents(p, q);
  if (q == kInf) throw std::invalid_argument("compactness statements require q < inf");
  CompactnessReport R;
  R.p = p;
  R.q = q;
  R.alpha = P.alpha;
  R.options = opt;
  const auto atoms = atom_instances(P, A, opt.lambda);
  auto lv = normalize_levels(opt.levels);
  std::vector<std::vector<double>> tails(atoms.size());
  std::vector<int> extents(atoms.size());
  parallel_for(atoms.size(), [&](std::size_t i) {
    auto c = weighted_atom_coefficients(spectrum(apply_kernel(K, atoms[i].f)), P, A.r, opt.lambda, q);
    const double w = atom_weight(atoms[i].bracket, P.alpha, p);
    for (auto& v : c.value) v *= w;
    tails[i] = member_tails(c, q, lv);
    extents[i] = member_extent(c);
  });
  R.profile = sup_profile(std::move(lv), tails, extents);
  R.verdict = classify_tail(R.profile, opt.decay_threshold, opt.plateau_threshold, R.decisive_level, R.decisive_ratio);
  return R;
}

}  // namespace amk
