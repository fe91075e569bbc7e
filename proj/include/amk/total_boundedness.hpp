#pragma once

#include "amk/modulation.hpp"

namespace amk {

/// Sparse coefficient family member: entry e has multi-index index[e*dim .. e*dim+dim) and value value[e].
struct IndexedCoefficients {
  int dim = 1;
  std::vector<int> index;
  std::vector<cplx> value;

  void push(std::span<const int> idx, cplx v) {
    index.insert(index.end(), idx.begin(), idx.end());
    value.push_back(v);
  }
  [[nodiscard]] std::size_t size() const { return value.size(); }
  /// max_i |index_i| of entry e: the entry lies outside [-N, N]^dim iff this exceeds N.
  [[nodiscard]] int box_radius(std::size_t e) const {
    int r = 0;
    for (int a = 0; a < dim; ++a) r = std::max(r, std::abs(index[e * dim + a]));
    return r;
  }
};

/**
 * @brief Sup over a family of out-of-box l^p tails at increasing levels.
 *
 * levels[0] is always 0 and values[0] is the total. Values are nonincreasing.
 */
struct TailProfile {
  std::vector<int> levels;
  std::vector<double> values;
  double total = 0.0;
  /// Largest |index| observed; levels at or beyond it see an empty complement.
  int extent = 0;

  [[nodiscard]] double ratio(std::size_t i) const { return total > 0.0 ? values[i] / total : 0.0; }
  /// Position of the largest level that still leaves indices outside its box.
  [[nodiscard]] std::size_t last_resolvable() const {
    std::size_t best = 0;
    for (std::size_t i = 0; i < levels.size(); ++i)
      if (levels[i] < extent) best = i;
    return best;
  }
};

/// Levels with 0 prepended, sorted and deduplicated.
inline std::vector<int> normalize_levels(std::span<const int> levels) {
  std::vector<int> out{0};
  for (int l : levels) {
    if (l < 0) throw std::invalid_argument("tail levels must be nonnegative");
    out.push_back(l);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Tail norms of one member at the given (normalized) levels.
inline std::vector<double> member_tails(const IndexedCoefficients& a, double p, std::span<const int> levels) {
  if (!(p > 0.0) || p == kInf) throw std::invalid_argument("tail exponent must lie in (0, inf)");
  std::vector<LpAccumulator> acc(levels.size(), LpAccumulator(p));
  for (std::size_t e = 0; e < a.size(); ++e) {
    const int r = a.box_radius(e);
    const double m = std::abs(a.value[e]);
    if (m == 0.0) continue;
    const double mp = p == 1.0 ? m : p == 2.0 ? m * m : std::pow(m, p);
    // position 0 is the total; later positions keep entries outside the box of their level
    for (std::size_t i = 0; i < levels.size() && (i == 0 || levels[i] < r); ++i) acc[i].add_power(mp);
  }
  std::vector<double> out(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) out[i] = acc[i].value();
  return out;
}

inline int member_extent(const IndexedCoefficients& a) {
  int r = 0;
  for (std::size_t e = 0; e < a.size(); ++e) r = std::max(r, a.box_radius(e));
  return r;
}

/// Combines per-member tails by the pointwise supremum.
inline TailProfile sup_profile(std::vector<int> levels, const std::vector<std::vector<double>>& tails,
                               std::span<const int> extents) {
  TailProfile T;
  T.levels = std::move(levels);
  T.values.assign(T.levels.size(), 0.0);
  for (const auto& t : tails)
    for (std::size_t i = 0; i < t.size(); ++i) T.values[i] = std::max(T.values[i], t[i]);
  for (int e : extents) T.extent = std::max(T.extent, e);
  T.total = T.values.front();
  return T;
}

inline TailProfile seq_tail_profile(std::span<const IndexedCoefficients> family, double p, std::span<const int> levels) {
  if (family.empty()) throw std::invalid_argument("tail profile of an empty family");
  auto lv = normalize_levels(levels);
  std::vector<std::vector<double>> tails;
  std::vector<int> extents;
  for (const auto& a : family) {
    tails.push_back(member_tails(a, p, lv));
    extents.push_back(member_extent(a));
  }
  return sup_profile(std::move(lv), tails, extents);
}

/**
 * @brief Weighted atom coefficients <k>^{-d alpha/((1-alpha)p)} (box_k f)(beta_k k') over every active band.
 *
 * Entries are indexed by (k, k') with k' the signed lattice representative.
 */
inline IndexedCoefficients weighted_atom_coefficients(const Spectrum& F, const AlphaPartition& P, double r,
                                                      double lambda, double p) {
  const Grid& g = P.grid;
  IndexedCoefficients out;
  out.dim = 2 * g.dim;
  const double e = -g.dim * P.alpha / ((1.0 - P.alpha) * p);
  for (std::size_t pos = 0; pos < P.size(); ++pos) {
    const auto& b = P.bands[pos];
    const Spectrum band = P.eta[pos].apply(F);
    if (std::all_of(band.coeffs.begin(), band.coeffs.end(), [](const cplx& c) { return c == cplx{}; })) continue;
    const auto lat = band_lattice(g, b, r, lambda);
    const auto samples = sample_lattice(band, lat.M);
    const double w = e == 0.0 ? 1.0 : std::pow(b.bracket, e);
    std::vector<int> idx(out.dim);
    std::copy(b.k.begin(), b.k.end(), idx.begin());
    for (std::size_t s = 0; s < samples.size(); ++s) {
      if (g.dim == 1) {
        idx[1] = signed_lattice_index(static_cast<int>(s), lat.M);
      } else {
        idx[2] = signed_lattice_index(static_cast<int>(s / lat.M), lat.M);
        idx[3] = signed_lattice_index(static_cast<int>(s % lat.M), lat.M);
      }
      out.push(idx, w * samples[s]);
    }
  }
  return out;
}

/// Tail profile of a signal family through its weighted atom coefficients.
inline TailProfile family_tail_profile(std::span<const Signal> family, const AlphaPartition& P, const AtomFamily& A,
                                       double p, double lambda, std::span<const int> levels) {
  require_lambda(lambda);
  if (family.empty()) throw std::invalid_argument("tail profile of an empty family");
  auto lv = normalize_levels(levels);
  std::vector<std::vector<double>> tails(family.size());
  std::vector<int> extents(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    require_same_grid(family[i].grid, P.grid);
    const auto c = weighted_atom_coefficients(spectrum(family[i]), P, A.r, lambda, p);
    tails[i] = member_tails(c, p, lv);
    extents[i] = member_extent(c);
  });
  return sup_profile(std::move(lv), tails, extents);
}

struct TbVerdict {
  bool consistent = true;
  /// Empty when consistent; otherwise names the failing clause.
  std::string failing_clause;
  double total = 0.0;
  double final_ratio = 0.0;
  double bound = 0.0;
  double decay_threshold = 0.1;
};

/**
 * @brief Total-boundedness consistency: bounded total and a small tail ratio at the last resolvable level.
 *
 * Levels whose box already contains every index carry no information and are skipped.
 */
inline TbVerdict tb_verdict(const TailProfile& T, double bound, double decay_threshold = 0.1) {
  TbVerdict v;
  v.total = T.total;
  v.bound = bound;
  v.decay_threshold = decay_threshold;
  if (T.total == 0.0) return v;
  v.final_ratio = T.ratio(T.last_resolvable());
  if (T.total > bound) {
    v.consistent = false;
    v.failing_clause = "(a) uniform boundedness";
  } else if (v.final_ratio > decay_threshold) {
    v.consistent = false;
    v.failing_clause = "(b) uniform disappearance";
  }
  return v;
}

/// Linear combinations sum_j c_j psi_j of a fixed family.
inline Signal synthesize(std::span<const Signal> members, std::span<const cplx> coeffs) {
  if (members.empty() || members.size() != coeffs.size()) throw std::invalid_argument("synthesis size mismatch");
  Signal out(members.front().grid);
  for (std::size_t j = 0; j < members.size(); ++j) {
    require_same_grid(out.grid, members[j].grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += coeffs[j] * members[j].values[i];
  }
  return out;
}

}  // namespace amk
