// Command-line front end for the amk toolkit.
//
// Every subcommand writes one JSON report (stdout or --out) and exits
// 0 when its check passes, 2 when it fails and 1 on usage or input errors.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "amk/amk.hpp"
#include "amk/io.hpp"

namespace {

using amk::io::json;
using amk::io::number;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheck = 2;

/// Flags shared by the subcommands; each subcommand registers the subset it reads.
struct Config {
  int dim = 1;
  int grid_n = 256;
  double extent = 16.0;
  double alpha = 0.0;
  std::optional<double> C;
  double r = 1.5;
  double lambda = 1.0;
  double p = 1.0;
  std::optional<double> q;
  double s = 0.0, t = 0.0;
  std::optional<double> p1, p2, q1, q2;
  std::string variant = "c1";
  std::uint64_t seed = 7;
  int trials = 16;
  std::string levels = "1,2,4,8,16";
  std::string out;
  std::string csv;
  double tol_band = 10.0;
  double decay = 0.1, plateau = 0.5;
  double bound = amk::kInf;
  double tol = 1e-9;
  std::string signal, kernel;
  std::vector<std::string> signals;
  std::string kind;
  bool as_signal = false;
  double r_std = 0.5, r_shift = 1.5;
  std::vector<double> xi0;
  double R = 1.0;
  double delta = 0.5;
  double width = 1.0;
  std::string export_path;

  [[nodiscard]] double q_or_p() const { return q.value_or(p); }
  [[nodiscard]] double covering(int d) const { return C.value_or(amk::default_covering_constant(d)); }
  [[nodiscard]] amk::Grid grid() const { return amk::Grid(dim, extent, grid_n); }
};

/// Parses an exponent: a positive number or "inf".
double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return amk::kInf;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw CLI::ValidationError("exponent", "not a number: " + s);
  return v;
}

std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  if (out.empty()) throw amk::io::input_error("--levels must list at least one level");
  return out;
}

void add_exponent(CLI::App* app, const std::string& name, double& target, const std::string& help) {
  app->add_option_function<std::string>(name, [&target](const std::string& v) { target = parse_exponent(v); }, help);
}

void add_optional_exponent(CLI::App* app, const std::string& name, std::optional<double>& target,
                           const std::string& help) {
  app->add_option_function<std::string>(name, [&target](const std::string& v) { target = parse_exponent(v); }, help);
}

void add_grid_flags(CLI::App* app, Config& c) {
  app->add_option("--dim", c.dim, "Spatial dimension (1 or 2)");
  app->add_option("--grid-n", c.grid_n, "Samples per axis (even, >= 8)");
  app->add_option("--extent", c.extent, "Side length of the periodic cube");
}

void add_partition_flags(CLI::App* app, Config& c) {
  app->add_option("--alpha", c.alpha, "Covering parameter in [0, 1)");
  app->add_option_function<double>("--C", [&c](double v) { c.C = v; }, "Covering constant (default 2 in 1-d, 3 in 2-d)");
  app->add_option("--r", c.r, "Atom enlargement factor r > 1");
  app->add_option("--lambda", c.lambda, "Lattice parameter in (0, 1]");
}

void add_output_flags(CLI::App* app, Config& c) {
  app->add_option("--out", c.out, "Report path (stdout when omitted)");
}

void add_random_flags(CLI::App* app, Config& c) {
  app->add_option("--seed", c.seed, "Seed of every random test set");
  app->add_option("--trials", c.trials, "Number of random signals");
}

json params_json(const Config& c, const amk::Grid& g) {
  return json{{"grid", amk::io::grid_json(g)}, {"alpha", c.alpha}, {"C", c.covering(g.dim)}, {"r", c.r},
              {"lambda", c.lambda}, {"seed", c.seed}, {"trials", c.trials}};
}

void emit(const Config& c, const json& report) {
  const std::string text = amk::io::dump(report);
  if (c.out.empty()) std::cout << text;
  else amk::io::write_atomic(c.out, text);
}

void emit_csv(const Config& c, const std::string& text) {
  if (!c.csv.empty()) amk::io::write_atomic(c.csv, text);
}

int verdict(bool pass, const std::string& failing) {
  if (pass) return kExitPass;
  std::cerr << "check failed: " << failing << "\n";
  return kExitCheck;
}

amk::Signal load_signal(const std::string& path) {
  if (path.empty()) throw amk::io::input_error("--signal is required");
  return amk::io::signal_from_json(amk::io::read_json_file(path));
}

amk::Kernel2D load_kernel(const std::string& path) {
  if (path.empty()) throw amk::io::input_error("--kernel is required");
  return amk::io::kernel_from_json(amk::io::read_json_file(path));
}

std::string failing_ratio(const std::vector<std::pair<std::string, double>>& ratios, double band) {
  std::string out;
  for (const auto& [name, v] : ratios)
    if (!amk::within_band(v, band)) out += (out.empty() ? "" : ", ") + name + " = " + amk::io::cell(v);
  return out + " outside [1/" + amk::io::cell(band) + ", " + amk::io::cell(band) + "]";
}

int run_partition_validate(const Config& c) {
  const auto g = c.grid();
  const auto P = amk::build_partition(c.alpha, g, c.covering(g.dim));
  const auto R = amk::validate_partition(P);
  json report{{"command", "partition-validate"}, {"params", params_json(c, g)},
              {"active_bands", P.size()}, {"report", amk::io::partition_report_json(P, R)}};
  emit(c, report);
  if (!c.export_path.empty()) amk::io::write_atomic(c.export_path, amk::io::dump(amk::io::partition_json(P)));
  return verdict(R.pass, "partition invariants (sum deviation " + amk::io::cell(R.max_sum_deviation) +
                             ", gradient spread " + amk::io::cell(R.gradient_spread) + ")");
}

int run_norm(const Config& c) {
  const auto f = load_signal(c.signal);
  const auto P = amk::build_partition(c.alpha, f.grid, c.covering(f.grid.dim));
  const amk::ModNormParams mp{c.p, c.q_or_p(), c.s, c.alpha};
  const auto F = amk::spectrum(f);
  const auto per_band = amk::band_lp_norms(F, P, mp.p);
  const double value = amk::combine_band_norms(per_band, P, mp.q, mp.s);
  json report{{"command", "norm"},
              {"norm", number(value)},
              {"per_band", amk::io::band_report_json(P, per_band)},
              {"params", {{"p", number(mp.p)}, {"q", number(mp.q)}, {"s", mp.s}, {"alpha", mp.alpha},
                          {"C", P.C}, {"grid", amk::io::grid_json(f.grid)}}}};
  emit(c, report);
  return kExitPass;
}

/// Random retained-band signals of the configured partition, or the single --signal file when given.
std::vector<amk::Signal> test_signals(const Config& c, const amk::AlphaPartition& P, const amk::AtomFamily& A) {
  if (!c.signal.empty()) return {load_signal(c.signal)};
  std::vector<amk::Signal> out;
  for (int t = 0; t < c.trials; ++t) out.push_back(amk::random_band_signal(P, A, c.seed + t));
  return out;
}

int run_norm_equiv(const Config& c) {
  amk::Grid g = c.grid();
  if (!c.signal.empty()) g = load_signal(c.signal).grid;
  const auto P = amk::build_partition(c.alpha, g, c.covering(g.dim));
  const auto A = amk::build_atoms(P, c.r);
  const auto signals = test_signals(c, P, A);
  const std::vector<double> lambdas{c.lambda, c.lambda / 2.0, c.lambda / 4.0};
  json rows = json::array();
  std::vector<std::vector<std::string>> csv_rows;
  bool pass = true;
  double base_width = 1.0, worst_width = 1.0, max_recon = 0.0;
  for (double lam : lambdas) {
    double lo = amk::kInf, hi = 0.0;
    for (std::size_t i = 0; i < signals.size(); ++i) {
      const double direct = amk::mod_norm(signals[i], P, c.p);
      const double sampled = amk::sampled_norm(signals[i], P, A, c.p, lam);
      const double ratio = amk::safe_ratio(sampled, direct);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      csv_rows.push_back({std::to_string(i), amk::io::cell(c.p), amk::io::cell(lam), amk::io::cell(direct),
                          amk::io::cell(sampled), amk::io::cell(ratio)});
      if (lam >= 0.5) {
        const auto rec = amk::atom_reconstruct(amk::atom_expand(signals[i], P, A, lam), A);
        max_recon = std::max(max_recon, amk::relative_l2_error(rec, signals[i]));
      }
    }
    const double width = hi / lo;
    if (lam == c.lambda) base_width = width;
    worst_width = std::max(worst_width, width);
    pass = pass && amk::within_band(lo, c.tol_band) && amk::within_band(hi, c.tol_band);
    rows.push_back(json{{"lambda", lam}, {"min_ratio", number(lo)}, {"max_ratio", number(hi)}, {"width", number(width)}});
  }
  const bool stable = worst_width <= 2.0 * base_width;
  const bool recon_ok = max_recon <= 1e-8;
  json report{{"command", "norm-equiv"},
              {"params", params_json(c, g)},
              {"p", number(c.p)},
              {"signals", signals.size()},
              {"per_lambda", std::move(rows)},
              {"max_reconstruction_error", number(max_recon)},
              {"lambda_stable", stable},
              {"tolerances", {{"band", c.tol_band}, {"lambda_stability_factor", 2.0}, {"reconstruction", 1e-8}}},
              {"pass", pass && stable && recon_ok}};
  emit(c, report);
  emit_csv(c, amk::io::csv({"f_id", "p", "lambda", "mod_norm", "sampled_norm", "ratio"}, csv_rows));
  return verdict(pass && stable && recon_ok, "sampled_norm / alpha_mod_norm band, lambda stability or reconstruction");
}

std::vector<double> ball_center(const Config& c, int dim) {
  if (c.xi0.empty()) return std::vector<double>(dim, 0.0);
  if (static_cast<int>(c.xi0.size()) != dim) throw amk::io::input_error("--xi0 needs one entry per dimension");
  return c.xi0;
}

/// Mask of grid frequencies strictly inside B(center, radius).
std::vector<char> ball_mask(const amk::Grid& g, std::span<const double> center, double radius) {
  std::vector<char> mask(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = amk::frequency_at(g, i);
    double d2 = 0.0;
    for (std::size_t a = 0; a < center.size(); ++a) d2 += (xi[a] - center[a]) * (xi[a] - center[a]);
    mask[i] = std::sqrt(d2) < radius;
  }
  return mask;
}

int run_sampling_check(const Config& c) {
  const auto g = c.grid();
  const auto psi_std = amk::standard_window(c.r_std);
  const auto psi_shift = amk::shifted_window(c.r_shift);
  const auto xi0 = ball_center(c, g.dim);
  const amk::BallSpec ball{xi0, c.R, c.r_shift};
  const std::vector<double> origin(g.dim, 0.0);
  const auto mask_std = ball_mask(g, origin, c.r_std / 2.0);
  const auto mask_shift = ball_mask(g, xi0, c.R);
  const std::vector<double> lambdas{1.0, 0.5, 0.25};
  const std::vector<double> ps{0.5, 1.0, 2.0, amk::kInf};
  std::mt19937_64 rng(c.seed);
  double err_std = 0.0, err_shift = 0.0;
  std::vector<std::vector<std::string>> rows;
  std::vector<double> lo(lambdas.size() * ps.size(), amk::kInf), hi(lo.size(), 0.0);
  for (int t = 0; t < c.trials; ++t) {
    const auto f = amk::random_masked_signal(g, mask_std, rng);
    const auto h = amk::random_masked_signal(g, mask_shift, rng);
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      const double lam = lambdas[li];
      err_std = std::max(err_std, amk::relative_l2_error(amk::standard_expand(f, psi_std, lam).reconstruction, f));
      err_shift = std::max(err_shift, amk::relative_l2_error(amk::shifted_expand(h, ball, psi_shift, lam).reconstruction, h));
      for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        const double ratio = amk::lp_sampling_ratio(f, ps[pi], lam);
        const std::size_t slot = li * ps.size() + pi;
        lo[slot] = std::min(lo[slot], ratio);
        hi[slot] = std::max(hi[slot], ratio);
        const int M = amk::lattice_size(g.extent, lam);
        const double spacing = g.extent / M;
        const double seq = amk::lp_seq_norm(amk::sample_lattice(amk::spectrum(f), M), ps[pi]);
        const double scale = ps[pi] == amk::kInf ? 1.0 : std::pow(spacing, g.dim / ps[pi]);
        rows.push_back({std::to_string(t), amk::io::cell(ps[pi]), amk::io::cell(lam), amk::io::cell(amk::lp_norm(f, ps[pi])),
                        amk::io::cell(scale * seq), amk::io::cell(ratio)});
      }
    }
  }
  json bands = json::array();
  bool in_band = true, stable = true;
  for (std::size_t pi = 0; pi < ps.size(); ++pi) {
    const double w1 = hi[pi] / lo[pi];
    const std::size_t last = (lambdas.size() - 1) * ps.size() + pi;
    const double wq = hi[last] / lo[last];
    stable = stable && wq <= 2.0 * w1;
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      const std::size_t slot = li * ps.size() + pi;
      in_band = in_band && amk::within_band(lo[slot], c.tol_band) && amk::within_band(hi[slot], c.tol_band);
      bands.push_back(json{{"p", number(ps[pi])}, {"lambda", lambdas[li]}, {"min_ratio", number(lo[slot])},
                           {"max_ratio", number(hi[slot])}});
    }
  }
  const bool recon = err_std <= c.tol && err_shift <= c.tol;
  const bool pass = recon && in_band && stable;
  json report{{"command", "sampling-check"},
              {"params", {{"grid", amk::io::grid_json(g)}, {"r_std", c.r_std}, {"r_shift", c.r_shift},
                          {"xi0", xi0}, {"R", c.R}, {"trials", c.trials}, {"seed", c.seed}}},
              {"reconstruction_error", {{"standard", number(err_std)}, {"shifted", number(err_shift)}}},
              {"ratio_bands", std::move(bands)},
              {"lambda_stable", stable},
              {"tolerances", {{"reconstruction", c.tol}, {"band", c.tol_band}, {"lambda_stability_factor", 2.0}}},
              {"pass", pass}};
  emit(c, report);
  emit_csv(c, amk::io::csv({"f_id", "p", "lambda", "lp_norm", "seq_norm", "ratio"}, rows));
  return verdict(pass, "reconstruction error or sampling ratio band");
}

int run_bernstein(const Config& c) {
  const auto g = c.grid();
  const double q = c.q_or_p();
  const auto xi0 = ball_center(c, g.dim);
  std::mt19937_64 rng(c.seed);
  const amk::BallSpec ball{xi0, c.R, 1.5};
  const auto mask = ball_mask(g, xi0, c.R);
  double lo = amk::kInf, hi = 0.0;
  for (int t = 0; t < c.trials; ++t) {
    const double ratio = amk::bernstein_ratio(amk::random_masked_signal(g, mask, rng), c.p, q, ball);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  // one smooth profile dilated over R, 2R, 4R, 8R while its ball still fits the window
  json dilation = json::array();
  double dlo = amk::kInf, dhi = 0.0;
  const double h = g.nyquist();
  for (double scale : {1.0, 2.0, 4.0, 8.0}) {
    const double R = c.R * scale;
    bool fits = true;
    for (double v : xi0) fits = fits && std::abs(v) + R < h;
    if (!fits) break;
    amk::Spectrum S(g);
    const amk::RadialBump bump{0.5 * R, 0.9 * R};
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto xi = amk::frequency_at(g, i);
      double d2 = 0.0;
      for (std::size_t a = 0; a < xi0.size(); ++a) d2 += (xi[a] - xi0[a]) * (xi[a] - xi0[a]);
      S.coeffs[i] = bump(std::sqrt(d2));
    }
    const double ratio = amk::bernstein_ratio(amk::inverse_spectrum(S), c.p, q, {xi0, R, 1.5});
    dlo = std::min(dlo, ratio);
    dhi = std::max(dhi, ratio);
    dilation.push_back(json{{"R", R}, {"ratio", number(ratio)}});
  }
  const double spread = dhi / dlo;
  const bool pass = spread <= 2.0;
  json report{{"command", "bernstein"},
              {"params", {{"grid", amk::io::grid_json(g)}, {"p", number(c.p)}, {"q", number(q)}, {"xi0", xi0},
                          {"R", c.R}, {"trials", c.trials}, {"seed", c.seed}}},
              {"random", {{"min_ratio", number(lo)}, {"max_ratio", number(hi)}}},
              {"dilation", std::move(dilation)},
              {"dilation_spread", number(spread)},
              {"tolerances", {{"dilation_spread", 2.0}}},
              {"pass", pass}};
  emit(c, report);
  return verdict(pass, "dilation spread " + amk::io::cell(spread) + " > 2");
}

int run_kernel_norm(const Config& c) {
  const auto K = load_kernel(c.kernel);
  const auto P = amk::build_partition(c.alpha, K.grid, c.covering(1));
  const double q = c.q_or_p();
  amk::MixedNormParams mp{c.p1.value_or(q), c.p2.value_or(q), c.q1.value_or(amk::kInf), c.q2.value_or(amk::kInf),
                          c.s, c.t, c.alpha, amk::parse_variant(c.variant)};
  const double value = amk::mixed_norm(K, P, mp);
  json report{{"command", "kernel-norm"},
              {"norm", number(value)},
              {"params", {{"p1", number(mp.p1)}, {"p2", number(mp.p2)}, {"q1", number(mp.q1)}, {"q2", number(mp.q2)},
                          {"s", mp.s}, {"t", mp.t}, {"alpha", mp.alpha}, {"C", P.C}, {"variant", c.variant},
                          {"grid", amk::io::grid_json(K.grid)}}}};
  emit(c, report);
  return kExitPass;
}

amk::SandwichOptions sandwich(const Config& c) { return {c.lambda, c.trials, c.seed, c.tol_band}; }

amk::CompactnessOptions compactness_options(const Config& c) {
  return {c.lambda, parse_levels(c.levels), c.decay, c.plateau};
}

int run_boundedness(const Config& c) {
  const auto K = load_kernel(c.kernel);
  const auto P = amk::build_partition(c.alpha, K.grid, c.covering(1));
  const auto A = amk::build_atoms(P, c.r);
  const auto R = amk::boundedness_report(K, P, A, c.p, c.q_or_p(), sandwich(c));
  json report{{"command", "boundedness"}, {"partition", {{"C", P.C}, {"r", A.r}, {"grid", amk::io::grid_json(K.grid)}}}};
  report.update(amk::io::boundedness_json(R));
  emit(c, report);
  return verdict(R.pass, failing_ratio({{"N2/N1", R.r21}, {"N3/N1", R.r31}, {"N3/N2", R.r32}}, c.tol_band));
}

int run_dual_boundedness(const Config& c) {
  const auto K = load_kernel(c.kernel);
  const auto P = amk::build_partition(c.alpha, K.grid, c.covering(1));
  const auto A = amk::build_atoms(P, c.r);
  const auto R = amk::dual_bound_report(K, P, A, c.p, sandwich(c));
  json report{{"command", "dual-boundedness"}, {"partition", {{"C", P.C}, {"r", A.r}, {"grid", amk::io::grid_json(K.grid)}}}};
  report.update(amk::io::dual_json(R));
  emit(c, report);
  return verdict(R.pass, failing_ratio({{"N1/N3", R.ratio}}, c.tol_band));
}

int run_compactness(const Config& c) {
  const auto K = load_kernel(c.kernel);
  const auto P = amk::build_partition(c.alpha, K.grid, c.covering(1));
  const auto A = amk::build_atoms(P, c.r);
  const auto R = amk::compactness_report(K, P, A, c.p, c.q_or_p(), compactness_options(c));
  json report{{"command", "compactness"}, {"partition", {{"C", P.C}, {"r", A.r}, {"grid", amk::io::grid_json(K.grid)}}}};
  report.update(amk::io::compactness_json(R));
  emit(c, report);
  emit_csv(c, amk::io::profile_csv(R.profile));
  return kExitPass;
}

int run_tb_profile(const Config& c) {
  if (c.signals.empty()) throw amk::io::input_error("--signal is required (repeat it for each family member)");
  std::vector<amk::Signal> family;
  for (const auto& path : c.signals) family.push_back(load_signal(path));
  for (const auto& f : family) amk::require_same_grid(f.grid, family.front().grid);
  const auto& g = family.front().grid;
  const auto P = amk::build_partition(c.alpha, g, c.covering(g.dim));
  const auto A = amk::build_atoms(P, c.r);
  const auto T = amk::family_tail_profile(family, P, A, c.p, c.lambda, parse_levels(c.levels));
  const auto v = amk::tb_verdict(T, c.bound, c.decay);
  json report{{"command", "tb-profile"},
              {"params", {{"p", number(c.p)}, {"alpha", c.alpha}, {"C", P.C}, {"r", A.r}, {"lambda", c.lambda},
                          {"members", family.size()}, {"grid", amk::io::grid_json(g)}}},
              {"profile", amk::io::profile_json(T)},
              {"final_ratio", number(v.final_ratio)},
              {"tolerances", {{"bound", number(c.bound)}, {"decay_threshold", c.decay}}},
              {"verdict", v.consistent ? "totally-bounded-consistent" : "inconsistent"},
              {"failing_clause", v.failing_clause}};
  emit(c, report);
  emit_csv(c, amk::io::profile_csv(T));
  return verdict(v.consistent, "clause " + v.failing_clause);
}

int run_gabor_norm(const Config& c) {
  const auto f = load_signal(c.signal);
  const auto sys = amk::make_gabor_system(amk::gaussian_window(f.grid, c.width), c.delta);
  const auto P = amk::build_partition(0.0, f.grid, c.covering(1));
  const double g_norm = amk::gabor_norm(f, sys, c.p, false);
  const double gamma_norm = amk::gabor_norm(f, sys, c.p, true);
  const double mod = amk::mod_norm(f, P, c.p);
  const double ratio = amk::safe_ratio(g_norm, mod);
  const bool pass = amk::within_band(ratio, c.tol_band);
  json report{{"command", "gabor-norm"},
              {"params", {{"p", number(c.p)}, {"delta", c.delta}, {"width", c.width}, {"grid", amk::io::grid_json(f.grid)}}},
              {"frame_bounds", {{"lower", sys.bounds.lower}, {"upper", sys.bounds.upper}, {"condition", sys.bounds.condition()}}},
              {"values", {{"gabor_norm_window", number(g_norm)}, {"gabor_norm_dual", number(gamma_norm)},
                          {"modulation_norm", number(mod)}}},
              {"ratios", {{"gabor/modulation", number(ratio)}}},
              {"tolerances", {{"band", c.tol_band}}},
              {"pass", pass}};
  emit(c, report);
  return verdict(pass, failing_ratio({{"gabor/modulation", ratio}}, c.tol_band));
}

int run_gabor_kernel(const Config& c) {
  const auto K = load_kernel(c.kernel);
  const auto sys = amk::make_gabor_system(amk::gaussian_window(K.grid, c.width), c.delta);
  const auto R = amk::gabor_kernel_bound(K, sys, c.p, c.q_or_p(), c.trials, c.seed, c.tol_band);
  json report{{"command", "gabor-kernel"}, {"window_width", c.width}, {"grid", amk::io::grid_json(K.grid)}};
  report.update(amk::io::gabor_kernel_json(R));
  emit(c, report);
  return verdict(R.pass, failing_ratio({{"N1/N2", R.ratio}}, c.tol_band));
}

int run_gabor_compactness(const Config& c) {
  const auto K = load_kernel(c.kernel);
  const auto sys = amk::make_gabor_system(amk::gaussian_window(K.grid, c.width), c.delta);
  const auto R = amk::gabor_compactness(K, sys, c.p, c.q_or_p(), compactness_options(c));
  json report{{"command", "gabor-compactness"}, {"window_width", c.width}, {"grid", amk::io::grid_json(K.grid)}};
  report.update(amk::io::gabor_compactness_json(R));
  emit(c, report);
  emit_csv(c, amk::io::profile_csv(R.profile));
  return kExitPass;
}

int run_generate_fixture(const Config& c) {
  const auto kind = amk::parse_fixture_kind(c.kind);
  const auto g = c.grid();
  const amk::FixtureParams fp{c.alpha, c.covering(g.dim), c.r, c.seed};
  if (c.as_signal) {
    amk::Signal f(g);
    if (kind == amk::FixtureKind::random_band) {
      const auto P = amk::build_partition(c.alpha, g, fp.C);
      f = amk::random_band_signal(P, amk::build_atoms(P, c.r), c.seed);
    } else if (kind != amk::FixtureKind::zero) {
      throw amk::io::input_error("--as-signal supports the zero and random-band kinds");
    }
    emit(c, amk::io::signal_json(f));
  } else {
    emit(c, amk::io::kernel_json(amk::make_kernel_fixture(kind, g, fp)));
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-modulation kernel toolkit"};
  app.require_subcommand(1);
  Config c;
  using Handler = int (*)(const Config&);
  std::vector<std::pair<CLI::App*, Handler>> commands;

  auto* partition = app.add_subcommand("partition-validate", "Build and validate a partition of unity");
  add_grid_flags(partition, c);
  add_partition_flags(partition, c);
  add_output_flags(partition, c);
  partition->add_option("--export", c.export_path, "Also write the partition as JSON");
  commands.emplace_back(partition, run_partition_validate);

  auto* norm = app.add_subcommand("norm", "alpha-modulation norm of a signal");
  norm->add_option("--signal", c.signal, "Signal JSON")->required();
  add_partition_flags(norm, c);
  add_exponent(norm, "--p", c.p, "Inner exponent");
  add_optional_exponent(norm, "--q", c.q, "Outer exponent (default p)");
  norm->add_option("--s", c.s, "Weight exponent");
  add_output_flags(norm, c);
  commands.emplace_back(norm, run_norm);

  auto* equiv = app.add_subcommand("norm-equiv", "Sampled atom norm against the direct norm");
  equiv->add_option("--signal", c.signal, "Signal JSON (random retained-band signals when omitted)");
  add_grid_flags(equiv, c);
  add_partition_flags(equiv, c);
  add_random_flags(equiv, c);
  add_exponent(equiv, "--p", c.p, "Exponent");
  equiv->add_option("--tol-band", c.tol_band, "Ratio band [1/b, b]");
  equiv->add_option("--csv", c.csv, "Per-trial CSV table");
  add_output_flags(equiv, c);
  commands.emplace_back(equiv, run_norm_equiv);

  auto* sampling = app.add_subcommand("sampling-check", "Standard and shifted lattice expansions");
  add_grid_flags(sampling, c);
  add_random_flags(sampling, c);
  sampling->add_option("--r-std", c.r_std, "Plateau parameter of the standard window, in (0, 1)");
  sampling->add_option("--r-shift", c.r_shift, "Enlargement of the shifted window, > 1");
  sampling->add_option("--xi0", c.xi0, "Ball center of the shifted expansion");
  sampling->add_option("--R", c.R, "Ball radius of the shifted expansion");
  sampling->add_option("--tol", c.tol, "Reconstruction tolerance");
  sampling->add_option("--tol-band", c.tol_band, "Ratio band [1/b, b]");
  sampling->add_option("--csv", c.csv, "Per-trial CSV table");
  add_output_flags(sampling, c);
  commands.emplace_back(sampling, run_sampling_check);

  auto* bern = app.add_subcommand("bernstein", "Band-limited L^p to L^q embedding ratio");
  add_grid_flags(bern, c);
  add_random_flags(bern, c);
  add_exponent(bern, "--p", c.p, "Source exponent");
  add_optional_exponent(bern, "--q", c.q, "Target exponent (>= p)");
  bern->add_option("--xi0", c.xi0, "Ball center");
  bern->add_option("--R", c.R, "Ball radius");
  add_output_flags(bern, c);
  commands.emplace_back(bern, run_bernstein);

  auto* knorm = app.add_subcommand("kernel-norm", "Mixed kernel norm");
  knorm->add_option("--kernel", c.kernel, "Kernel JSON")->required();
  add_partition_flags(knorm, c);
  add_exponent(knorm, "--p", c.p, "Default for p1 and p2 when --q is omitted");
  add_optional_exponent(knorm, "--q", c.q, "Default for p1 and p2");
  add_optional_exponent(knorm, "--p1", c.p1, "First exponent");
  add_optional_exponent(knorm, "--p2", c.p2, "Second exponent");
  add_optional_exponent(knorm, "--q1", c.q1, "Third exponent (default inf)");
  add_optional_exponent(knorm, "--q2", c.q2, "Fourth exponent (default inf)");
  knorm->add_option("--s", c.s, "Output band weight exponent");
  knorm->add_option("--t", c.t, "Input band weight exponent");
  knorm->add_option("--variant", c.variant, "Integration order")->check(CLI::IsMember({"c1", "c2"}));
  add_output_flags(knorm, c);
  commands.emplace_back(knorm, run_kernel_norm);

  auto add_kernel_check = [&](const char* name, const char* help, Handler h, bool with_q) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--kernel", c.kernel, "Kernel JSON")->required();
    add_partition_flags(sub, c);
    add_random_flags(sub, c);
    add_exponent(sub, "--p", c.p, "Source exponent");
    if (with_q) add_optional_exponent(sub, "--q", c.q, "Target exponent (default p)");
    sub->add_option("--tol-band", c.tol_band, "Ratio band [1/b, b]");
    add_output_flags(sub, c);
    commands.emplace_back(sub, h);
    return sub;
  };
  add_kernel_check("boundedness", "Three-way boundedness sandwich", run_boundedness, true);
  add_kernel_check("dual-boundedness", "M^p to M^inf sandwich", run_dual_boundedness, false);
  auto* compact = add_kernel_check("compactness", "Tail functional of atom images", run_compactness, true);
  compact->add_option("--levels", c.levels, "Comma-separated tail levels");
  compact->add_option("--decay", c.decay, "Decay threshold");
  compact->add_option("--plateau", c.plateau, "Plateau threshold");
  compact->add_option("--csv", c.csv, "Profile CSV");

  auto* tb = app.add_subcommand("tb-profile", "Total-boundedness tail profile of a signal family");
  tb->add_option("--signal", c.signals, "Family member signal JSON (repeatable)")->required();
  add_partition_flags(tb, c);
  add_exponent(tb, "--p", c.p, "Exponent in (0, inf)");
  tb->add_option("--levels", c.levels, "Comma-separated tail levels");
  tb->add_option("--decay", c.decay, "Decay threshold");
  tb->add_option("--bound", c.bound, "Uniform bound on the total");
  tb->add_option("--csv", c.csv, "Profile CSV");
  add_output_flags(tb, c);
  commands.emplace_back(tb, run_tb_profile);

  auto add_gabor_flags = [&](CLI::App* sub) {
    sub->add_option("--delta", c.delta, "Lattice step");
    sub->add_option("--width", c.width, "Gaussian window width");
    add_output_flags(sub, c);
  };
  auto* gnorm = app.add_subcommand("gabor-norm", "Gabor coefficient norm against the modulation norm");
  gnorm->add_option("--signal", c.signal, "Signal JSON")->required();
  add_exponent(gnorm, "--p", c.p, "Exponent");
  gnorm->add_option_function<double>("--C", [&c](double v) { c.C = v; }, "Covering constant");
  gnorm->add_option("--tol-band", c.tol_band, "Ratio band [1/b, b]");
  add_gabor_flags(gnorm);
  commands.emplace_back(gnorm, run_gabor_norm);

  auto* gker = app.add_subcommand("gabor-kernel", "Gabor kernel sandwich");
  gker->add_option("--kernel", c.kernel, "Kernel JSON")->required();
  add_exponent(gker, "--p", c.p, "Source exponent");
  add_optional_exponent(gker, "--q", c.q, "Target exponent (default p)");
  add_random_flags(gker, c);
  gker->add_option("--tol-band", c.tol_band, "Ratio band [1/b, b]");
  add_gabor_flags(gker);
  commands.emplace_back(gker, run_gabor_kernel);

  auto* gcomp = app.add_subcommand("gabor-compactness", "Gabor kernel tail profile");
  gcomp->add_option("--kernel", c.kernel, "Kernel JSON")->required();
  add_exponent(gcomp, "--p", c.p, "Source exponent");
  add_optional_exponent(gcomp, "--q", c.q, "Target exponent (default p)");
  gcomp->add_option("--levels", c.levels, "Comma-separated tail levels");
  gcomp->add_option("--decay", c.decay, "Decay threshold");
  gcomp->add_option("--plateau", c.plateau, "Plateau threshold");
  gcomp->add_option("--csv", c.csv, "Profile CSV");
  add_gabor_flags(gcomp);
  commands.emplace_back(gcomp, run_gabor_compactness);

  auto* gen = app.add_subcommand("generate-fixture", "Write a deterministic fixture kernel or signal");
  gen->add_option("--kind", c.kind, "zero | rank1 | identity | convolution | localized-convolution | random-band")
      ->required();
  add_grid_flags(gen, c);
  add_partition_flags(gen, c);
  gen->add_option("--seed", c.seed, "Seed of random fixtures");
  gen->add_flag("--as-signal", c.as_signal, "Write a signal instead of a kernel (zero, random-band)");
  add_output_flags(gen, c);
  commands.emplace_back(gen, run_generate_fixture);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }
  try {
    for (const auto& [sub, handler] : commands)
      if (sub->parsed()) return handler(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
