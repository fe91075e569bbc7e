#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "amk/gabor.hpp"

namespace amk::io {

using json = nlohmann::ordered_json;

/// Malformed or unreadable input.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// JSON-safe number: infinities become the strings "inf" / "-inf", NaN becomes null.
inline json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw input_error("expected a number");
}

inline json grid_json(const Grid& g) { return json{{"dim", g.dim}, {"extent", g.extent}, {"n", g.n}}; }

inline Grid grid_from_json(const json& j) {
  try {
    return Grid(j.at("dim").get<int>(), j.at("extent").get<double>(), j.at("n").get<int>());
  } catch (const json::exception& e) {
    throw input_error(std::string("bad grid: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw input_error(std::string("bad grid: ") + e.what());
  }
}

inline json complex_parts(std::span<const cplx> v, const char* part) {
  json a = json::array();
  for (const auto& c : v) a.push_back(part[0] == 'r' ? c.real() : c.imag());
  return a;
}

inline json signal_json(const Signal& f) {
  json j = grid_json(f.grid);
  j["re"] = complex_parts(f.values, "re");
  j["im"] = complex_parts(f.values, "im");
  return j;
}

inline json spectrum_json(const Spectrum& F) {
  json j = grid_json(F.grid);
  j["re"] = complex_parts(F.coeffs, "re");
  j["im"] = complex_parts(F.coeffs, "im");
  return j;
}

inline std::vector<cplx> read_parts(const json& re, const json& im, std::size_t expected) {
  if (!re.is_array() || !im.is_array() || re.size() != expected || im.size() != expected)
    throw input_error("re/im arrays must match the grid size");
  std::vector<cplx> out(expected);
  for (std::size_t i = 0; i < expected; ++i) out[i] = {re[i].get<double>(), im[i].get<double>()};
  return out;
}

inline Signal signal_from_json(const json& j) {
  try {
    const Grid g = grid_from_json(j);
    return Signal(g, read_parts(j.at("re"), j.at("im"), g.size()));
  } catch (const json::exception& e) {
    throw input_error(std::string("bad signal: ") + e.what());
  }
}

inline json kernel_json(const Kernel2D& K) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < K.n(); ++i) {
    json rr = json::array(), ii = json::array();
    for (int j = 0; j < K.n(); ++j) {
      rr.push_back(K(i, j).real());
      ii.push_back(K(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return json{{"grid", grid_json(K.grid)}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline Kernel2D kernel_from_json(const json& j) {
  try {
    const Grid g = grid_from_json(j.at("grid"));
    if (g.dim != 1) throw input_error("kernel grid must be 1-d");
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (!re.is_array() || !im.is_array() || re.size() != static_cast<std::size_t>(g.n) || im.size() != re.size())
      throw input_error("kernel rows must match the grid size");
    Kernel2D K(g);
    for (int i = 0; i < g.n; ++i) {
      const auto row = read_parts(re[i], im[i], g.n);
      std::copy(row.begin(), row.end(), K.values.begin() + static_cast<std::ptrdiff_t>(i) * g.n);
    }
    return K;
  } catch (const json::exception& e) {
    throw input_error(std::string("bad kernel: ") + e.what());
  }
}

/// Partition export; band arrays are stored sparse as index lists with values.
inline json partition_json(const AlphaPartition& P) {
  json bands = json::array(), eta = json::array();
  for (std::size_t pos = 0; pos < P.size(); ++pos) {
    const auto& b = P.bands[pos];
    bands.push_back(json{{"k", b.k}, {"center", b.center}, {"radius", b.radius}});
    eta.push_back(json{{"index", P.eta[pos].index}, {"value", P.eta[pos].value}});
  }
  return json{{"alpha", P.alpha}, {"C", P.C}, {"grid", grid_json(P.grid)}, {"bands", std::move(bands)},
              {"eta", std::move(eta)}};
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw input_error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

/// Writes to a sibling temporary file and renames it into place, so readers never see partial output.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw input_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// CSV text from a header and rows of already formatted cells.
inline std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

/// Shortest round-trip decimal form of a double, as used in JSON output.
inline std::string cell(double v) { return number(v).dump(); }

inline json band_report_json(const AlphaPartition& P, std::span<const double> per_band) {
  json a = json::array();
  for (std::size_t pos = 0; pos < P.size(); ++pos) a.push_back(json{{"k", P.bands[pos].k}, {"lp", number(per_band[pos])}});
  return a;
}

inline json partition_report_json(const AlphaPartition& P, const PartitionReport& R) {
  json bands = json::array();
  for (std::size_t pos = 0; pos < P.size(); ++pos)
    bands.push_back(json{{"k", P.bands[pos].k},
                         {"support_violations", R.support_violations[pos]},
                         {"scaled_gradient", number(R.scaled_gradient[pos])},
                         {"interior", static_cast<bool>(R.interior[pos])}});
  return json{{"max_sum_deviation", number(R.max_sum_deviation)},
              {"range_violations", R.range_violations},
              {"gradient_spread", number(R.gradient_spread)},
              {"min_cover", number(P.min_cover)},
              {"tolerances", {{"sum", R.sum_tolerance}, {"gradient_spread", R.spread_tolerance}}},
              {"bands", std::move(bands)},
              {"pass", R.pass}};
}

inline json boundedness_json(const BoundednessReport& R) {
  return json{{"params", {{"p", number(R.p)}, {"q", number(R.q)}, {"alpha", R.alpha}, {"lambda", R.options.lambda},
                          {"trials", R.options.trials}, {"seed", R.options.seed}}},
              {"values",
               {{"N1", {{"value", number(R.n1)}, {"source", "op_norm_empirical"}}},
                {"N2", {{"value", number(R.n2)}, {"source", "atom_image_bound"},
                        {"argmax", {{"k", R.n2_argmax.k}, {"shift", R.n2_argmax.shift}}}}},
                {"N3", {{"value", number(R.n3)}, {"source", "mixed_norm c1 (q,q,inf,inf)"}}}}},
              {"ratios", {{"N2/N1", number(R.r21)}, {"N3/N1", number(R.r31)}, {"N3/N2", number(R.r32)}}},
              {"tolerances", {{"band", R.options.band}}},
              {"pass", R.pass}};
}

inline json dual_json(const DualReport& R) {
  return json{{"params", {{"p", number(R.p)}, {"p_conjugate", number(R.p_conj)}, {"alpha", R.alpha},
                          {"lambda", R.options.lambda}, {"trials", R.options.trials}, {"seed", R.options.seed}}},
              {"values",
               {{"N1", {{"value", number(R.n1)}, {"source", "op_norm_empirical M^p -> M^inf"}}},
                {"N3", {{"value", number(R.n3)}, {"source", "mixed_norm c2 (p',p',inf,inf)"}}}}},
              {"ratios", {{"N1/N3", number(R.ratio)}}},
              {"tolerances", {{"band", R.options.band}}},
              {"pass", R.pass}};
}

inline json profile_json(const TailProfile& T) {
  json rows = json::array();
  for (std::size_t i = 0; i < T.levels.size(); ++i)
    rows.push_back(json{{"level", T.levels[i]}, {"sup_tail", number(T.values[i])}, {"ratio_to_total", number(T.ratio(i))}});
  return json{{"total", number(T.total)}, {"index_extent", T.extent}, {"levels", std::move(rows)}};
}

inline std::string profile_csv(const TailProfile& T) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < T.levels.size(); ++i)
    rows.push_back({std::to_string(T.levels[i]), cell(T.values[i]), cell(T.ratio(i))});
  return csv({"level", "sup_tail", "ratio_to_total"}, rows);
}

inline json compactness_json(const CompactnessReport& R) {
  return json{{"params", {{"p", number(R.p)}, {"q", number(R.q)}, {"alpha", R.alpha}, {"lambda", R.options.lambda}}},
              {"profile", profile_json(R.profile)},
              {"decisive_level", R.profile.levels[R.decisive_level]},
              {"decisive_ratio", number(R.decisive_ratio)},
              {"tolerances", {{"decay_threshold", R.options.decay_threshold},
                              {"plateau_threshold", R.options.plateau_threshold}}},
              {"verdict", to_string(R.verdict)}};
}

inline json gabor_kernel_json(const GaborKernelReport& R) {
  return json{{"params", {{"p", number(R.p)}, {"q", number(R.q)}, {"delta", R.delta}}},
              {"values",
               {{"N1", {{"value", number(R.n1)}, {"source", "empirical norm over gabor atoms"}}},
                {"N2", {{"value", number(R.n2)}, {"source", "kernel stft pattern sup_lambda l^q_mu"}}}}},
              {"ratios", {{"N1/N2", number(R.ratio)}}},
              {"route_deviation", number(R.route_deviation)},
              {"tolerances", {{"band", R.band}}},
              {"pass", R.pass}};
}

inline json gabor_compactness_json(const GaborCompactnessReport& R) {
  return json{{"params", {{"p", number(R.p)}, {"q", number(R.q)}, {"delta", R.delta}}},
              {"profile", profile_json(R.profile)},
              {"decisive_level", R.profile.levels[R.decisive_level]},
              {"decisive_ratio", number(R.decisive_ratio)},
              {"tolerances", {{"decay_threshold", R.options.decay_threshold},
                              {"plateau_threshold", R.options.plateau_threshold}}},
              {"verdict", to_string(R.verdict)}};
}

}  // namespace amk::io
