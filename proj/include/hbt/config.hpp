#pragma once

// Experiment configuration: one JSON document per run.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbt/analysis.hpp"
#include "hbt/spectra.hpp"
#include "hbt/symbol.hpp"

namespace hbt {

struct RunConfig {
  HarmonicSymbol symbol;
  std::vector<std::size_t> ladder{200, 400, 800};
  SectionKind section = SectionKind::BT;
  std::optional<Region> region;  // default: box of half-width 1.25 W around 0
  std::size_t nx = 41;
  std::size_t ny = 41;
  std::optional<std::size_t> pseudospectrum_order;  // default: first ladder rung
  double epsilon = 0.01;
  std::optional<double> delta_curve;
  std::optional<double> drift_tol;
  std::optional<double> cert_tol;
  double series_tol = 1e-8;
  std::size_t curve_samples = 4096;
  std::size_t resolvent_order = 400;
  std::filesystem::path output_dir = "out";

  ReportOptions report_options() const {
    ReportOptions o;
    o.ladder = ladder;
    o.epsilon = epsilon;
    o.series_tol = series_tol;
    o.detection.delta_curve = delta_curve;
    o.detection.drift_tol = drift_tol;
    o.detection.cert_tol = cert_tol;
    o.detection.curve_samples = curve_samples;
    o.resolvent_order = resolvent_order;
    return o;
  }

  Region effective_region() const {
    if (region) return *region;
    double const h = 1.25 * std::max(wiener_norm(symbol), 1e-3);
    return {{-h, -h}, {h, h}};
  }
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void config_error(std::string const& field, std::string const& msg) {
  throw Error(ErrorKind::parse, "config field '" + field + "': " + msg);
}

inline double number_at(json const& j, std::string const& field) {
  if (!j.is_number()) config_error(field, "expected a number");
  return j.get<double>();
}

inline std::size_t count_at(json const& j, std::string const& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1) config_error(field, "expected a positive integer");
  return j.get<std::size_t>();
}

inline double positive_at(json const& j, std::string const& field) {
  double const v = number_at(j, field);
  if (!(v > 0.0)) config_error(field, "must be positive");
  return v;
}

inline std::vector<cplx> coefficient_list(json const& j, std::string const& field) {
  if (!j.is_array()) config_error(field, "expected an array of [re, im] pairs");
  std::vector<cplx> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    std::string const f = field + "[" + std::to_string(k) + "]";
    json const& e = j[k];
    if (e.is_number()) {
      out.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    } else {
      config_error(f, "expected [re, im]");
    }
  }
  return out;
}

}  // namespace detail

inline nlohmann::json read_json_file(std::filesystem::path const& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return nlohmann::json::parse(ss.str());
  } catch (nlohmann::json::parse_error const& e) {
    throw Error(ErrorKind::parse, path.string() + ": malformed JSON: " + e.what());
  }
}

/// Symbol document {"f": [[re, im], ...], "g": [[re, im], ...]}; both keys optional.
inline HarmonicSymbol parse_symbol(nlohmann::json const& j, std::string const& field = "symbol") {
  if (!j.is_object()) detail::config_error(field, "expected an object with keys f and g");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "f" && it.key() != "g") detail::config_error(field + "." + it.key(), "unknown key");
  std::vector<cplx> f, g;
  if (j.contains("f")) f = detail::coefficient_list(j["f"], field + ".f");
  if (j.contains("g")) g = detail::coefficient_list(j["g"], field + ".g");
  return HarmonicSymbol::from_parts(f, g);
}

/// Parses a run configuration. A string-valued "symbol" names a symbol file
/// resolved relative to `base_dir`.
inline RunConfig parse_config(nlohmann::json const& j, std::filesystem::path const& base_dir = ".") {
  using detail::config_error;
  if (!j.is_object()) config_error("<root>", "expected a JSON object");
  static char const* const known[] = {"symbol",         "ladder",   "section",       "region",
                                      "grid",           "pseudospectrum_order",    "epsilon",
                                      "tolerances",     "curve_samples", "resolvent_order",
                                      "output_dir"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto k : known) ok = ok || it.key() == k;
    if (!ok) config_error(it.key(), "unknown key");
  }

  RunConfig cfg;
  if (!j.contains("symbol")) config_error("symbol", "missing");
  if (j["symbol"].is_string()) {
    auto path = std::filesystem::path(j["symbol"].get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    cfg.symbol = parse_symbol(read_json_file(path), "symbol");
  } else {
    cfg.symbol = parse_symbol(j["symbol"]);
  }

  if (j.contains("ladder")) {
    auto const& l = j["ladder"];
    if (!l.is_array() || l.empty()) config_error("ladder", "expected a non-empty array of orders");
    cfg.ladder.clear();
    for (std::size_t k = 0; k < l.size(); ++k)
      cfg.ladder.push_back(detail::count_at(l[k], "ladder[" + std::to_string(k) + "]"));
    for (std::size_t k = 1; k < cfg.ladder.size(); ++k)
      if (cfg.ladder[k] <= cfg.ladder[k - 1]) config_error("ladder", "must be strictly increasing");
  }
  if (j.contains("section")) {
    auto const& s = j["section"];
    if (s == "bt" || s == "BT") cfg.section = SectionKind::BT;
    else if (s == "ht" || s == "HT") cfg.section = SectionKind::HT;
    else config_error("section", "expected \"bt\" or \"ht\"");
  }
  if (j.contains("region")) {
    auto const& r = j["region"];
    if (!r.is_object()) config_error("region", "expected {re_min, re_max, im_min, im_max}");
    for (auto k : {"re_min", "re_max", "im_min", "im_max"})
      if (!r.contains(k)) config_error(std::string("region.") + k, "missing");
    Region reg{{detail::number_at(r["re_min"], "region.re_min"), detail::number_at(r["im_min"], "region.im_min")},
               {detail::number_at(r["re_max"], "region.re_max"), detail::number_at(r["im_max"], "region.im_max")}};
    if (reg.empty()) config_error("region", "empty region");
    cfg.region = reg;
  }
  if (j.contains("grid")) {
    auto const& g = j["grid"];
    if (!g.is_object()) config_error("grid", "expected {nx, ny}");
    if (g.contains("nx")) cfg.nx = detail::count_at(g["nx"], "grid.nx");
    if (g.contains("ny")) cfg.ny = detail::count_at(g["ny"], "grid.ny");
    if (cfg.nx < 2 || cfg.ny < 2) config_error("grid", "nx and ny must be at least 2");
  }
  if (j.contains("pseudospectrum_order"))
    cfg.pseudospectrum_order = detail::count_at(j["pseudospectrum_order"], "pseudospectrum_order");
  if (j.contains("epsilon")) cfg.epsilon = detail::positive_at(j["epsilon"], "epsilon");
  if (j.contains("tolerances")) {
    auto const& t = j["tolerances"];
    if (!t.is_object()) config_error("tolerances", "expected an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      std::string const f = "tolerances." + it.key();
      if (it.key() == "delta_curve") cfg.delta_curve = detail::positive_at(*it, f);
      else if (it.key() == "drift_tol") cfg.drift_tol = detail::positive_at(*it, f);
      else if (it.key() == "cert_tol") cfg.cert_tol = detail::positive_at(*it, f);
      else if (it.key() == "series_tol") cfg.series_tol = detail::positive_at(*it, f);
      else config_error(f, "unknown key");
    }
  }
  if (j.contains("curve_samples")) cfg.curve_samples = detail::count_at(j["curve_samples"], "curve_samples");
  if (j.contains("resolvent_order"))
    cfg.resolvent_order = detail::count_at(j["resolvent_order"], "resolvent_order");
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) config_error("output_dir", "expected a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  return cfg;
}

inline RunConfig load_config(std::filesystem::path const& path) {
  return parse_config(read_json_file(path), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace hbt
