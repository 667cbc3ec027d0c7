#pragma once

// CSV and JSON renderings of sections, spectra, pseudospectra and reports.

#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "hbt/analysis.hpp"
#include "hbt/spectra.hpp"
#include "hbt/symbol.hpp"

namespace hbt::io {

using json = nlohmann::ordered_json;

/// Shortest decimal form is not used; 17 significant digits keep CSVs bit-stable.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_eigenvalues_csv(std::ostream& os, std::span<cplx const> values) {
  os << "re,im\n";
  for (auto v : values) os << fmt17(v.real()) << ',' << fmt17(v.imag()) << '\n';
}

inline void write_pseudospectrum_csv(std::ostream& os, PseudospectrumField const& f,
                                     std::span<double const> svd_check = {}) {
  os << (svd_check.empty() ? "re,im,sigma_min\n" : "re,im,sigma_min,sigma_min_svd\n");
  for (std::size_t q = 0; q < f.ny; ++q)
    for (std::size_t p = 0; p < f.nx; ++p) {
      cplx const z = f.node(p, q);
      os << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(f.value(p, q));
      if (!svd_check.empty()) os << ',' << fmt17(svd_check[q * f.nx + p]);
      os << '\n';
    }
}

inline void write_curve_csv(std::ostream& os, SymbolCurve const& c) {
  os << "re,im,tangent_re,tangent_im\n";
  for (std::size_t k = 0; k < c.size(); ++k)
    os << fmt17(c.points[k].real()) << ',' << fmt17(c.points[k].imag()) << ','
       << fmt17(c.tangents[k].real()) << ',' << fmt17(c.tangents[k].imag()) << '\n';
}

// Adding 0.0 turns a signed zero into +0.
inline json to_json(cplx z) { return json::array({z.real() + 0.0, z.imag() + 0.0}); }

template <typename T>
json to_json(std::optional<T> const& v) {
  if (!v) return nullptr;
  return json(*v);
}

inline json symbol_to_json(HarmonicSymbol const& s) {
  json f = json::array(), g = json::array();
  for (auto v : s.analytic_part()) f.push_back(to_json(v));
  for (auto v : s.anti_analytic_part()) g.push_back(to_json(v));
  json coeffs = json::array();
  for (auto const& [j, b] : s.coefficients()) coeffs.push_back({{"j", j}, {"b", to_json(b)}});
  return {{"f", f}, {"g", g}, {"m", s.anti_degree()}, {"n", s.degree()}, {"coefficients", coeffs}};
}

inline json candidate_to_json(DiscreteCandidate const& c) {
  return {{"location", to_json(c.location)},
          {"persistence_drift", c.persistence_drift},
          {"certificate", c.certificate},
          {"component", to_string(c.component)},
          {"multiplicity", c.multiplicity}};
}

inline json candidates_to_json(std::span<DiscreteCandidate const> cs) {
  json out = json::array();
  for (auto const& c : cs) out.push_back(candidate_to_json(c));
  return out;
}

inline json diagnostics_to_json(std::optional<CurveDiagnostics> const& d) {
  if (!d) return nullptr;
  return {{"jordan", d->jordan},
          {"cusp_free", d->cusp_free},
          {"min_tangent_speed", d->min_tangent_speed},
          {"max_tangent_speed", d->max_tangent_speed},
          {"min_self_distance", d->min_self_distance}};
}

inline json report_to_json(SpectralReport const& r) {
  json fit = nullptr;
  if (r.resolvent_fit)
    fit = {{"p_hat", r.resolvent_fit->p_hat},
           {"c_hat", r.resolvent_fit->c_hat},
           {"samples", r.resolvent_fit->samples},
           {"order", r.resolvent_order}};
  return {
      {"symbol", symbol_to_json(r.symbol)},
      {"wiener_norm", r.wiener_norm},
      {"derivative_norm_sq", r.derivative_norm_sq},
      {"curve",
       {{"samples", r.curve_samples},
        {"dist_error_bound", r.dist_error_bound},
        {"diagnostics", diagnostics_to_json(r.diagnostics)}}},
      {"hs_truncated_order", r.hs_truncated_order},
      {"hs_truncated", r.hs_truncated},
      {"hs_series", r.hs_series},
      {"hs_series_tail_bound", r.hs_series_tail_bound},
      {"hs_bound", r.hs_bound},
      {"hs_bound_holds", r.hs_bound_holds},
      {"ladder", r.ladder},
      {"thresholds",
       {{"delta_curve", r.detection.delta_curve},
        {"drift_tol", r.detection.drift_tol},
        {"cert_tol", r.detection.cert_tol},
        {"certified_order", r.detection.certified_order}}},
      {"candidates", candidates_to_json(r.detection.candidates)},
      {"uncertified_candidates", candidates_to_json(r.detection.uncertified)},
      {"skipped_rungs", r.detection.skipped_rungs},
      {"epsilon", r.epsilon},
      {"lt_sum", r.lt_sum},
      {"lt_sum_certified_only", r.lt_sum_certified_only},
      {"empirical_constant", to_json(r.empirical_constant)},
      {"empirical_constant_certified_only", to_json(r.empirical_constant_certified_only)},
      {"resolvent_fit", fit},
      {"weyl_fraction", to_json(r.weyl_fraction)},
      {"notes", r.notes},
  };
}

/// Aligned two-column plain-text summary.
inline void write_report_summary(std::ostream& os, SpectralReport const& r) {
  auto row = [&](std::string const& k, std::string const& v) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-30s %s\n", k.c_str(), v.c_str());
    os << buf;
  };
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  row("degrees (m, n)", std::to_string(r.symbol.anti_degree()) + ", " + std::to_string(r.symbol.degree()));
  row("wiener norm", num(r.wiener_norm));
  row("||phi'||_2^2", num(r.derivative_norm_sq));
  if (r.diagnostics) {
    row("curve jordan", r.diagnostics->jordan ? "yes" : "no");
    row("curve cusp-free", r.diagnostics->cusp_free ? "yes" : "no");
  }
  row("hs truncated (N=" + std::to_string(r.hs_truncated_order) + ")", num(r.hs_truncated));
  row("hs series", num(r.hs_series) + " (+/- " + num(r.hs_series_tail_bound) + ")");
  row("hs bound pi^2/24 ||phi'||^2", num(r.hs_bound) + (r.hs_bound_holds ? "  holds" : "  VIOLATED"));
  row("certified candidates", std::to_string(r.detection.candidates.size()));
  row("uncertified candidates", std::to_string(r.detection.uncertified.size()));
  row("epsilon", num(r.epsilon));
  row("lt sum", num(r.lt_sum));
  row("lt sum (certified only)", num(r.lt_sum_certified_only));
  row("empirical constant", r.empirical_constant ? num(*r.empirical_constant) : "n/a");
  row("resolvent p_hat",
      r.resolvent_fit ? num(r.resolvent_fit->p_hat) + " (c_hat " + num(r.resolvent_fit->c_hat) + ")" : "n/a");
  row("weyl fraction", r.weyl_fraction ? num(*r.weyl_fraction) : "n/a");
  for (auto const& n : r.notes) row("note", n);
}

}  // namespace hbt::io
