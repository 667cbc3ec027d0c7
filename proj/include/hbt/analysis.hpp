#pragma once

// Lieb-Thirring-type sums over detected eigenvalues, the Hilbert-Schmidt bound
// check, and the assembled spectral report.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hbt/distance.hpp"
#include "hbt/operators.hpp"
#include "hbt/spectra.hpp"
#include "hbt/symbol.hpp"

namespace hbt {

/// sum of dist(lambda, sigma(T_phi))^{3 + epsilon} over the F0 candidates.
inline double lt_sum(std::span<DiscreteCandidate const> candidates, SymbolCurve const& c, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "lt_sum: epsilon must be positive");
  double total = 0.0;
  for (auto const& cand : candidates) {
    if (cand.component != Component::F0) continue;
    double const d = dist_to_spectrum(c, cand.location);
    if (d > 0.0) total += std::pow(d, 3.0 + epsilon);
  }
  return total;
}

/// Fraction of the eigenvalues of the Bergman section of order N lying within
/// delta (default 0.1 W) of the filled spectrum of T_phi.
inline double weyl_diagnostic(HarmonicSymbol const& s, std::size_t N, std::optional<double> delta = {},
                              std::size_t curve_samples = 4096, std::size_t max_sweeps = 30) {
  if (N < 16) throw Error(ErrorKind::invalid_argument, "weyl_diagnostic needs N >= 16");
  double const tol = delta.value_or(0.1 * wiener_norm(s));
  SymbolCurve const c = sample_curve(s, std::max(curve_samples, min_curve_samples(s)));
  EigenResult const eig = eigenvalues(bt_section(s, N).entries, max_sweeps);
  std::size_t close = 0;
  for (auto e : eig.values)
    if (dist_to_spectrum(c, e) <= tol) ++close;
  return static_cast<double>(close) / static_cast<double>(eig.values.size());
}

/// Polyline-versus-curve error bound 2 pi sum_j j^2 |b_j| / M^2.
inline double curve_distance_error_bound(HarmonicSymbol const& s, std::size_t M) {
  double acc = 0.0;
  for (int j = -s.anti_degree(); j <= s.degree(); ++j) acc += double(j) * j * std::abs(s.coeff(j));
  return 2.0 * std::numbers::pi * acc / (double(M) * double(M));
}

struct ReportOptions {
  std::vector<std::size_t> ladder{200, 400, 800};
  double epsilon = 0.01;
  double series_tol = 1e-8;
  DetectionOptions detection{};
  std::size_t resolvent_order = 400;
  std::size_t resolvent_samples = 16;
  double resolvent_dmin = 0.05;  // times the Wiener norm
  double resolvent_dmax = 0.5;
  bool weyl = true;
};

struct SpectralReport {
  HarmonicSymbol symbol;
  double wiener_norm = 0.0;
  double derivative_norm_sq = 0.0;

  std::size_t curve_samples = 0;
  double dist_error_bound = 0.0;
  std::optional<CurveDiagnostics> diagnostics;  // empty for a single-point curve

  std::size_t hs_truncated_order = 0;
  double hs_truncated = 0.0;
  double hs_series = 0.0;
  double hs_series_tail_bound = 0.0;
  double hs_bound = 0.0;
  bool hs_bound_holds = true;

  std::vector<std::size_t> ladder;
  DetectionResult detection;

  double epsilon = 0.0;
  double lt_sum = 0.0;                 // certified and uncertified F0 candidates
  double lt_sum_certified_only = 0.0;
  std::optional<double> empirical_constant;  // lt_sum / ||phi'||^2
  std::optional<double> empirical_constant_certified_only;

  std::optional<GrowthFit> resolvent_fit;
  std::size_t resolvent_order = 0;
  std::optional<double> weyl_fraction;
  std::vector<std::string> notes;
};

namespace detail {

template <typename F>
auto run_stage(char const* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (StageError const&) {
    throw;
  } catch (Error const& e) {
    throw StageError(stage, e);
  }
}

}  // namespace detail

inline SpectralReport build_report(HarmonicSymbol const& s, ReportOptions const& opts = {}) {
  SpectralReport rep;
  rep.symbol = s;
  rep.wiener_norm = wiener_norm(s);
  rep.derivative_norm_sq = derivative_norm_sq(s);
  rep.epsilon = opts.epsilon;
  rep.ladder = opts.ladder;
  detail::run_stage("options", [&] {
    validate_ladder(opts.ladder);
    if (!(opts.epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
  });

  rep.curve_samples = std::max(opts.detection.curve_samples, min_curve_samples(s));
  rep.dist_error_bound = curve_distance_error_bound(s, rep.curve_samples);
  SymbolCurve const curve = detail::run_stage("curve", [&] { return sample_curve(s, rep.curve_samples); });
  try {
    rep.diagnostics = curve_diagnostics(curve);
  } catch (Error const& e) {
    if (e.kind() != ErrorKind::degenerate) throw StageError("diagnostics", e);
    rep.notes.push_back(std::string("curve diagnostics skipped: ") + e.what());
  }

  detail::run_stage("hilbert-schmidt", [&] {
    rep.hs_truncated_order = opts.ladder.back();
    rep.hs_truncated = hs_difference_sq_truncated(s, rep.hs_truncated_order);
    HsSeries const series = hs_difference_sq_series(s, opts.series_tol);
    rep.hs_series = series.value;
    rep.hs_series_tail_bound = series.tail_bound;
    rep.hs_bound = hs_bound(s);
    rep.hs_bound_holds = rep.hs_series <= rep.hs_bound + opts.series_tol;
  });

  rep.detection = detail::run_stage("detection", [&] { return detect_discrete(s, opts.ladder, opts.detection); });
  for (auto N : rep.detection.skipped_rungs)
    rep.notes.push_back("eigensolver did not converge at N = " + std::to_string(N) + "; rung skipped");

  detail::run_stage("lt-sum", [&] {
    std::vector<DiscreteCandidate> all = rep.detection.candidates;
    all.insert(all.end(), rep.detection.uncertified.begin(), rep.detection.uncertified.end());
    rep.lt_sum = lt_sum(all, curve, opts.epsilon);
    rep.lt_sum_certified_only = lt_sum(rep.detection.candidates, curve, opts.epsilon);
    if (rep.derivative_norm_sq > 0.0) {
      rep.empirical_constant = rep.lt_sum / rep.derivative_norm_sq;
      rep.empirical_constant_certified_only = rep.lt_sum_certified_only / rep.derivative_norm_sq;
    }
  });

  rep.resolvent_order = opts.resolvent_order;
  detail::run_stage("resolvent-fit", [&] {
    double const W = rep.wiener_norm;
    auto const pts = f0_sample_points(curve, opts.resolvent_dmin * W, opts.resolvent_dmax * W,
                                      opts.resolvent_samples);
    if (pts.size() < 8) {
      rep.notes.push_back("resolvent fit skipped: only " + std::to_string(pts.size()) + " F0 sample points");
      return;
    }
    rep.resolvent_fit = resolvent_growth_fit(s, pts, opts.resolvent_order, curve, opts.detection.sigma);
  });

  if (opts.weyl && opts.ladder.front() >= 16) {
    rep.weyl_fraction = detail::run_stage("weyl", [&] {
      return weyl_diagnostic(s, opts.ladder.front(), {}, rep.curve_samples, opts.detection.max_sweeps);
    });
  }
  return rep;
}

}  // namespace hbt
