#pragma once

// Candidate discrete eigenvalues of the Bergman-Toeplitz operator from a ladder
// of finite sections, pseudospectral certification, and classification of
// points relative to the Fredholm components of the symbol curve.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hbt/distance.hpp"
#include "hbt/linalg.hpp"
#include "hbt/operators.hpp"
#include "hbt/symbol.hpp"

namespace hbt {

struct Region {
  cplx lower_left;
  cplx upper_right;

  bool empty() const noexcept {
    return !(upper_right.real() > lower_left.real()) || !(upper_right.imag() > lower_left.imag());
  }
};

/// sigma_min(A_N - lambda) on a uniform nx x ny grid. Values are stored with the
/// real-axis index fastest: value(p, q) = sigma_min[q * nx + p].
struct PseudospectrumField {
  Region region;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> sigma_min;
  std::size_t section_order = 0;

  cplx node(std::size_t p, std::size_t q) const {
    double const x = region.lower_left.real() +
                     (region.upper_right.real() - region.lower_left.real()) * static_cast<double>(p) /
                         static_cast<double>(nx - 1);
    double const y = region.lower_left.imag() +
                     (region.upper_right.imag() - region.lower_left.imag()) * static_cast<double>(q) /
                         static_cast<double>(ny - 1);
    return {x, y};
  }
  double value(std::size_t p, std::size_t q) const { return sigma_min[q * nx + p]; }
};

inline PseudospectrumField pseudospectrum(ComplexMatrix const& A, Region const& region, std::size_t nx,
                                          std::size_t ny, SigmaMinOptions const& opts = {}) {
  if (region.empty()) throw Error(ErrorKind::invalid_argument, "pseudospectrum: empty region");
  if (nx < 2 || ny < 2) throw Error(ErrorKind::invalid_argument, "pseudospectrum: grid needs nx, ny >= 2");
  PseudospectrumField field{region, nx, ny, std::vector<double>(nx * ny), A.rows()};
  for (std::size_t q = 0; q < ny; ++q)
    for (std::size_t p = 0; p < nx; ++p)
      field.sigma_min[q * nx + p] = smallest_singular_value(A, field.node(p, q), opts);
  return field;
}

inline PseudospectrumField pseudospectrum(FiniteSection const& sec, Region const& region, std::size_t nx,
                                          std::size_t ny, SigmaMinOptions const& opts = {}) {
  return pseudospectrum(sec.entries, region, nx, ny, opts);
}

// ---------------------------------------------------------------------------
// Classification

enum class Component { F0, boundedHole, nearEssential };

inline char const* to_string(Component c) {
  switch (c) {
    case Component::F0: return "F0";
    case Component::boundedHole: return "boundedHole";
    case Component::nearEssential: return "nearEssential";
  }
  return "unknown";
}

namespace detail {

/// True when the segment [a, b] stays clear of the polyline.
inline bool segment_clears_curve(SymbolCurve const& c, cplx a, cplx b, double tol) {
  std::size_t const M = c.size();
  for (std::size_t k = 0; k < M; ++k)
    if (geometry::segment_distance(a, b, c.points[k], c.points[(k + 1) % M]) <= tol) return false;
  return true;
}

}  // namespace detail

/// Classifies lambda as near the essential spectrum, in the unbounded Fredholm
/// component F0, or in a bounded component.
///
/// Winding zero is necessary for F0. Unless the curve is known to be Jordan,
/// a straight ray from lambda out to radius 2 * scale + 1 must also reach
/// infinity without touching the curve; the outward radial direction is tried
/// first, then 64 evenly spaced directions. Winding-zero points that no ray
/// frees are reported as boundedHole.
inline Component classify(cplx lambda, SymbolCurve const& c, double delta_curve, bool curve_is_jordan = false) {
  double const d = dist_to_curve(c, lambda);
  double const scale = c.scale();
  if (d <= 1e-12 * scale) throw Error(ErrorKind::on_curve, "classify: point lies on the curve");
  if (d < delta_curve) return Component::nearEssential;
  if (winding_number(c, lambda) != 0) return Component::boundedHole;
  if (curve_is_jordan) return Component::F0;

  double const reach = 2.0 * scale + 1.0 + std::abs(lambda);
  double const tol = 1e-12 * std::max(scale, 1.0);
  cplx const radial = std::abs(lambda) > 0.0 ? lambda / std::abs(lambda) : cplx{1.0, 0.0};
  if (detail::segment_clears_curve(c, lambda, lambda + reach * radial, tol)) return Component::F0;
  for (int k = 0; k < 64; ++k) {
    cplx const dir = std::polar(1.0, 2.0 * std::numbers::pi * k / 64.0);
    if (detail::segment_clears_curve(c, lambda, lambda + reach * dir, tol)) return Component::F0;
  }
  return Component::boundedHole;
}

// ---------------------------------------------------------------------------
// Ladder detection

struct DiscreteCandidate {
  cplx location;
  /// Total path length of the eigenvalue chain across the ladder.
  double persistence_drift = 0.0;
  /// sigma_min(A_Nmax - location).
  double certificate = 0.0;
  Component component = Component::F0;
  /// Number of chains that merged into this location.
  std::size_t multiplicity = 1;
};

struct RungSpectrum {
  std::size_t order = 0;
  std::vector<cplx> values;
  bool converged = false;
  std::size_t sweeps = 0;
};

struct DetectionThresholds {
  double delta_curve = 0.0;
  double drift_tol = 0.0;
  std::optional<double> cert_tol;  // defaults to 1e-6 ||A_Nmax||_F
};

struct DetectionOptions {
  std::optional<double> delta_curve;  // default 0.05 * wiener_norm
  std::optional<double> drift_tol;    // default 1e-3 * wiener_norm
  std::optional<double> cert_tol;     // default 1e-6 * ||A_Nmax||_F
  std::size_t curve_samples = 4096;
  std::size_t max_sweeps = 30;
  SigmaMinOptions sigma{};
};

struct DetectionResult {
  std::vector<DiscreteCandidate> candidates;   // certified
  std::vector<DiscreteCandidate> uncertified;  // persistent but certificate >= cert_tol
  std::vector<std::size_t> skipped_rungs;      // eigensolver did not converge
  double delta_curve = 0.0;
  double drift_tol = 0.0;
  double cert_tol = 0.0;
  std::size_t certified_order = 0;
};

inline void validate_ladder(std::span<std::size_t const> ladder) {
  if (ladder.size() < 3) throw Error(ErrorKind::invalid_argument, "ladder needs at least 3 rungs");
  if (ladder.front() < 1) throw Error(ErrorKind::invalid_argument, "ladder orders must be positive");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] <= ladder[i - 1])
      throw Error(ErrorKind::invalid_argument, "ladder must be strictly increasing");
}

/// Eigenvalues of section(N) for each rung; `section` maps N to an N x N matrix.
template <typename SectionFamily>
std::vector<RungSpectrum> ladder_spectra(SectionFamily&& section, std::span<std::size_t const> ladder,
                                         std::size_t max_sweeps = 30) {
  std::vector<RungSpectrum> rungs;
  rungs.reserve(ladder.size());
  for (std::size_t N : ladder) {
    EigenResult r = eigenvalues(section(N), max_sweeps);
    rungs.push_back({N, std::move(r.values), r.converged, r.sweeps});
  }
  return rungs;
}

struct EigenChain {
  std::vector<cplx> path;
  double drift = 0.0;
};

/// Greedy nearest-neighbour chaining of the eigenvalues away from the curve.
///
/// Eigenvalues within delta_curve of the curve are dropped. A chain starts at
/// each surviving eigenvalue of the first converged rung (in index order) and
/// extends to the nearest unused eigenvalue of the next rung within drift_tol,
/// ties going to the smaller index. Chains that reach the last converged rung
/// with total drift below drift_tol are returned.
inline std::vector<EigenChain> chain_rungs(std::span<RungSpectrum const> rungs, SymbolCurve const& c,
                                           double delta_curve, double drift_tol) {
  std::vector<std::vector<cplx>> kept;
  for (auto const& r : rungs) {
    if (!r.converged) continue;
    std::vector<cplx> v;
    for (auto e : r.values)
      if (dist_to_curve(c, e) >= delta_curve) v.push_back(e);
    kept.push_back(std::move(v));
  }
  std::vector<EigenChain> chains;
  if (kept.size() < 2) return chains;

  std::vector<std::vector<bool>> used(kept.size());
  for (std::size_t r = 0; r < kept.size(); ++r) used[r].assign(kept[r].size(), false);

  for (auto start : kept.front()) {
    EigenChain chain{{start}, 0.0};
    bool alive = true;
    for (std::size_t r = 1; r < kept.size() && alive; ++r) {
      cplx const cur = chain.path.back();
      std::size_t best = kept[r].size();
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < kept[r].size(); ++i) {
        if (used[r][i]) continue;
        double const d = std::abs(kept[r][i] - cur);
        if (d < best_d) { best_d = d; best = i; }
      }
      if (best == kept[r].size() || best_d > drift_tol) {
        alive = false;
        break;
      }
      used[r][best] = true;
      chain.drift += best_d;
      chain.path.push_back(kept[r][best]);
    }
    if (alive && chain.drift < drift_tol) chains.push_back(std::move(chain));
  }
  return chains;
}

namespace detail {

inline bool location_less(DiscreteCandidate const& a, DiscreteCandidate const& b) {
  if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
  return a.location.imag() < b.location.imag();
}

/// Merges candidates closer than `radius`, keeping the first one's data.
inline std::vector<DiscreteCandidate> merge_close(std::vector<DiscreteCandidate> in, double radius) {
  std::vector<DiscreteCandidate> out;
  for (auto const& c : in) {
    auto it = std::find_if(out.begin(), out.end(), [&](DiscreteCandidate const& o) {
      return std::abs(o.location - c.location) <= radius;
    });
    if (it == out.end()) {
      out.push_back(c);
    } else {
      it->multiplicity += c.multiplicity;
      it->persistence_drift = std::max(it->persistence_drift, c.persistence_drift);
      it->certificate = std::max(it->certificate, c.certificate);
    }
  }
  std::sort(out.begin(), out.end(), location_less);
  return out;
}

}  // namespace detail

/// Certifies and classifies the chains of a precomputed ladder.
///
/// `largest` is the section at the largest converged rung; every chain ends
/// there. Candidates whose certificate reaches cert_tol go to `uncertified`.
inline DetectionResult detect_from_rungs(std::span<RungSpectrum const> rungs, ComplexMatrix const& largest,
                                         SymbolCurve const& c, DetectionThresholds const& thr,
                                         bool curve_is_jordan = false, SigmaMinOptions const& sigma = {}) {
  DetectionResult res;
  res.delta_curve = thr.delta_curve;
  res.drift_tol = thr.drift_tol;
  res.cert_tol = thr.cert_tol.value_or(1e-6 * frobenius_norm(largest));
  res.certified_order = largest.rows();
  for (auto const& r : rungs)
    if (!r.converged) res.skipped_rungs.push_back(r.order);

  std::vector<DiscreteCandidate> certified, rejected;
  for (auto const& chain : chain_rungs(rungs, c, thr.delta_curve, thr.drift_tol)) {
    DiscreteCandidate cand;
    cand.location = chain.path.back();
    cand.persistence_drift = chain.drift;
    cand.certificate = smallest_singular_value(largest, cand.location, sigma);
    cand.component = classify(cand.location, c, thr.delta_curve, curve_is_jordan);
    (cand.certificate < res.cert_tol ? certified : rejected).push_back(cand);
  }
  res.candidates = detail::merge_close(std::move(certified), thr.drift_tol);
  res.uncertified = detail::merge_close(std::move(rejected), thr.drift_tol);
  return res;
}

/// Ladder detection over an arbitrary family of sections.
template <typename SectionFamily>
DetectionResult detect_discrete(SectionFamily&& section, SymbolCurve const& c, std::span<std::size_t const> ladder,
                                DetectionThresholds const& thr, bool curve_is_jordan = false,
                                std::size_t max_sweeps = 30, SigmaMinOptions const& sigma = {}) {
  validate_ladder(ladder);
  auto rungs = ladder_spectra(section, ladder, max_sweeps);
  auto last = std::find_if(rungs.rbegin(), rungs.rend(), [](RungSpectrum const& r) { return r.converged; });
  if (last == rungs.rend()) {
    DetectionResult res;
    res.delta_curve = thr.delta_curve;
    res.drift_tol = thr.drift_tol;
    for (auto const& r : rungs) res.skipped_rungs.push_back(r.order);
    return res;
  }
  return detect_from_rungs(rungs, section(last->order), c, thr, curve_is_jordan, sigma);
}

/// Default thresholds for a symbol: delta_curve = 0.05 W, drift_tol = 1e-3 W,
/// W the Wiener norm. cert_tol stays relative to the largest section.
inline DetectionThresholds default_thresholds(HarmonicSymbol const& s, DetectionOptions const& opts = {}) {
  double const W = wiener_norm(s);
  return {opts.delta_curve.value_or(0.05 * W), opts.drift_tol.value_or(1e-3 * W), opts.cert_tol};
}

/// Ladder detection on the Bergman-Toeplitz sections of s.
inline DetectionResult detect_discrete(HarmonicSymbol const& s, std::span<std::size_t const> ladder,
                                       DetectionOptions const& opts = {}) {
  validate_ladder(ladder);
  SymbolCurve const c = sample_curve(s, std::max(opts.curve_samples, min_curve_samples(s)));
  DetectionResult res;
  if (s.is_constant()) {
    // Every section is b_0 I and b_0 is the whole curve.
    res.delta_curve = 0.05 * wiener_norm(s);
    res.drift_tol = 1e-3 * wiener_norm(s);
    res.cert_tol = opts.cert_tol.value_or(1e-6 * std::abs(s.coeff(0)) * std::sqrt(double(ladder.back())));
    res.certified_order = ladder.back();
    return res;
  }
  return detect_discrete([&](std::size_t N) { return bt_section(s, N).entries; }, c, ladder,
                         default_thresholds(s, opts), false, opts.max_sweeps, opts.sigma);
}

// ---------------------------------------------------------------------------
// Resolvent growth

struct GrowthFit {
  double p_hat = 0.0;
  double c_hat = 0.0;
  std::size_t samples = 0;
};

/// Least-squares fit of log ||(A_N - z)^{-1}|| = -p log dist(z, sigma(T_phi)) + log c
/// over points z in F0, with A_N the Hardy-Toeplitz section of order N.
inline GrowthFit resolvent_growth_fit(HarmonicSymbol const& s, std::span<cplx const> samples, std::size_t N,
                                      SymbolCurve const& c, SigmaMinOptions const& opts = {}) {
  if (samples.size() < 8)
    throw Error(ErrorKind::insufficient_samples, "resolvent_growth_fit needs at least 8 sample points");
  FiniteSection const A = ht_section(s, N);
  std::vector<double> xs, ys;
  for (cplx z : samples) {
    double const d = dist_to_spectrum(c, z);
    if (!(d > 0.0)) throw Error(ErrorKind::invalid_argument, "resolvent_growth_fit: sample lies in the spectrum");
    double const sig = smallest_singular_value(A.entries, z, opts);
    if (!(sig > 0.0)) throw Error(ErrorKind::singular, "resolvent_growth_fit: section is singular at a sample");
    xs.push_back(std::log(d));
    ys.push_back(-std::log(sig));
  }
  double const n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 1e-12 * n)
    throw Error(ErrorKind::degenerate, "resolvent_growth_fit: sample distances do not vary");
  double const slope = sxy / sxx;
  return {-slope, std::exp(my - slope * mx), samples.size()};
}

/// Up to `count` points of F0 at distances spread geometrically over
/// [d_min, d_max] from sigma(T_phi), found by stepping off the curve along its
/// normals. Returns fewer points when the geometry does not allow it.
inline std::vector<cplx> f0_sample_points(SymbolCurve const& c, double d_min, double d_max, std::size_t count,
                                          double delta_curve = 0.0) {
  std::vector<cplx> pts;
  std::size_t const M = c.size();
  if (count == 0 || M == 0 || !(d_max >= d_min) || !(d_min > 0.0)) return pts;
  std::size_t const attempts = 8 * count;
  for (std::size_t a = 0; a < attempts && pts.size() < count; ++a) {
    std::size_t const i = pts.size();
    double const frac = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
    double const target = d_min * std::pow(d_max / d_min, frac);
    // Spread the base points around the curve; golden-ratio stride avoids repeats.
    std::size_t const k = static_cast<std::size_t>(std::fmod(0.6180339887 * static_cast<double>(a) * M, double(M)));
    cplx const t = c.tangents[k];
    if (std::abs(t) == 0.0) continue;
    cplx const normal = cplx{0.0, -1.0} * t / std::abs(t);
    for (double sign : {1.0, -1.0}) {
      cplx const z = c.points[k] + sign * target * normal;
      double const d = dist_to_spectrum(c, z);
      if (std::abs(d - target) > 0.02 * target) continue;
      if (classify(z, c, delta_curve) != Component::F0) continue;
      pts.push_back(z);
      break;
    }
  }
  return pts;
}

}  // namespace hbt
