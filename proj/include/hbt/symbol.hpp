#pragma once

// Harmonic symbols phi = conj(g) + f with trigonometric-polynomial parts and
// the sampled boundary curve gamma = phi(T).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hbt/core.hpp"

namespace hbt {

/// Fourier coefficients b_j, j in [-m, n], of phi(e^{i theta}) = sum_j b_j e^{i j theta}.
///
/// Negative indices carry the conjugated anti-analytic part, non-negative
/// indices the analytic part. Trailing zero coefficients are trimmed so that
/// m and n are the true degrees; the default-constructed object is the zero
/// symbol.
class HarmonicSymbol {
 public:
  HarmonicSymbol() = default;

  /// phi = conj(g) + f. b_0 merges f_0 and conj(g_0).
  static HarmonicSymbol from_parts(std::span<cplx const> f, std::span<cplx const> g) {
    std::map<int, cplx> b;
    for (std::size_t k = 0; k < f.size(); ++k) b[static_cast<int>(k)] += f[k];
    for (std::size_t k = 0; k < g.size(); ++k) b[-static_cast<int>(k)] += std::conj(g[k]);
    return from_coefficients(b);
  }

  static HarmonicSymbol from_coefficients(std::map<int, cplx> const& b) {
    HarmonicSymbol s;
    int lo = 0, hi = 0;
    for (auto const& [j, v] : b) {
      if (v == cplx{}) continue;
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
    s.m_ = -lo;
    s.n_ = hi;
    s.b_.assign(static_cast<std::size_t>(s.m_ + s.n_ + 1), cplx{});
    for (auto const& [j, v] : b) {
      if (v == cplx{}) continue;
      s.b_[static_cast<std::size_t>(j + s.m_)] = v;
    }
    for (auto const& v : s.b_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(ErrorKind::invalid_argument, "symbol coefficient is not finite");
    }
    return s;
  }

  /// b_j; zero outside [-m, n].
  cplx coeff(int j) const {
    if (j < -m_ || j > n_) return {};
    return b_[static_cast<std::size_t>(j + m_)];
  }

  int anti_degree() const noexcept { return m_; }
  int degree() const noexcept { return n_; }

  bool is_zero() const noexcept {
    return std::all_of(b_.begin(), b_.end(), [](cplx v) { return v == cplx{}; });
  }
  bool is_constant() const noexcept { return m_ == 0 && n_ == 0; }

  /// Nonzero coefficients keyed by index.
  std::map<int, cplx> coefficients() const {
    std::map<int, cplx> out;
    for (int j = -m_; j <= n_; ++j)
      if (coeff(j) != cplx{}) out[j] = coeff(j);
    return out;
  }

  /// f_k = b_k for k >= 1, f_0 = b_0 (the constant is kept on the analytic side).
  std::vector<cplx> analytic_part() const {
    std::vector<cplx> f(static_cast<std::size_t>(n_ + 1));
    for (int k = 0; k <= n_; ++k) f[static_cast<std::size_t>(k)] = coeff(k);
    return f;
  }
  /// g_k = conj(b_{-k}) for k >= 1, g_0 = 0.
  std::vector<cplx> anti_analytic_part() const {
    std::vector<cplx> g(static_cast<std::size_t>(m_ + 1));
    for (int k = 1; k <= m_; ++k) g[static_cast<std::size_t>(k)] = std::conj(coeff(-k));
    return g;
  }

 private:
  int m_ = 0;
  int n_ = 0;
  std::vector<cplx> b_{cplx{}};
};

/// phi(e^{i theta}) = sum_j b_j e^{i j theta}.
inline cplx eval_boundary(HarmonicSymbol const& s, double theta) {
  cplx acc{};
  for (int j = -s.anti_degree(); j <= s.degree(); ++j) {
    cplx const b = s.coeff(j);
    if (b == cplx{}) continue;
    acc += b * std::polar(1.0, j * theta);
  }
  return acc;
}

/// d phi / d theta = sum_j i j b_j e^{i j theta}.
inline cplx eval_tangent(HarmonicSymbol const& s, double theta) {
  cplx acc{};
  for (int j = -s.anti_degree(); j <= s.degree(); ++j) {
    cplx const b = s.coeff(j);
    if (b == cplx{} || j == 0) continue;
    acc += cplx{0.0, static_cast<double>(j)} * b * std::polar(1.0, j * theta);
  }
  return acc;
}

/// Harmonic extension to the open disk: sum_j b_j r^{|j|} e^{i j theta}, z = r e^{i theta}.
inline cplx eval_disk(HarmonicSymbol const& s, cplx z) {
  double const r = std::abs(z);
  if (!(r < 1.0))
    throw Error(ErrorKind::domain, "eval_disk requires |z| < 1");
  cplx acc = s.coeff(0);
  // z^k for the analytic part, conj(z)^k for the anti-analytic part.
  cplx zk{1.0, 0.0};
  for (int k = 1; k <= std::max(s.degree(), s.anti_degree()); ++k) {
    zk *= z;
    acc += s.coeff(k) * zk + s.coeff(-k) * std::conj(zk);
  }
  return acc;
}

/// ||phi'||_2^2 with respect to normalized arc length: sum_l l^2 |b_l|^2.
inline double derivative_norm_sq(HarmonicSymbol const& s) {
  double acc = 0.0;
  for (int j = -s.anti_degree(); j <= s.degree(); ++j)
    acc += static_cast<double>(j) * j * std::norm(s.coeff(j));
  return acc;
}

/// sum_j |b_j|, the Wiener-algebra norm.
inline double wiener_norm(HarmonicSymbol const& s) {
  double acc = 0.0;
  for (int j = -s.anti_degree(); j <= s.degree(); ++j) acc += std::abs(s.coeff(j));
  return acc;
}

/// Upper bound for sup |phi| on the circle and for the spectral radius of T_phi.
inline double sup_bound(HarmonicSymbol const& s) { return wiener_norm(s); }

// ---------------------------------------------------------------------------

/// Closed polyline through phi(e^{i theta_k}), theta_k = 2 pi k / M.
struct SymbolCurve {
  std::vector<cplx> points;
  std::vector<cplx> tangents;

  std::size_t size() const noexcept { return points.size(); }

  /// Largest sample modulus; the reference length for relative tolerances.
  double scale() const noexcept {
    double r = 0.0;
    for (auto p : points) r = std::max(r, std::abs(p));
    return r;
  }
};

inline std::size_t min_curve_samples(HarmonicSymbol const& s) {
  return std::max<std::size_t>(64, 16u * static_cast<std::size_t>(s.anti_degree() + s.degree() + 1));
}

inline SymbolCurve sample_curve(HarmonicSymbol const& s, std::size_t M) {
  if (M < min_curve_samples(s))
    throw Error(ErrorKind::invalid_argument,
                "sample_curve: M = " + std::to_string(M) + " is below the minimum " +
                    std::to_string(min_curve_samples(s)));
  SymbolCurve c;
  c.points.resize(M);
  c.tangents.resize(M);
  for (std::size_t k = 0; k < M; ++k) {
    double const theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(M);
    c.points[k] = eval_boundary(s, theta);
    c.tangents[k] = eval_tangent(s, theta);
  }
  return c;
}

namespace geometry {

inline double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline double point_segment_distance(cplx p, cplx a, cplx b) {
  cplx const ab = b - a;
  double const len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

/// Distance between closed segments [a, b] and [c, d]; zero for a proper crossing.
inline double segment_distance(cplx a, cplx b, cplx c, cplx d) {
  double const d1 = cross(b - a, c - a);
  double const d2 = cross(b - a, d - a);
  double const d3 = cross(d - c, a - c);
  double const d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

}  // namespace geometry

/// Euclidean distance from z to the closed polyline.
inline double dist_to_curve(SymbolCurve const& c, cplx z) {
  std::size_t const M = c.size();
  if (M == 0) throw Error(ErrorKind::degenerate, "empty curve");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < M; ++k)
    best = std::min(best, geometry::point_segment_distance(z, c.points[k], c.points[(k + 1) % M]));
  return best;
}

/// Winding number of the closed polyline around z, by summed argument increments.
inline int winding_number(SymbolCurve const& c, cplx z) {
  double const tol = 1e-12 * c.scale();
  if (dist_to_curve(c, z) <= tol)
    throw Error(ErrorKind::on_curve, "winding_number: point lies on the curve");
  std::size_t const M = c.size();
  double total = 0.0;
  for (std::size_t k = 0; k < M; ++k)
    total += std::arg((c.points[(k + 1) % M] - z) / (c.points[k] - z));
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

struct CurveTolerances {
  double cusp = 1e-6;               // relative to the largest tangent speed
  double self_intersection = 1e-9;  // relative to curve scale
};

struct CurveDiagnostics {
  bool jordan = false;
  bool cusp_free = false;
  double min_tangent_speed = 0.0;
  double max_tangent_speed = 0.0;
  /// Minimum distance between non-adjacent polyline segments.
  double min_self_distance = 0.0;
};

inline CurveDiagnostics curve_diagnostics(SymbolCurve const& c, CurveTolerances const& tol = {}) {
  std::size_t const M = c.size();
  if (M < 4) throw Error(ErrorKind::degenerate, "curve_diagnostics: too few samples");
  bool const all_equal = std::all_of(c.points.begin(), c.points.end(),
                                     [&](cplx p) { return p == c.points.front(); });
  if (all_equal) throw Error(ErrorKind::degenerate, "curve_diagnostics: curve is a single point");

  CurveDiagnostics d;
  d.min_tangent_speed = std::numeric_limits<double>::infinity();
  for (auto t : c.tangents) {
    d.min_tangent_speed = std::min(d.min_tangent_speed, std::abs(t));
    d.max_tangent_speed = std::max(d.max_tangent_speed, std::abs(t));
  }
  d.cusp_free = d.min_tangent_speed > tol.cusp * d.max_tangent_speed;

  // All pairs of non-adjacent segments; bounding boxes prune the distant ones.
  struct Box { double x0, x1, y0, y1; };
  std::vector<Box> boxes(M);
  for (std::size_t k = 0; k < M; ++k) {
    cplx const a = c.points[k], b = c.points[(k + 1) % M];
    boxes[k] = {std::min(a.real(), b.real()), std::max(a.real(), b.real()),
                std::min(a.imag(), b.imag()), std::max(a.imag(), b.imag())};
  }
  double const eps = tol.self_intersection * c.scale();
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = i + 2; j < M; ++j) {
      if (i == 0 && j == M - 1) continue;  // adjacent through the closing segment
      Box const& p = boxes[i];
      Box const& q = boxes[j];
      double const gx = std::max({0.0, q.x0 - p.x1, p.x0 - q.x1});
      double const gy = std::max({0.0, q.y0 - p.y1, p.y0 - q.y1});
      if (std::hypot(gx, gy) >= min_dist) continue;
      double const dist = geometry::segment_distance(c.points[i], c.points[(i + 1) % M],
                                                     c.points[j], c.points[(j + 1) % M]);
      min_dist = std::min(min_dist, dist);
    }
  }
  d.min_self_distance = min_dist;
  d.jordan = min_dist > eps;
  return d;
}

}  // namespace hbt
