#pragma once

// Finite sections of the Hardy-Toeplitz matrix [b_{i-j}] and of the
// Bergman-Toeplitz matrix in the basis sqrt(n+1) z^n, plus the Hilbert-Schmidt
// norm of their difference.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "hbt/linalg.hpp"
#include "hbt/symbol.hpp"

namespace hbt {

enum class SectionKind { HT, BT };

inline char const* to_string(SectionKind k) { return k == SectionKind::HT ? "HT" : "BT"; }

struct FiniteSection {
  SectionKind kind = SectionKind::HT;
  ComplexMatrix entries;
  HarmonicSymbol symbol;

  std::size_t order() const noexcept { return entries.rows(); }
};

/// sqrt((min(i,j)+1) / (max(i,j)+1)).
inline double bt_weight(std::size_t i, std::size_t j) {
  double const lo = static_cast<double>(std::min(i, j)) + 1.0;
  double const hi = static_cast<double>(std::max(i, j)) + 1.0;
  return std::sqrt(lo / hi);
}

inline int index_difference(std::size_t i, std::size_t j) {
  return static_cast<int>(static_cast<long long>(i) - static_cast<long long>(j));
}

/// Entry (i, j) of the Bergman-Toeplitz matrix.
inline cplx bt_entry(HarmonicSymbol const& s, std::size_t i, std::size_t j) {
  long long const d = static_cast<long long>(i) - static_cast<long long>(j);
  if (d < -s.anti_degree() || d > s.degree()) return {};
  return bt_weight(i, j) * s.coeff(static_cast<int>(d));
}

namespace detail {

inline void require_order(std::size_t N) {
  if (N < 1) throw Error(ErrorKind::invalid_argument, "section order must be at least 1");
}

template <typename Entry>
ComplexMatrix banded_fill(HarmonicSymbol const& s, std::size_t N, Entry entry) {
  ComplexMatrix A(N, N);
  auto const m = static_cast<std::size_t>(s.anti_degree());
  auto const n = static_cast<std::size_t>(s.degree());
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t const j0 = i > n ? i - n : 0;
    std::size_t const j1 = std::min(N - 1, i + m);
    for (std::size_t j = j0; j <= j1; ++j) A(i, j) = entry(i, j);
  }
  return A;
}

}  // namespace detail

inline FiniteSection ht_section(HarmonicSymbol const& s, std::size_t N) {
  detail::require_order(N);
  auto A = detail::banded_fill(s, N, [&](std::size_t i, std::size_t j) {
    return s.coeff(index_difference(i, j));
  });
  return {SectionKind::HT, std::move(A), s};
}

inline FiniteSection bt_section(HarmonicSymbol const& s, std::size_t N) {
  detail::require_order(N);
  auto A = detail::banded_fill(s, N, [&](std::size_t i, std::size_t j) { return bt_entry(s, i, j); });
  return {SectionKind::BT, std::move(A), s};
}

/// (1 - sqrt((k+1)/(k+l+1)))^2 for l >= 1, written without cancellation.
inline double hs_difference_term(std::size_t k, int l) {
  double const y = static_cast<double>(l) / (static_cast<double>(k) + l + 1.0);
  double const r = y / (1.0 + std::sqrt(1.0 - y));
  return r * r;
}

/// sum_{0 <= i,j < N} |tau_{ij} - b_{i-j}|^2 over the N x N corner.
inline double hs_difference_sq_truncated(HarmonicSymbol const& s, std::size_t N) {
  detail::require_order(N);
  double total = 0.0;
  for (int l = -s.anti_degree(); l <= s.degree(); ++l) {
    if (l == 0) continue;
    double const b2 = std::norm(s.coeff(l));
    if (b2 == 0.0) continue;
    auto const al = static_cast<std::size_t>(std::abs(l));
    if (al >= N) continue;
    double inner = 0.0;
    for (std::size_t k = N - al; k-- > 0;) inner += hs_difference_term(k, std::abs(l));
    total += b2 * inner;
  }
  return total;
}

struct HsSeries {
  double value = 0.0;
  double tail_bound = 0.0;  // certified bound on |value - exact|
  std::size_t terms = 0;    // inner-series terms summed per index
};

/// The full Hilbert-Schmidt norm squared of T_bergman - T_hardy,
/// sum_l |b_l|^2 sum_{k>=0} (1 - sqrt((k+1)/(k+|l|+1)))^2.
///
/// Each inner series is summed directly for k < K. With y = l/(k+l+1) the
/// summand lies between y^2/4 and y^2/(2-y)^2, whose tails are bracketed by
/// integrals, giving l^2/(4(K+l+1)) <= tail <= l^2/(4(K+l/2)). The midpoint
/// is added to the value and the half-width becomes the error bound; K grows
/// until the bound drops below tol.
inline HsSeries hs_difference_sq_series(HarmonicSymbol const& s, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "hs_difference_sq_series: tol must be positive");
  // Weighted half-width: sum_l |b_l|^2 l^2 (l/2 + 1) / (4 (K+l/2)(K+l+1)) <= C / K^2.
  double C = 0.0;
  for (int l = -s.anti_degree(); l <= s.degree(); ++l) {
    if (l == 0) continue;
    double const al = std::abs(l);
    C += std::norm(s.coeff(l)) * al * al * (al / 2.0 + 1.0) / 8.0;
  }
  HsSeries out;
  if (C == 0.0) return out;
  auto K = static_cast<std::size_t>(std::ceil(std::sqrt(C / tol))) + 1;
  double bound = 0.0;
  double value = 0.0;
  for (;;) {
    value = 0.0;
    bound = 0.0;
    for (int l = -s.anti_degree(); l <= s.degree(); ++l) {
      if (l == 0) continue;
      double const b2 = std::norm(s.coeff(l));
      if (b2 == 0.0) continue;
      double const al = std::abs(l);
      double inner = 0.0;
      for (std::size_t k = K; k-- > 0;) inner += hs_difference_term(k, std::abs(l));
      double const Kd = static_cast<double>(K);
      double const lower = al * al / (4.0 * (Kd + al + 1.0));
      double const upper = al * al / (4.0 * (Kd + al / 2.0));
      value += b2 * (inner + 0.5 * (lower + upper));
      bound += b2 * 0.5 * (upper - lower);
    }
    if (bound < tol) break;
    K *= 2;
  }
  out.value = value;
  out.tail_bound = bound;
  out.terms = K;
  return out;
}

/// (pi^2 / 24) ||phi'||_2^2.
inline double hs_bound(HarmonicSymbol const& s) {
  return std::numbers::pi * std::numbers::pi / 24.0 * derivative_norm_sq(s);
}

/// Row-major dump, one matrix row per line, each entry as "re,im".
inline void write_section_csv(std::ostream& os, FiniteSection const& sec) {
  char buf[64];
  for (std::size_t i = 0; i < sec.order(); ++i) {
    for (std::size_t j = 0; j < sec.order(); ++j) {
      cplx const v = sec.entries(i, j);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", v.real(), v.imag());
      if (j) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace hbt
