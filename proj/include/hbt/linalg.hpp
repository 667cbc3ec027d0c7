#pragma once

// Dense complex linear algebra: Householder Hessenberg reduction, single-shift
// complex QR eigenvalues, LU with partial pivoting, and the smallest singular
// value of A - lambda I by inverse iteration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hbt/core.hpp"

namespace hbt {

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw Error(ErrorKind::invalid_argument, "ComplexMatrix: data length does not match shape");
    for (auto v : data_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(ErrorKind::invalid_argument, "ComplexMatrix: non-finite entry");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx const> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline ComplexMatrix operator*(ComplexMatrix const& a, ComplexMatrix const& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::invalid_argument, "matrix product shape mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      cplx const aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline std::vector<cplx> operator*(ComplexMatrix const& a, std::span<cplx const> x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::invalid_argument, "matrix-vector shape mismatch");
  std::vector<cplx> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

inline double frobenius_norm(ComplexMatrix const& a) {
  double acc = 0.0;
  for (auto v : a.data()) acc += std::norm(v);
  return std::sqrt(acc);
}

inline cplx trace(ComplexMatrix const& a) {
  cplx t{};
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

inline double vector_norm(std::span<cplx const> v) {
  double scale = 0.0;
  for (auto x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (auto x : v) acc += std::norm(x / scale);
  return scale * std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Hessenberg reduction

/// Upper Hessenberg form H = Q^* A Q by Householder reflectors.
inline ComplexMatrix hessenberg(ComplexMatrix A) {
  if (!A.square()) throw Error(ErrorKind::invalid_argument, "hessenberg: matrix is not square");
  std::size_t const n = A.rows();
  if (n < 3) return A;
  std::vector<cplx> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(A(i, k));
    xnorm = std::sqrt(xnorm);
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(A(i, k));
    if (tail == 0.0) continue;

    cplx const x0 = A(k + 1, k);
    cplx const phase = (x0 == cplx{}) ? cplx{1.0, 0.0} : x0 / std::abs(x0);
    cplx const alpha = -phase * xnorm;
    // v = x - alpha e1, normalized so that H = I - 2 v v^*.
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = A(i, k);
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // Left: rows k+1.., columns k..
    for (std::size_t j = k; j < n; ++j) {
      cplx dot{};
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * A(i, j);
      dot *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) A(i, j) -= v[i] * dot;
    }
    // Right: all rows, columns k+1..
    for (std::size_t i = 0; i < n; ++i) {
      cplx dot{};
      for (std::size_t j = k + 1; j < n; ++j) dot += A(i, j) * v[j];
      dot *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= dot * std::conj(v[j]);
    }
    A(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) A(i, k) = 0.0;
  }
  return A;
}

// ---------------------------------------------------------------------------
// Eigenvalues

struct EigenResult {
  std::vector<cplx> values;
  bool converged = false;
  std::size_t sweeps = 0;  // total QR iterations
};

namespace detail {

/// Rotation G = [c s; -conj(s) c] with G [x; y] = [r; 0].
struct Givens {
  double c = 1.0;
  cplx s{};
  cplx r{};
};

inline Givens make_givens(cplx x, cplx y) {
  if (y == cplx{}) return {1.0, cplx{}, x};
  if (x == cplx{}) return {0.0, cplx{1.0, 0.0}, y};
  double const ax = std::abs(x);
  double const norm = std::hypot(ax, std::abs(y));
  cplx const phase = x / ax;
  return {ax / norm, phase * std::conj(y) / norm, phase * norm};
}

/// Eigenvalue of the 2x2 block [a b; c d] nearest to d.
inline cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  cplx const t = 0.5 * (a - d);
  cplx const disc = std::sqrt(t * t + b * c);
  cplx const den = (std::abs(t + disc) >= std::abs(t - disc)) ? t + disc : t - disc;
  if (den == cplx{}) return d;
  return d - b * c / den;
}

/// One implicit single-shift QR sweep on the active block H[lo..hi, lo..hi].
inline void qr_sweep(ComplexMatrix& H, std::size_t lo, std::size_t hi, cplx shift) {
  cplx x = H(lo, lo) - shift;
  cplx y = H(lo + 1, lo);
  for (std::size_t k = lo; k < hi; ++k) {
    if (k > lo) {
      x = H(k, k - 1);
      y = H(k + 1, k - 1);
    }
    Givens const g = make_givens(x, y);
    if (k > lo) {
      H(k, k - 1) = g.r;
      H(k + 1, k - 1) = 0.0;
    }
    cplx const sc = std::conj(g.s);
    for (std::size_t j = k; j <= hi; ++j) {
      cplx const a = H(k, j), b = H(k + 1, j);
      H(k, j) = g.c * a + g.s * b;
      H(k + 1, j) = -sc * a + g.c * b;
    }
    std::size_t const last = std::min(k + 2, hi);
    for (std::size_t i = lo; i <= last; ++i) {
      cplx const a = H(i, k), b = H(i, k + 1);
      H(i, k) = g.c * a + sc * b;
      H(i, k + 1) = -g.s * a + g.c * b;
    }
  }
}

inline bool is_tridiagonal(ComplexMatrix const& A) {
  std::size_t const n = A.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((i > j + 1 || j > i + 1) && A(i, j) != cplx{}) return false;
  return true;
}

/// Replaces each off-diagonal pair (a(k,k+1), a(k+1,k)) of a tridiagonal matrix
/// by entries of modulus sqrt|a(k,k+1) a(k+1,k)| with the original phases. The
/// products, and with them the characteristic polynomial, are unchanged; the
/// result is as close to normal as a diagonal similarity can make it.
inline void symmetrize_tridiagonal(ComplexMatrix& A) {
  for (std::size_t k = 0; k + 1 < A.rows(); ++k) {
    cplx& up = A(k, k + 1);
    cplx& lo = A(k + 1, k);
    double const au = std::abs(up), al = std::abs(lo);
    if (au == 0.0 || al == 0.0) {
      up = lo = 0.0;
      continue;
    }
    double const m = std::sqrt(au) * std::sqrt(al);
    up *= m / au;
    lo *= m / al;
  }
}

}  // namespace detail

/// All eigenvalues of a square matrix by complex-shifted QR on its Hessenberg form.
///
/// Tridiagonal input is first brought to balanced off-diagonal moduli (see
/// detail::symmetrize_tridiagonal). A subdiagonal entry is set to zero when
/// |h(k+1,k)| <= u (|h(k,k)| + |h(k+1,k+1)|). Wilkinson shifts are used, with
/// exceptional shifts after 10 and 20 stagnant iterations. Running out of the
/// max_sweeps * N iteration budget is reported through `converged`; the
/// unconverged part of the spectrum is filled with the current diagonal.
inline EigenResult eigenvalues(ComplexMatrix const& A, std::size_t max_sweeps = 30) {
  if (!A.square()) throw Error(ErrorKind::invalid_argument, "eigenvalues: matrix is not square");
  std::size_t const n = A.rows();
  if (n == 0) throw Error(ErrorKind::invalid_argument, "eigenvalues: empty matrix");

  EigenResult res;
  res.values.resize(n);
  ComplexMatrix H = A;
  if (detail::is_tridiagonal(H)) detail::symmetrize_tridiagonal(H);
  else H = hessenberg(std::move(H));
  double const ulp = std::numeric_limits<double>::epsilon();
  double const safe_min = std::numeric_limits<double>::min() * (static_cast<double>(n) / ulp);
  double const hnorm = frobenius_norm(H);
  std::size_t const budget = max_sweeps * n;

  std::size_t hi = n - 1;
  std::size_t stagnant = 0;
  res.converged = true;
  while (true) {
    if (hi == 0) {
      res.values[0] = H(0, 0);
      break;
    }
    std::size_t lo = 0;
    for (std::size_t k = hi; k > 0; --k) {
      double const sub = std::abs(H(k, k - 1));
      double tst = std::abs(H(k - 1, k - 1)) + std::abs(H(k, k));
      if (tst == 0.0) tst = hnorm;
      if (sub <= ulp * tst || sub <= safe_min) {
        H(k, k - 1) = 0.0;
        lo = k;
        break;
      }
    }
    if (lo == hi) {
      res.values[hi] = H(hi, hi);
      --hi;
      stagnant = 0;
      continue;
    }
    if (res.sweeps >= budget) {
      res.converged = false;
      for (std::size_t i = 0; i <= hi; ++i) res.values[i] = H(i, i);
      break;
    }

    cplx shift;
    if (stagnant == 10) {
      shift = H(hi, hi) + 0.75 * std::abs(H(hi, hi - 1));
    } else if (stagnant == 20) {
      shift = H(lo, lo) + 0.75 * std::abs(H(lo + 1, lo));
    } else {
      shift = detail::wilkinson_shift(H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1), H(hi, hi));
    }
    detail::qr_sweep(H, lo, hi, shift);
    ++res.sweeps;
    stagnant = (stagnant >= 30) ? 0 : stagnant + 1;
  }
  return res;
}

// ---------------------------------------------------------------------------
// LU

struct LUDecomposition {
  ComplexMatrix lu;              // unit-lower L below the diagonal, U on and above
  std::vector<std::size_t> perm; // row i of P A is row perm[i] of A
  bool singular = false;         // an exactly zero pivot was met
  int sign = 1;                  // parity of the permutation
};

inline LUDecomposition lu_factor(ComplexMatrix A) {
  if (!A.square()) throw Error(ErrorKind::invalid_argument, "lu_factor: matrix is not square");
  std::size_t const n = A.rows();
  LUDecomposition f;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(A(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      double const v = std::abs(A(i, k));
      if (v > best) { best = v; p = i; }
    }
    if (best == 0.0) {
      f.singular = true;
      continue;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
      std::swap(f.perm[k], f.perm[p]);
      f.sign = -f.sign;
    }
    cplx const pivot = A(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx const l = A(i, k) / pivot;
      A(i, k) = l;
      if (l == cplx{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= l * A(k, j);
    }
  }
  f.lu = std::move(A);
  return f;
}

/// Solves A x = rhs.
inline std::vector<cplx> lu_solve(LUDecomposition const& f, std::span<cplx const> rhs) {
  std::size_t const n = f.lu.rows();
  if (rhs.size() != n) throw Error(ErrorKind::invalid_argument, "lu_solve: size mismatch");
  if (f.singular) throw Error(ErrorKind::singular, "lu_solve: matrix is singular");
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[f.perm[i]];
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= f.lu(i, j) * x[j];
    x[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    cplx acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= f.lu(i, j) * x[j];
    x[i] = acc / f.lu(i, i);
  }
  return x;
}

/// Solves A^* x = rhs using the same factors (A^* = U^* L^* P).
inline std::vector<cplx> lu_solve_adjoint(LUDecomposition const& f, std::span<cplx const> rhs) {
  std::size_t const n = f.lu.rows();
  if (rhs.size() != n) throw Error(ErrorKind::invalid_argument, "lu_solve_adjoint: size mismatch");
  if (f.singular) throw Error(ErrorKind::singular, "lu_solve_adjoint: matrix is singular");
  std::vector<cplx> w(rhs.begin(), rhs.end());
  // U^* w' = rhs (lower triangular, column access of U).
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = w[i];
    for (std::size_t j = 0; j < i; ++j) acc -= std::conj(f.lu(j, i)) * w[j];
    w[i] = acc / std::conj(f.lu(i, i));
  }
  // L^* y = w' (unit upper triangular).
  for (std::size_t i = n; i-- > 0;) {
    cplx acc = w[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= std::conj(f.lu(j, i)) * w[j];
    w[i] = acc;
  }
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[f.perm[i]] = w[i];
  return x;
}

inline cplx determinant(LUDecomposition const& f) {
  if (f.singular) return {};
  cplx det{static_cast<double>(f.sign), 0.0};
  for (std::size_t i = 0; i < f.lu.rows(); ++i) det *= f.lu(i, i);
  return det;
}

// ---------------------------------------------------------------------------
// Smallest singular value

struct SigmaMinOptions {
  double rel_tol = 1e-10;
  std::size_t max_iterations = 500;
};

/// sigma_min(A - lambda I) by inverse iteration on (A - lambda I)^* (A - lambda I).
///
/// Each step solves with B = A - lambda I and then with B^*; the estimate
/// 1/||B^{-1} v|| decreases monotonically towards sigma_min. Returns 0 when the
/// LU meets an exactly zero pivot.
inline double smallest_singular_value(ComplexMatrix const& A, cplx lambda,
                                      SigmaMinOptions const& opts = {}) {
  if (!A.square())
    throw Error(ErrorKind::invalid_argument, "smallest_singular_value: matrix is not square");
  std::size_t const n = A.rows();
  if (n == 0) return 0.0;
  ComplexMatrix B = A;
  for (std::size_t i = 0; i < n; ++i) B(i, i) -= lambda;
  LUDecomposition const f = lu_factor(std::move(B));
  if (f.singular) return 0.0;

  // Deterministic start with all components nonzero.
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = std::polar(1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i)), 2.399963 * static_cast<double>(i));
  double const v0 = vector_norm(v);
  for (auto& x : v) x /= v0;

  double sigma = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    std::vector<cplx> x = lu_solve(f, v);
    double const nx = vector_norm(x);
    if (!std::isfinite(nx)) return 0.0;
    double const next = 1.0 / nx;
    bool const done = std::abs(sigma - next) <= opts.rel_tol * next;
    sigma = next;
    if (done || sigma == 0.0) break;
    for (auto& e : x) e /= nx;
    v = lu_solve_adjoint(f, x);
    double const nv = vector_norm(v);
    if (!std::isfinite(nv) || nv == 0.0) break;
    for (auto& e : v) e /= nv;
  }
  return sigma;
}

/// All singular values, descending, by one-sided Jacobi. Slow; used as a check
/// on smallest_singular_value.
inline std::vector<double> singular_values_jacobi(ComplexMatrix A, std::size_t max_sweeps = 60) {
  std::size_t const n = A.cols();
  std::size_t const m = A.rows();
  double const eps = std::numeric_limits<double>::epsilon();
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma{};
        for (std::size_t i = 0; i < m; ++i) {
          alpha += std::norm(A(i, p));
          beta += std::norm(A(i, q));
          gamma += std::conj(A(i, p)) * A(i, q);
        }
        double const g = std::abs(gamma);
        if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // Rotate column q by the phase of gamma so the coupling becomes real.
        cplx const phase = std::conj(gamma) / g;
        double const zeta = (beta - alpha) / (2.0 * g);
        double const t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double const c = 1.0 / std::sqrt(1.0 + t * t);
        double const s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          cplx const ap = A(i, p);
          cplx const aq = A(i, q) * phase;
          A(i, p) = c * ap - s * aq;
          A(i, q) = s * ap + c * aq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += std::norm(A(i, j));
    sv[j] = std::sqrt(acc);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

}  // namespace hbt
