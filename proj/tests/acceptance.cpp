// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hbt/analysis.hpp"
#include "hbt/linalg.hpp"
#include "hbt/operators.hpp"
#include "hbt/spectra.hpp"
#include "hbt/symbol.hpp"
#include "oracles.hpp"

using hbt::ComplexMatrix;
using hbt::cplx;
using hbt::HarmonicSymbol;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  char const* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(char const* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double const pi2_24 = std::numbers::pi * std::numbers::pi / 24.0;

HarmonicSymbol sym(std::map<int, cplx> b) { return HarmonicSymbol::from_coefficients(std::move(b)); }

// 1. Series below the bound on random symbols; truncation at N = 2000 close to the series.
Outcome hs_bound() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  double worst_margin = INFINITY;
  for (int k = 0; k < 50; ++k) {
    int const m = int(rng() % 7), n = int(rng() % 7);
    auto s = oracle::random_symbol(m, n, rng);
    double bound = 0.0;
    for (int l = -m; l <= n; ++l) bound += double(l) * l * std::norm(s.coeff(l));
    bound *= pi2_24;
    auto series = hbt::hs_difference_sq_series(s, 1e-8);
    bool const ok = series.tail_bound <= 1e-8 && series.value <= bound + 1e-8;
    if (!ok) o.pass = false;
    worst_margin = std::min(worst_margin, bound - series.value);
  }
  auto shift = sym({{1, 1.0}});
  double const series = hbt::hs_difference_sq_series(shift, 1e-8).value;
  double const trunc = hbt::hs_difference_sq_truncated(shift, 2000);
  double const loop = oracle::hs_truncated_loop(shift, 2000);
  double const rel = std::abs(trunc - series) / series;
  if (!(rel < 0.01) || std::abs(trunc - loop) > 1e-12 * loop) o.pass = false;
  o.detail = fmt("min(bound - series) = %.3e over 50 symbols; b_1=1: series %.10f, N=2000 sum %.10f (rel %.2e)",
                 worst_margin, series, trunc, rel);
  return o;
}

// 2. Bergman entries against the entry-loop oracle.
Outcome tau_formula() {
  Outcome o;
  std::mt19937_64 rng(20240602);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    auto s = oracle::random_symbol(1 + int(rng() % 6), 1 + int(rng() % 6), rng);
    auto B = hbt::bt_section(s, 100).entries;
    for (std::size_t i = 0; i < 100; ++i)
      for (std::size_t j = 0; j < 100; ++j) {
        cplx const ref = oracle::bt_entry_loop(s, i, j);
        double const err = std::abs(B(i, j) - ref) / std::max(std::abs(ref), 1e-300);
        if (ref != cplx(0)) worst = std::max(worst, err);
        else if (B(i, j) != cplx(0)) worst = INFINITY;
      }
  }
  o.pass = worst <= 4.0 * std::numeric_limits<double>::epsilon();
  o.detail = fmt("max relative entry error %.3e", worst);
  return o;
}

// 3. Eigenvalues against characteristic-polynomial roots.
Outcome eigensolver() {
  Outcome o;
  std::mt19937_64 rng(20240603);
  std::ostringstream d;
  for (std::size_t N : {5, 10, 20, 50}) {
    auto A = oracle::random_matrix(N, rng);
    auto r = hbt::eigenvalues(A);
    auto roots = oracle::charpoly_eigenvalues(A);
    double const md = oracle::matching_distance(r.values, roots);
    cplx sum{};
    for (auto v : r.values) sum += v;
    double const tr_err = std::abs(sum - hbt::trace(A));
    double const tr_tol = 1e-9 * double(N) * hbt::frobenius_norm(A);
    if (!r.converged || !(md <= 1e-7) || !(tr_err <= tr_tol)) o.pass = false;
    d << fmt("N=%zu match %.2e trace %.2e; ", N, md, tr_err);
  }
  o.detail = d.str();
  return o;
}

// 4. Tridiagonal closed form, checked against a Sturm oracle first.
Outcome tridiagonal() {
  Outcome o;
  std::size_t const N = 100;
  double const a = 0.25;
  std::vector<double> closed;
  for (std::size_t k = 1; k <= N; ++k) closed.push_back(2.0 * std::sqrt(a) * std::cos(double(k) * std::numbers::pi / double(N + 1)));
  std::sort(closed.begin(), closed.end());
  // Diagonal similarity: off-diagonals 1 and a become sqrt(a) on both sides.
  auto sturm = oracle::sturm_eigenvalues(std::vector<double>(N, 0.0), std::vector<double>(N - 1, std::sqrt(a)));
  double oracle_err = 0.0;
  for (std::size_t k = 0; k < N; ++k) oracle_err = std::max(oracle_err, std::abs(sturm[k] - closed[k]));

  auto T = hbt::ht_section(sym({{1, 1.0}, {-1, a}}), N);
  auto r = hbt::eigenvalues(T.entries);
  std::vector<cplx> expect(closed.begin(), closed.end());
  double const md = oracle::matching_distance(r.values, expect);
  o.pass = oracle_err <= 1e-12 && r.converged && md <= 1e-8;
  o.detail = fmt("closed form vs Sturm %.2e; eigensolver vs closed form %.2e", oracle_err, md);
  return o;
}

// 5. sigma_min bounded by the distance to the nearest eigenvalue.
Outcome majorization() {
  Outcome o;
  std::mt19937_64 rng(20240605);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  double worst = -INFINITY;
  for (int k = 0; k < 100; ++k) {
    std::size_t const N = 1 + std::size_t(k % 30);
    auto A = oracle::random_matrix(N, rng);
    auto ev = hbt::eigenvalues(A).values;
    for (int s = 0; s < 10; ++s) {
      cplx const z(u(rng), u(rng));
      double dmin = INFINITY;
      for (auto e : ev) dmin = std::min(dmin, std::abs(z - e));
      double const excess = hbt::smallest_singular_value(A, z) - dmin;
      worst = std::max(worst, excess);
      if (!(excess <= 1e-8)) o.pass = false;
    }
  }
  o.detail = fmt("max(sigma_min - dist) = %.3e over 1000 shifts", worst);
  return o;
}

// 6. Linear resolvent growth.
Outcome resolvent() {
  Outcome o;
  std::ostringstream d;
  for (auto const& [label, s] : {std::pair{"b_1=1", sym({{1, 1.0}})}, std::pair{"b_1=b_-1=1", sym({{1, 1.0}, {-1, 1.0}})}}) {
    double const W = hbt::wiener_norm(s);
    auto curve = hbt::sample_curve(s, 4096);
    auto pts = hbt::f0_sample_points(curve, 0.05 * W, 0.5 * W, 16);
    if (pts.size() != 16) {
      o.pass = false;
      d << label << ": only " << pts.size() << " sample points; ";
      continue;
    }
    auto fit = hbt::resolvent_growth_fit(s, pts, 400, curve);
    if (!(fit.p_hat >= 0.9 && fit.p_hat <= 1.3)) o.pass = false;
    d << fmt("%s p_hat %.4f c_hat %.4f; ", label, fit.p_hat, fit.c_hat);
  }
  o.detail = d.str();
  return o;
}

// 7. Detection pipeline properties on a suite of mixed symbols.
Outcome pipeline() {
  Outcome o;
  std::vector<std::pair<char const*, HarmonicSymbol>> const suite{
      {"ellipse", sym({{1, 1.0}, {-1, 0.5}})},
      {"tilted", sym({{1, 1.0}, {-1, cplx(0.3, 0.4)}, {0, cplx(0.2, -0.1)}})},
      {"trefoil", sym({{2, 1.0}, {-1, 0.6}})},
      {"mixed", sym({{-2, 0.1}, {-1, cplx(0.4, -0.2)}, {0, cplx(0.2, 0.1)}, {1, 1.0}, {2, cplx(0.0, 0.3)}})},
      {"limacon-bar", sym({{1, 1.0}, {2, 0.8}, {-1, 0.3}})},
      {"skew", sym({{-3, cplx(0.2, 0.2)}, {1, 1.0}, {3, -0.25}})},
  };
  std::vector<std::size_t> const ladder{200, 400, 800};
  double const eps = 0.01;
  std::ostringstream d;
  std::size_t total_candidates = 0;
  for (auto const& [label, s] : suite) {
    hbt::DetectionOptions opts;
    auto const thr = hbt::default_thresholds(s, opts);
    auto curve = hbt::sample_curve(s, std::max(opts.curve_samples, hbt::min_curve_samples(s)));
    auto rungs = hbt::ladder_spectra([&](std::size_t N) { return hbt::bt_section(s, N).entries; }, ladder);
    bool all_converged = true;
    for (auto const& r : rungs) all_converged = all_converged && r.converged;
    if (!all_converged) {
      o.pass = false;
      d << label << ": eigensolver did not converge; ";
      continue;
    }
    auto sections = [&](std::size_t N) { return hbt::bt_section(s, N).entries; };
    auto full = hbt::detect_from_rungs(rungs, sections(800), curve, thr);
    auto low = hbt::detect_from_rungs(std::span(rungs).first(2), sections(400), curve, thr);
    auto high = hbt::detect_from_rungs(std::span(rungs).last(2), sections(800), curve, thr);

    for (auto const& c : full.candidates) {
      if (!(c.persistence_drift < full.drift_tol)) o.pass = false;
      if (!(c.certificate < full.cert_tol)) o.pass = false;
    }
    double const lt_low = hbt::lt_sum(low.candidates, curve, eps);
    double const lt_high = hbt::lt_sum(high.candidates, curve, eps);
    double const denom = std::max(lt_low, lt_high);
    double const change = denom > 0.0 ? std::abs(lt_high - lt_low) / denom : 0.0;
    if (!(change < 0.05)) o.pass = false;
    double const lt_full = hbt::lt_sum(full.candidates, curve, eps);
    double const constant = lt_full / hbt::derivative_norm_sq(s);
    std::size_t f0 = 0;
    for (auto const& c : full.candidates) f0 += c.component == hbt::Component::F0;
    total_candidates += full.candidates.size();
    d << fmt("%s: %zu certified (%zu in F0), %zu uncertified, lt change %.2e, C_emp %.4e; ", label,
             full.candidates.size(), f0, full.uncertified.size(), change, constant);
  }
  d << fmt("total certified %zu", total_candidates);
  o.detail = d.str();
  return o;
}

// 8. Weyl diagnostic.
Outcome weyl() {
  Outcome o;
  std::ostringstream d;
  std::vector<std::pair<char const*, HarmonicSymbol>> const cases{
      {"constant", sym({{0, cplx(0.7, -0.3)}})},
      {"analytic", sym({{1, 1.0}, {2, 0.5}})},
      {"self-adjoint", sym({{-2, cplx(0.3, -0.1)}, {-1, 0.5}, {0, 0.2}, {1, 0.5}, {2, cplx(0.3, 0.1)}})},
  };
  for (auto const& [label, s] : cases) {
    double const w = hbt::weyl_diagnostic(s, 200);
    if (!(w >= 0.95)) o.pass = false;
    d << fmt("%s %.4f; ", label, w);
  }
  o.detail = d.str();
  return o;
}

// 9. Geometry and winding numbers.
Outcome geometry() {
  Outcome o;
  auto seg = hbt::curve_diagnostics(hbt::sample_curve(sym({{1, 1.0}, {-1, 1.0}}), 4096));
  auto ell_curve = hbt::sample_curve(sym({{1, 1.0}, {-1, 0.5}}), 4096);
  auto ell = hbt::curve_diagnostics(ell_curve);
  bool const seg_ok = !seg.cusp_free && !seg.jordan;
  bool const ell_ok = ell.cusp_free && ell.jordan;
  auto z2 = hbt::sample_curve(sym({{2, 1.0}}), 4096);
  auto zbar = hbt::sample_curve(sym({{-1, 1.0}}), 4096);
  int const w_in = hbt::winding_number(ell_curve, 0.0);
  int const w_out = hbt::winding_number(ell_curve, cplx(2, 2));
  int const w_z2 = hbt::winding_number(z2, 0.0);
  int const w_zbar = hbt::winding_number(zbar, 0.0);
  bool on_curve_error = false;
  try {
    hbt::winding_number(ell_curve, 1.5);
  } catch (hbt::Error const& e) {
    on_curve_error = e.kind() == hbt::ErrorKind::on_curve;
  }
  bool const wind_ok = w_in == 1 && w_out == 0 && w_z2 == 2 && w_zbar == -1 && on_curve_error;
  o.pass = seg_ok && ell_ok && wind_ok;
  o.detail = fmt("segment cusp_free=%d jordan=%d; ellipse cusp_free=%d jordan=%d; winding %d %d %d %d, on-curve error %d",
                 seg.cusp_free, seg.jordan, ell.cusp_free, ell.jordan, w_in, w_out, w_z2, w_zbar, on_curve_error);
  return o;
}

}  // namespace

int main() {
  std::vector<Criterion> const criteria{
      {1, "Hilbert-Schmidt bound", 30.0, hs_bound},
      {2, "Bergman entry formula", 1.0, tau_formula},
      {3, "eigensolver vs characteristic polynomial", 20.0, eigensolver},
      {4, "tridiagonal closed form", 5.0, tridiagonal},
      {5, "sigma_min majorization", 10.0, majorization},
      {6, "linear resolvent growth", 60.0, resolvent},
      {7, "discrete spectrum pipeline", 300.0, pipeline},
      {8, "Weyl diagnostic", 30.0, weyl},
      {9, "curve geometry and winding", 1.0, geometry},
  };
  int failures = 0;
  for (auto const& c : criteria) {
    auto const t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (std::exception const& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool const in_time = secs < c.budget_s;
    bool const pass = out.pass && in_time;
    failures += !pass;
    std::printf("[%s] %d %s (%.2f s, budget %.0f s%s): %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s,
                in_time ? "" : ", OVER BUDGET", out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
