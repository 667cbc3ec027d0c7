#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "hbt/analysis.hpp"
#include "hbt/io.hpp"
#include "oracles.hpp"

using hbt::Component;
using hbt::cplx;
using hbt::DiscreteCandidate;
using hbt::HarmonicSymbol;
using Catch::Approx;

namespace {

HarmonicSymbol shift() { return HarmonicSymbol::from_coefficients({{1, 1.0}}); }
HarmonicSymbol ellipse() { return HarmonicSymbol::from_coefficients({{1, 1.0}, {-1, 0.5}}); }

double dense_distance(HarmonicSymbol const& s, cplx z, std::size_t samples = 200'000) {
  double best = INFINITY;
  for (std::size_t k = 0; k < samples; ++k)
    best = std::min(best, std::abs(z - hbt::eval_boundary(s, 2.0 * std::numbers::pi * double(k) / double(samples))));
  return best;
}

DiscreteCandidate candidate(cplx z, Component comp) {
  DiscreteCandidate c;
  c.location = z;
  c.component = comp;
  return c;
}

hbt::ReportOptions small_options() {
  hbt::ReportOptions o;
  o.ladder = {20, 40, 80};
  o.resolvent_order = 80;
  return o;
}

}  // namespace

TEST_CASE("dist_to_spectrum") {
  auto circle = hbt::sample_curve(shift(), 1024);
  CHECK(hbt::dist_to_spectrum(circle, 0.0) == 0.0);
  CHECK(hbt::dist_to_spectrum(circle, cplx(0.3, -0.4)) == 0.0);
  CHECK(hbt::dist_to_spectrum(circle, 2.0) == Approx(1.0).epsilon(1e-12));
  CHECK(hbt::dist_to_spectrum(circle, circle.points[5]) == 0.0);

  auto e = hbt::sample_curve(ellipse(), 4096);
  CHECK(hbt::dist_to_spectrum(e, 3.0) == Approx(1.5).epsilon(1e-12));
  CHECK(hbt::dist_to_spectrum(e, 3.0) == Approx(dense_distance(ellipse(), 3.0)).epsilon(1e-9));
  CHECK(hbt::dist_to_spectrum(e, cplx(0.0, 0.2)) == 0.0);
}

TEST_CASE("dist_to_spectrum matches dense sampling outside the curve") {
  std::mt19937_64 rng(307);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto s = oracle::random_symbol(1, 2, rng);
  double const W = hbt::wiener_norm(s);
  std::size_t const M = 4096;
  auto c = hbt::sample_curve(s, M);
  double const err = hbt::curve_distance_error_bound(s, M);
  int outside = 0;
  for (int k = 0; k < 40; ++k) {
    cplx const z(W * u(rng), W * u(rng));
    double const d = hbt::dist_to_spectrum(c, z);
    if (d == 0.0) continue;
    ++outside;
    CHECK(std::abs(d - dense_distance(s, z, 50'000)) <= err + 1e-9 * W);
  }
  CHECK(outside > 0);
}

TEST_CASE("lt_sum") {
  auto circle = hbt::sample_curve(shift(), 1024);
  CHECK(hbt::lt_sum({}, circle, 0.01) == 0.0);
  std::vector<DiscreteCandidate> one{candidate(3.0, Component::F0)};
  CHECK(hbt::lt_sum(one, circle, 0.01) == Approx(std::pow(2.0, 3.01)).epsilon(1e-12));
  std::vector<DiscreteCandidate> mixed{candidate(3.0, Component::F0), candidate(cplx(0.0, 0.5), Component::boundedHole),
                                       candidate(cplx(1.01, 0.0), Component::nearEssential)};
  CHECK(hbt::lt_sum(mixed, circle, 0.01) == Approx(std::pow(2.0, 3.01)).epsilon(1e-12));
  CHECK_THROWS_AS(hbt::lt_sum(one, circle, 0.0), hbt::Error);
  CHECK_THROWS_AS(hbt::lt_sum(one, circle, -0.5), hbt::Error);
}

TEST_CASE("lt_sum is monotone in epsilon for distances below one") {
  auto circle = hbt::sample_curve(shift(), 1024);
  std::vector<DiscreteCandidate> near{candidate(1.4, Component::F0), candidate(cplx(0.0, -1.8), Component::F0)};
  double prev = INFINITY;
  for (double eps : {0.001, 0.01, 0.1, 0.5, 1.0}) {
    double const v = hbt::lt_sum(near, circle, eps);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("points of nonzero winding contribute nothing") {
  auto twice = hbt::sample_curve(HarmonicSymbol::from_coefficients({{2, 1.0}}), 1024);
  // Mislabelled on purpose: the spectrum distance is zero inside the curve.
  std::vector<DiscreteCandidate> inside{candidate(cplx(0.1, 0.2), Component::F0)};
  CHECK(hbt::lt_sum(inside, twice, 0.01) == 0.0);
}

TEST_CASE("weyl_diagnostic") {
  CHECK(hbt::weyl_diagnostic(HarmonicSymbol::from_coefficients({{0, cplx(1, 2)}}), 50) == 1.0);
  CHECK(hbt::weyl_diagnostic(shift(), 100) >= 0.95);
  auto real = HarmonicSymbol::from_coefficients({{-2, cplx(0.3, 0.1)}, {-1, 0.5}, {0, 0.2}, {1, 0.5}, {2, cplx(0.3, -0.1)}});
  double const w = hbt::weyl_diagnostic(real, 200);
  CHECK(w >= 0.95);
  CHECK(w <= 1.0);
  CHECK_THROWS_AS(hbt::weyl_diagnostic(shift(), 8), hbt::Error);
}

TEST_CASE("curve_distance_error_bound") {
  CHECK(hbt::curve_distance_error_bound(HarmonicSymbol::from_coefficients({{0, 1.0}}), 64) == 0.0);
  CHECK(hbt::curve_distance_error_bound(shift(), 64) == Approx(2.0 * std::numbers::pi / 4096.0));
  // The polyline chord sag of the unit circle stays under the bound.
  std::size_t const M = 64;
  CHECK(1.0 - std::cos(std::numbers::pi / double(M)) <= hbt::curve_distance_error_bound(shift(), M));
}

TEST_CASE("build_report for a constant symbol") {
  auto rep = hbt::build_report(HarmonicSymbol::from_coefficients({{0, 2.0}}), small_options());
  CHECK(rep.derivative_norm_sq == 0.0);
  CHECK(rep.hs_series == 0.0);
  CHECK(rep.hs_bound == 0.0);
  CHECK(rep.hs_bound_holds);
  CHECK(rep.detection.candidates.empty());
  CHECK(rep.lt_sum == 0.0);
  CHECK_FALSE(rep.empirical_constant.has_value());
  CHECK_FALSE(rep.diagnostics.has_value());
  CHECK_FALSE(rep.resolvent_fit.has_value());
  REQUIRE(rep.weyl_fraction.has_value());
  CHECK(*rep.weyl_fraction == 1.0);
  CHECK(rep.notes.size() >= 2);
}

TEST_CASE("build_report for the shift") {
  auto rep = hbt::build_report(shift(), small_options());
  CHECK(rep.wiener_norm == 1.0);
  CHECK(rep.derivative_norm_sq == 1.0);
  CHECK(rep.hs_bound == Approx(std::numbers::pi * std::numbers::pi / 24.0));
  CHECK(rep.hs_truncated <= rep.hs_series + 1e-8);
  CHECK(rep.hs_bound_holds);
  REQUIRE(rep.diagnostics.has_value());
  CHECK(rep.diagnostics->jordan);
  for (auto const& c : rep.detection.candidates) CHECK(c.component != Component::F0);
  CHECK(rep.lt_sum == 0.0);
  REQUIRE(rep.empirical_constant.has_value());
  CHECK(*rep.empirical_constant == 0.0);
  REQUIRE(rep.resolvent_fit.has_value());
  CHECK(rep.resolvent_fit->p_hat == Approx(1.0).margin(0.1));
  REQUIRE(rep.weyl_fraction.has_value());
  CHECK(*rep.weyl_fraction >= 0.95);
}

TEST_CASE("build_report for the ellipse serialises deterministically") {
  auto a = hbt::io::report_to_json(hbt::build_report(ellipse(), small_options())).dump(2);
  auto b = hbt::io::report_to_json(hbt::build_report(ellipse(), small_options())).dump(2);
  CHECK(a == b);
  auto j = nlohmann::ordered_json::parse(a);
  CHECK(j["hs_bound_holds"] == true);
  CHECK(j["derivative_norm_sq"].get<double>() == Approx(1.25));
  CHECK(j["ladder"].size() == 3);
  CHECK(j.contains("candidates"));
  CHECK(j.contains("lt_sum_certified_only"));
}

TEST_CASE("build_report reports the failing stage") {
  auto o = small_options();
  o.ladder = {20, 10, 40};
  try {
    hbt::build_report(shift(), o);
    FAIL("expected a stage error");
  } catch (hbt::StageError const& e) {
    CHECK(e.stage() == "options");
    CHECK(e.kind() == hbt::ErrorKind::invalid_argument);
  }
  o = small_options();
  o.epsilon = 0.0;
  CHECK_THROWS_AS(hbt::build_report(shift(), o), hbt::StageError);
}
