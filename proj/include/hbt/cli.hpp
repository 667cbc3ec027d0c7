#pragma once

// Subcommand implementations behind the command-line tool. Each returns a
// process exit code; diagnostics go to `err`, results to `out` and to files in
// the configured output directory.

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>

#include "hbt/analysis.hpp"
#include "hbt/config.hpp"
#include "hbt/io.hpp"
#include "hbt/linalg.hpp"
#include "hbt/operators.hpp"
#include "hbt/spectra.hpp"

namespace hbt::cli {

enum ExitCode : int {
  ok = 0,
  bound_violation = 2,
  not_converged = 3,
  usage = 64,
  io_failure = 74,
};

namespace detail {

inline std::ofstream open_output(std::filesystem::path const& dir, std::string const& name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
  std::ofstream os(dir / name, std::ios::trunc);
  if (!os) throw Error(ErrorKind::io, "cannot write " + (dir / name).string());
  return os;
}

inline void check_stream(std::ofstream& os, std::string const& name) {
  os.flush();
  if (!os) throw Error(ErrorKind::io, "write failed for " + name);
}

inline FiniteSection section_of(RunConfig const& cfg, std::size_t N) {
  return cfg.section == SectionKind::BT ? bt_section(cfg.symbol, N) : ht_section(cfg.symbol, N);
}

}  // namespace detail

/// Maps library errors onto exit codes around a command body.
inline int guarded(std::ostream& err, std::function<int()> const& body) {
  try {
    return body();
  } catch (Error const& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::io: return io_failure;
      default: return usage;
    }
  }
}

inline int cmd_hs_check(RunConfig const& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    for (std::size_t N : cfg.ladder)
      out << "hs_truncated N=" << N << ' ' << io::fmt17(hs_difference_sq_truncated(cfg.symbol, N)) << '\n';
    HsSeries const series = hs_difference_sq_series(cfg.symbol, cfg.series_tol);
    double const bound = hs_bound(cfg.symbol);
    out << "hs_series " << io::fmt17(series.value) << " tail_bound " << io::fmt17(series.tail_bound) << '\n';
    out << "hs_bound " << io::fmt17(bound) << '\n';
    bool const holds = series.value <= bound + cfg.series_tol;
    out << (holds ? "bound holds" : "bound VIOLATED") << '\n';
    return holds ? ok : bound_violation;
  });
}

/// Writes eigenvalues_<N>.csv for every ladder rung.
inline int cmd_spectrum(RunConfig const& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    int code = ok;
    for (std::size_t N : cfg.ladder) {
      EigenResult const r = eigenvalues(detail::section_of(cfg, N).entries);
      std::string const name = "eigenvalues_" + std::to_string(N) + ".csv";
      auto os = detail::open_output(cfg.output_dir, name);
      io::write_eigenvalues_csv(os, r.values);
      detail::check_stream(os, name);
      out << name << (r.converged ? "" : "  (NOT CONVERGED)") << '\n';
      if (!r.converged) code = not_converged;
    }
    return code;
  });
}

/// Writes pseudospectrum.csv; with svd_check each node is recomputed by Jacobi SVD.
inline int cmd_pseudospectrum(RunConfig const& cfg, std::ostream& out, std::ostream& err, bool svd_check = false) {
  return guarded(err, [&] {
    std::size_t const N = cfg.pseudospectrum_order.value_or(cfg.ladder.front());
    FiniteSection const sec = detail::section_of(cfg, N);
    PseudospectrumField const field = pseudospectrum(sec, cfg.effective_region(), cfg.nx, cfg.ny);
    std::vector<double> svd;
    if (svd_check) {
      double worst = 0.0;
      for (std::size_t q = 0; q < field.ny; ++q)
        for (std::size_t p = 0; p < field.nx; ++p) {
          ComplexMatrix B = sec.entries;
          cplx const z = field.node(p, q);
          for (std::size_t i = 0; i < N; ++i) B(i, i) -= z;
          double const s = singular_values_jacobi(std::move(B)).back();
          svd.push_back(s);
          worst = std::max(worst, std::abs(s - field.value(p, q)));
        }
      out << "svd-check max |inverse iteration - jacobi| = " << io::fmt17(worst) << '\n';
    }
    auto os = detail::open_output(cfg.output_dir, "pseudospectrum.csv");
    io::write_pseudospectrum_csv(os, field, svd);
    detail::check_stream(os, "pseudospectrum.csv");
    out << "pseudospectrum.csv  N=" << N << "  grid " << cfg.nx << "x" << cfg.ny << '\n';
    return ok;
  });
}

inline int cmd_report(RunConfig const& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SpectralReport const rep = build_report(cfg.symbol, cfg.report_options());
    auto os = detail::open_output(cfg.output_dir, "report.json");
    os << io::report_to_json(rep).dump(2) << '\n';
    detail::check_stream(os, "report.json");
    auto cs = detail::open_output(cfg.output_dir, "candidates.json");
    cs << io::candidates_to_json(rep.detection.candidates).dump(2) << '\n';
    detail::check_stream(cs, "candidates.json");
    io::write_report_summary(out, rep);
    if (!rep.detection.skipped_rungs.empty()) return int(not_converged);
    return rep.hs_bound_holds ? int(ok) : int(bound_violation);
  });
}

/// Writes curve.csv and prints the curve diagnostics.
inline int cmd_curve(RunConfig const& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SymbolCurve const c = sample_curve(cfg.symbol, std::max(cfg.curve_samples, min_curve_samples(cfg.symbol)));
    auto os = detail::open_output(cfg.output_dir, "curve.csv");
    io::write_curve_csv(os, c);
    detail::check_stream(os, "curve.csv");
    out << "curve.csv  M=" << c.size() << '\n';
    try {
      CurveDiagnostics const d = curve_diagnostics(c);
      out << "jordan " << (d.jordan ? "yes" : "no") << '\n'
          << "cusp_free " << (d.cusp_free ? "yes" : "no") << '\n'
          << "min_tangent_speed " << io::fmt17(d.min_tangent_speed) << '\n'
          << "min_self_distance " << io::fmt17(d.min_self_distance) << '\n';
    } catch (Error const& e) {
      if (e.kind() != ErrorKind::degenerate) throw;
      out << "diagnostics: " << e.what() << '\n';
    }
    return ok;
  });
}

}  // namespace hbt::cli
