// Command-line front end: hs-check, spectrum, pseudospectrum, report, curve.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hbt/cli.hpp"
#include "hbt/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hardy- and Bergman-Toeplitz finite sections with harmonic symbols"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool svd_check = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides output_dir in the config)");
  app.add_flag("--svd-check", svd_check, "recompute pseudospectrum nodes with a full Jacobi SVD");

  auto* hs = app.add_subcommand("hs-check", "Hilbert-Schmidt norm of the Bergman/Hardy difference vs. its bound");
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of every ladder section");
  auto* pseudo = app.add_subcommand("pseudospectrum", "sigma_min grid of one section");
  auto* report = app.add_subcommand("report", "full spectral report (report.json)");
  auto* curve = app.add_subcommand("curve", "sampled symbol curve and its diagnostics");
  for (auto* sub : {hs, spectrum, pseudo, report, curve}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return hbt::cli::usage;
  }

  hbt::RunConfig cfg;
  int const load = hbt::cli::guarded(std::cerr, [&] {
    cfg = hbt::load_config(config_path);
    return 0;
  });
  if (load != 0) return load;
  if (!out_dir.empty()) cfg.output_dir = out_dir;

  if (*hs) return hbt::cli::cmd_hs_check(cfg, std::cout, std::cerr);
  if (*spectrum) return hbt::cli::cmd_spectrum(cfg, std::cout, std::cerr);
  if (*pseudo) return hbt::cli::cmd_pseudospectrum(cfg, std::cout, std::cerr, svd_check);
  if (*report) return hbt::cli::cmd_report(cfg, std::cout, std::cerr);
  return hbt::cli::cmd_curve(cfg, std::cout, std::cerr);
}
