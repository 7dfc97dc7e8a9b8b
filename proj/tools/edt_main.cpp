// Command-line driver for the elastic diffraction tomography pipeline:
// simulate measurement planes, separate wave modes, invert for the
// parameter spectra, backproject, and report k-space coverage geometry.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "edt/pipeline.hpp"

namespace {

struct CommonOpts {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config, "run configuration (JSON)")
      ->required();
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "override the configured master seed")
      ->trigger_on_parse()
      ->each([&o](const std::string&) { o.seed_given = true; });
  cmd->add_option("--threads", o.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--verbose", o.verbose, "progress output on stderr");
}

edt::RunConfig load(const CommonOpts& o) {
  auto cfg = edt::load_config(o.config);
  if (o.seed_given) cfg.seed = o.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elastic diffraction tomography pipeline"};
  app.require_subcommand(1);

  CommonOpts sim, sep, inv, bp, cov;
  std::string oracle_points;
  std::vector<std::string> plane_files, mode_files_inv, mode_files_bp;

  auto* c_sim = app.add_subcommand("simulate",
                                   "compute measurement planes (and "
                                   "optionally oracle field values)");
  add_common(c_sim, sim);
  c_sim->add_option("--oracle-points", oracle_points,
                    "CSV of x1,x2,x3 points for direct-space oracle output");

  auto* c_sep = app.add_subcommand("separate",
                                   "separate planes into wave-mode grids");
  add_common(c_sep, sep);
  c_sep->add_option("planes", plane_files, "plane EDTG files")->required();

  auto* c_inv = app.add_subcommand("invert",
                                   "accumulate mode grids and solve for the "
                                   "parameter spectra");
  add_common(c_inv, inv);
  c_inv->add_option("modes", mode_files_inv, "mode EDTG files")->required();

  auto* c_bp = app.add_subcommand("backproject",
                                  "reconstruct a real-space volume from one "
                                  "mode over a rotation sweep");
  add_common(c_bp, bp);
  c_bp->add_option("modes", mode_files_bp, "mode EDTG files")->required();

  auto* c_cov = app.add_subcommand("coverage",
                                   "k-space coverage sets: occupancy grids, "
                                   "point clouds, volume report");
  add_common(c_cov, cov);

  CLI11_PARSE(app, argc, argv);

  try {
    try {
      if (c_sim->parsed()) {
        auto cfg = load(sim);
        edt::cmd_simulate(cfg, sim.out, sim.threads, sim.verbose,
                          oracle_points);
      } else if (c_sep->parsed()) {
        auto cfg = load(sep);
        edt::cmd_separate(cfg, plane_files, sep.out, sep.verbose);
      } else if (c_inv->parsed()) {
        auto cfg = load(inv);
        edt::cmd_invert(cfg, mode_files_inv, inv.out, inv.verbose);
      } else if (c_bp->parsed()) {
        auto cfg = load(bp);
        edt::cmd_backproject(cfg, mode_files_bp, bp.out, bp.verbose);
      } else if (c_cov->parsed()) {
        auto cfg = load(cov);
        edt::cmd_coverage(cfg, cov.out, cov.verbose);
      }
    } catch (const edt::ConfigError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
