#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "edt/config.hpp"
#include "edt/coverage.hpp"
#include "edt/oracle.hpp"
#include "edt/serialization.hpp"

namespace edt {

/// Hermitian parity of a mode's coefficient rows: +1 when the scattering
/// function of real perturbations satisfies F(-y) = conj(F(y)) (real rows),
/// -1 for the imaginary rows (F(-y) = -conj(F(y))).
inline int mode_hermitian_parity(ModeTag t) {
  switch (t) {
    case ModeTag::PP:
    case ModeTag::PS:
    case ModeTag::SS1:
      return +1;
    case ModeTag::SP1:
    case ModeTag::SP2:
    case ModeTag::SS2:
      return -1;
  }
  return +1;
}

/// Symmetrize deposits with the mode's parity: mass(-y) = parity conj(mass).
inline void symmetrize_with_parity(KGrid& kg, int parity) {
  const int n = kg.spec.n;
  const double sign = parity >= 0 ? 1.0 : -1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const int im = (n - i) % n, jm = (n - j) % n, km = (n - k) % n;
        if ((im == 0 && i != 0) || (jm == 0 && j != 0) || (km == 0 && k != 0))
          continue;
        const std::size_t v = kg.spec.lin(i, j, k);
        const std::size_t w = kg.spec.lin(im, jm, km);
        if (w < v) continue;
        const cplx avg = 0.5 * (kg.mass[v] + sign * std::conj(kg.mass[w]));
        kg.mass[v] = avg;
        kg.mass[w] = sign * std::conj(avg);
      }
}

namespace detail {

inline std::string two_digits(std::size_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%03zu", v);
  return buf;
}

inline const char* side_suffix(Side s) {
  return s == Side::Transmission ? "T" : "R";
}

inline void ensure_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
}

struct CsvWriter {
  std::ofstream out;
  explicit CsvWriter(const std::string& path) : out(path, std::ios::trunc) {
    if (!out) throw std::runtime_error("cannot open " + path);
  }
  // RFC 4180: quote fields containing separators or quotes
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      std::string f = fields[i];
      if (f.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : f) {
          if (c == '"') q += '"';
          q += c;
        }
        q += '"';
        f = q;
      }
      out << f << (i + 1 < fields.size() ? "," : "");
    }
    out << "\r\n";
  }
};

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Simulate measurement planes: one EDTG plane file per
/// (excitation, side, angle | frequency). Returns the written paths.
inline std::vector<std::string> cmd_simulate(const RunConfig& cfg,
                                             const std::string& out_dir,
                                             int threads = 1,
                                             bool verbose = false,
                                             const std::string& oracle_points =
                                                 "") {
  detail::ensure_dir(out_dir);
  std::vector<std::string> written;
  const XiGrid grid = cfg.xi_grid();
  for (const auto& wave : cfg.excitations) {
    const char exc = wave.mode == WaveMode::S ? 'S' : 'P';
    for (Side side : cfg.sides) {
      for (std::size_t wi = 0; wi < cfg.omegas.size(); ++wi) {
        const Background bg = cfg.background(cfg.omegas[wi]);
        const std::size_t n_angles =
            cfg.has_trajectory ? cfg.trajectory().size() : 1;
        for (std::size_t ai = 0; ai < n_angles; ++ai) {
          Phantom ph = cfg.phantom;
          if (cfg.has_trajectory) {
            const auto traj = cfg.trajectory();
            ph = rotated(cfg.phantom,
                         rotation_matrix(traj.theta[ai], traj.axis));
          }
          auto plane =
              forward_full(ph, {wave}, bg, side, cfg.r_M, grid, threads);
          auto f = to_edtg(plane);
          f.metadata["angle_index"] = ai;
          f.metadata["omega_index"] = wi;
          const std::string path = out_dir + "/plane_" + exc +
                                   detail::side_suffix(side) + "_a" +
                                   detail::two_digits(ai) + "_w" +
                                   detail::two_digits(wi) + ".edtg";
          edtg_write(f, path);
          written.push_back(path);
          if (verbose)
            std::fprintf(stderr, "wrote %s (%zu valid nodes)\n", path.c_str(),
                         plane.valid_count());
        }
      }
    }
  }
  if (!oracle_points.empty()) {
    std::ifstream in(oracle_points);
    if (!in)
      throw std::runtime_error("cannot open oracle points file: " +
                               oracle_points);
    std::vector<Vec3> pts;
    std::string line;
    std::getline(in, line);  // header x1,x2,x3
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Vec3 p;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &p(0), &p(1), &p(2)) == 3)
        pts.push_back(p);
    }
    const Background bg = cfg.background(cfg.omegas.front());
    for (const auto& wave : cfg.excitations) {
      const char exc = wave.mode == WaveMode::S ? 'S' : 'P';
      const auto u = oracle_field(cfg.phantom, {wave}, bg, pts, 48, threads);
      detail::CsvWriter csv(out_dir + std::string("/oracle_") + exc + ".csv");
      csv.row({"x1", "x2", "x3", "re_u1", "im_u1", "re_u2", "im_u2", "re_u3",
               "im_u3"});
      for (std::size_t i = 0; i < pts.size(); ++i)
        csv.row({detail::fmt(pts[i](0)), detail::fmt(pts[i](1)),
                 detail::fmt(pts[i](2)), detail::fmt(u[i](0).real()),
                 detail::fmt(u[i](0).imag()), detail::fmt(u[i](1).real()),
                 detail::fmt(u[i](1).imag()), detail::fmt(u[i](2).real()),
                 detail::fmt(u[i](2).imag())});
      written.push_back(out_dir + std::string("/oracle_") + exc + ".csv");
    }
  }
  return written;
}

/// Separate plane files into the requested mode grids.
inline std::vector<std::string> cmd_separate(const RunConfig& cfg,
                                             const std::vector<std::string>&
                                                 plane_files,
                                             const std::string& out_dir,
                                             bool verbose = false) {
  detail::ensure_dir(out_dir);
  std::vector<std::string> written;
  for (const auto& path : plane_files) {
    const auto f = edtg_read(path);
    const auto plane = plane_from_edtg(f);
    const std::size_t ai = f.metadata.value("angle_index", 0u);
    const std::size_t wi = f.metadata.value("omega_index", 0u);
    const WaveMode exc = plane.waves.size() == 1
                             ? plane.waves[0].mode
                             : throw std::runtime_error(
                                   "separate: plane has joint excitation");
    std::vector<ModeGrid> grids;
    for (ModeTag tag : cfg.modes) {
      if (mode_excitation(tag) != exc) continue;
      switch (tag) {
        case ModeTag::PP:
          grids.push_back(scatfun_pp(plane, cfg.tau_den));
          break;
        case ModeTag::PS:
          grids.push_back(scatfun_ps(plane, cfg.tau_den));
          break;
        case ModeTag::SP1:
          grids.push_back(scatfun_sp(plane, 1, cfg.tau_den));
          break;
        case ModeTag::SP2:
          grids.push_back(scatfun_sp(plane, 2, cfg.tau_den));
          break;
        case ModeTag::SS1:
          grids.push_back(scatfun_ss(plane, cfg.tau_den).first);
          break;
        case ModeTag::SS2:
          grids.push_back(scatfun_ss(plane, cfg.tau_den).second);
          break;
      }
    }
    for (const auto& mg : grids) {
      auto out = to_edtg(mg);
      out.metadata["angle_index"] = ai;
      out.metadata["omega_index"] = wi;
      const std::string mpath =
          out_dir + "/mode_" + to_string(mg.tag) + "_" +
          detail::side_suffix(mg.side) + "_a" + detail::two_digits(ai) + "_w" +
          detail::two_digits(wi) + ".edtg";
      edtg_write(out, mpath);
      written.push_back(mpath);
      if (verbose)
        std::fprintf(stderr, "wrote %s (%zu valid nodes)\n", mpath.c_str(),
                     mg.valid_count());
    }
  }
  return written;
}

namespace detail {

struct LoadedModes {
  // keyed by (tag, side); each entry ordered by (omega index, angle index)
  std::map<std::pair<std::string, std::string>,
           std::map<std::pair<std::size_t, std::size_t>, ModeGrid>>
      groups;
};

inline LoadedModes load_mode_files(const std::vector<std::string>& files) {
  LoadedModes lm;
  for (const auto& path : files) {
    const auto f = edtg_read(path);
    auto mg = mode_grid_from_edtg(f);
    const std::size_t ai = f.metadata.value("angle_index", 0u);
    const std::size_t wi = f.metadata.value("omega_index", 0u);
    lm.groups[{to_string(mg.tag),
               mg.side == Side::Transmission ? "T" : "R"}][{wi, ai}] =
        std::move(mg);
  }
  return lm;
}

}  // namespace detail

/// Accumulate every mode file onto one k-grid (rows retained), solve the
/// per-voxel systems, write the solved spectra plus a diagnostics CSV.
inline std::vector<std::string> cmd_invert(const RunConfig& cfg,
                                           const std::vector<std::string>&
                                               mode_files,
                                           const std::string& out_dir,
                                           bool verbose = false) {
  detail::ensure_dir(out_dir);
  const auto lm = detail::load_mode_files(mode_files);
  KGrid kg(cfg.kgrid(), true, cfg.gridding);
  for (const auto& [key, entries] : lm.groups) {
    if (cfg.has_trajectory) {
      const auto traj = cfg.trajectory();
      std::vector<ModeGrid> per_angle;
      for (const auto& [idx, mg] : entries) per_angle.push_back(mg);
      if (per_angle.size() != traj.size())
        throw std::runtime_error("invert: mode group " + key.first + "/" +
                                 key.second + " is missing angles");
      accumulate(kg, per_angle, traj);
    } else if (cfg.frequency_sweep()) {
      std::vector<ModeGrid> per_omega;
      for (const auto& [idx, mg] : entries) per_omega.push_back(mg);
      frequency_sweep_accumulate(kg, per_omega, cfg.omegas);
    } else {
      for (const auto& [idx, mg] : entries)
        frequency_sweep_accumulate(kg, {mg}, {mg.bg.omega});
    }
  }
  const auto sol = solve_parameters(kg, cfg.kappa_max);
  const std::string kpath = out_dir + "/kgrid_solved.edtg";
  edtg_write(solved_to_edtg(kg.spec, sol), kpath);
  const std::string cpath = out_dir + "/invert_diagnostics.csv";
  {
    detail::CsvWriter csv(cpath);
    csv.row({"y1", "y2", "y3", "rows", "rank", "cond", "residual",
             "mu_undetermined", "lambda_undetermined", "rho_undetermined",
             "cond_flagged"});
    for (std::size_t v = 0; v < sol.size(); ++v) {
      if (sol[v].n_rows == 0) continue;
      const Vec3 y = kg.spec.node(v);
      csv.row({detail::fmt(y(0)), detail::fmt(y(1)), detail::fmt(y(2)),
               std::to_string(sol[v].n_rows), std::to_string(sol[v].rank),
               detail::fmt(sol[v].cond), detail::fmt(sol[v].residual),
               std::to_string(int(sol[v].undetermined[0])),
               std::to_string(int(sol[v].undetermined[1])),
               std::to_string(int(sol[v].undetermined[2])),
               std::to_string(int(sol[v].cond_flagged))});
    }
  }
  if (verbose)
    std::fprintf(stderr, "deposited %zu samples (%zu out of extent)\n",
                 kg.deposited, kg.out_of_extent);
  return {kpath, cpath};
}

/// Backproject one mode group (all supplied files must share tag and side).
inline std::vector<std::string> cmd_backproject(const RunConfig& cfg,
                                                const std::vector<std::string>&
                                                    mode_files,
                                                const std::string& out_dir,
                                                bool verbose = false) {
  detail::ensure_dir(out_dir);
  if (!cfg.has_trajectory)
    throw std::runtime_error("backproject: configuration has no trajectory");
  const auto lm = detail::load_mode_files(mode_files);
  if (lm.groups.size() != 1)
    throw std::runtime_error(
        "backproject: supply files of exactly one mode and side");
  const auto& [key, entries] = *lm.groups.begin();
  const auto traj = cfg.trajectory();
  std::vector<ModeGrid> per_angle;
  for (const auto& [idx, mg] : entries) per_angle.push_back(mg);
  if (per_angle.size() != traj.size())
    throw std::runtime_error("backproject: missing angles for " + key.first);
  KGrid kg(cfg.kgrid(), false, cfg.gridding);
  accumulate(kg, per_angle, traj);
  density_compensate(kg);
  symmetrize_with_parity(kg, mode_hermitian_parity(per_angle[0].tag));
  const auto vol = backproject_fft(kg);
  const std::string vpath =
      out_dir + "/volume_" + key.first + "_" + key.second + ".edtg";
  edtg_write(to_edtg(vol), vpath);
  // central slice for plotting
  const std::string spath =
      out_dir + "/volume_" + key.first + "_" + key.second + "_slice.csv";
  {
    detail::CsvWriter csv(spath);
    csv.row({"r1", "r2", "re", "im"});
    const int mid = vol.n / 2;
    for (int i = 0; i < vol.n; ++i)
      for (int j = 0; j < vol.n; ++j) {
        const Vec3 r = vol.node(i, j, mid);
        const cplx v = vol.values[vol.lin(i, j, mid)];
        csv.row({detail::fmt(r(0)), detail::fmt(r(1)),
                 detail::fmt(v.real()), detail::fmt(v.imag())});
      }
  }
  if (verbose)
    std::fprintf(stderr, "volume imaginary fraction: %.3e\n",
                 vol.imag_fraction());
  return {vpath, spath};
}

/// Coverage geometry: occupancy grids, a CSV point cloud per set, and a
/// volume report (Monte Carlo estimate with standard error plus the
/// quadrature oracle).
inline std::vector<std::string> cmd_coverage(const RunConfig& cfg,
                                             const std::string& out_dir,
                                             bool verbose = false) {
  detail::ensure_dir(out_dir);
  std::vector<std::string> written;
  const Background bg_lo = cfg.background(cfg.omegas.front());
  const Background bg_hi = cfg.background(cfg.omegas.back());
  std::vector<std::pair<std::string, CoverageSet>> sets;
  for (ModeTag tag : cfg.modes) {
    if (tag == ModeTag::SP2 || tag == ModeTag::SS2) continue;  // same geometry
    for (Side side : cfg.sides) {
      const std::string base = std::string(to_string(tag)) + "_" +
                               detail::side_suffix(side);
      sets.push_back(
          {"angular_" + base, angular_torus_set(tag, side, bg_hi)});
      if (cfg.frequency_sweep())
        sets.push_back({"frequency_" + base,
                        frequency_region_set(tag, side,
                                             {bg_lo.ks, bg_hi.ks},
                                             {bg_lo.kp, bg_hi.kp})});
    }
  }
  const KGridSpec spec = cfg.kgrid();
  detail::CsvWriter report(out_dir + "/coverage_volumes.csv");
  report.row({"set", "mc_volume", "mc_std_error", "quadrature_volume",
              "mc_samples"});
  for (const auto& [name, set] : sets) {
    std::vector<double> occ(spec.size(), 0.0);
    for (std::size_t v = 0; v < spec.size(); ++v)
      occ[v] = coverage_contains(set, spec.node(v)) ? 1.0 : 0.0;
    nlohmann::json meta{{"name", name}};
    const std::string opath = out_dir + "/coverage_" + name + ".edtg";
    edtg_write(occupancy_to_edtg(spec, occ, meta), opath);
    written.push_back(opath);
    // member point cloud for plotting
    detail::CsvWriter cloud(out_dir + "/coverage_" + name + ".csv");
    cloud.row({"y1", "y2", "y3"});
    std::size_t count = 0;
    for (std::size_t v = 0; v < spec.size() && count < 20000; ++v) {
      if (occ[v] == 0.0) continue;
      const Vec3 y = spec.node(v);
      cloud.row({detail::fmt(y(0)), detail::fmt(y(1)), detail::fmt(y(2))});
      ++count;
    }
    written.push_back(out_dir + "/coverage_" + name + ".csv");
    const auto mc = coverage_volume(set, 1000000, cfg.seed);
    const double quad = coverage_volume_quadrature(set, 1200);
    report.row({name, detail::fmt(mc.volume), detail::fmt(mc.std_error),
                detail::fmt(quad), std::to_string(mc.samples)});
    if (verbose)
      std::fprintf(stderr, "%s: MC %.6g +- %.2g, quadrature %.6g\n",
                   name.c_str(), mc.volume, mc.std_error, quad);
  }
  written.push_back(out_dir + "/coverage_volumes.csv");
  return written;
}

}  // namespace edt
