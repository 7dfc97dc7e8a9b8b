#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "edt/background.hpp"
#include "edt/kgrid.hpp"
#include "edt/modesep.hpp"
#include "edt/phantom.hpp"

namespace edt {

/// Configuration errors name the offending field and map to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed and validated run configuration (JSON document, see the README
/// for the schema).
struct RunConfig {
  // background; omega_list non-empty iff a frequency sweep is requested
  double rho0 = 0.0, mu0 = 0.0, lambda0 = 0.0;
  std::vector<double> omegas;  // one entry for single-frequency runs

  Phantom phantom;

  std::vector<Side> sides;
  double r_M = 0.0;
  std::vector<IncidentWave> excitations;
  int xi_n = 0;
  double xi_max = 0.0;

  bool has_trajectory = false;
  Vec3 axis = Vec3::UnitX();
  int n_angles = 1;

  int kgrid_n = 48;
  double kgrid_extent = 0.0;  // 0 -> auto from wavenumbers
  double tau_den = kTauDenDefault;
  double kappa_max = 1e6;
  GriddingKernel gridding = GriddingKernel::Nearest;

  std::vector<ModeTag> modes;
  std::uint64_t seed = 0;

  Background background(double omega) const {
    return make_background(rho0, mu0, lambda0, omega);
  }
  bool frequency_sweep() const { return omegas.size() > 1; }
  RotationTrajectory trajectory() const {
    return full_rotation_trajectory(axis, n_angles);
  }
  XiGrid xi_grid() const { return make_xi_grid(xi_n, xi_max); }
  KGridSpec kgrid() const {
    double ext = kgrid_extent;
    if (ext <= 0.0) {
      double kmax = 0.0;
      for (double w : omegas) kmax = std::max(kmax, background(w).ks);
      ext = 1.05 * 2.0 * kmax;  // covers every locus family
    }
    return KGridSpec{kgrid_n, ext};
  }
};

namespace detail {

template <typename T>
T require(const nlohmann::json& j, const std::string& section,
          const std::string& key) {
  if (!j.contains(key))
    throw ConfigError("config: missing field " + section + "." + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config: bad value for " + section + "." + key);
  }
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j,
                                  const std::string& base_dir = ".") {
  RunConfig cfg;
  if (!j.contains("background")) throw ConfigError("config: missing background");
  const auto& jb = j.at("background");
  cfg.rho0 = detail::require<double>(jb, "background", "rho0");
  cfg.mu0 = detail::require<double>(jb, "background", "mu0");
  cfg.lambda0 = detail::require<double>(jb, "background", "lambda0");
  if (jb.contains("omega_list")) {
    cfg.omegas = jb.at("omega_list").get<std::vector<double>>();
    if (cfg.omegas.empty())
      throw ConfigError("config: background.omega_list must be non-empty");
    for (std::size_t i = 0; i + 1 < cfg.omegas.size(); ++i)
      if (!(cfg.omegas[i] < cfg.omegas[i + 1]))
        throw ConfigError("config: background.omega_list must increase");
  } else {
    cfg.omegas = {detail::require<double>(jb, "background", "omega")};
  }
  for (double w : cfg.omegas) {
    try {
      (void)make_background(cfg.rho0, cfg.mu0, cfg.lambda0, w);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: background: ") + e.what());
    }
  }

  if (!j.contains("phantom")) throw ConfigError("config: missing phantom");
  try {
    if (j.at("phantom").contains("file")) {
      cfg.phantom = load_phantom(
          base_dir + "/" + j.at("phantom").at("file").get<std::string>());
    } else {
      cfg.phantom = phantom_from_json(j.at("phantom"));
    }
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: phantom: ") + e.what());
  }

  if (!j.contains("experiment")) throw ConfigError("config: missing experiment");
  const auto& je = j.at("experiment");
  for (const auto& s :
       detail::require<std::vector<std::string>>(je, "experiment", "sides")) {
    if (s == "transmission" || s == "T")
      cfg.sides.push_back(Side::Transmission);
    else if (s == "reflection" || s == "R")
      cfg.sides.push_back(Side::Reflection);
    else
      throw ConfigError("config: experiment.sides: unknown side " + s);
  }
  if (cfg.sides.empty())
    throw ConfigError("config: experiment.sides must be non-empty");
  cfg.r_M = detail::require<double>(je, "experiment", "r_M");
  if (!(cfg.r_M > cfg.phantom.r_support))
    throw ConfigError("config: experiment.r_M must exceed phantom.r_support");
  const Vec3 amp_s = je.contains("amplitude_s")
                         ? Vec3(je.at("amplitude_s").at(0), je.at("amplitude_s").at(1),
                                je.at("amplitude_s").at(2))
                         : Vec3(1.0, 0.0, 0.0);
  const Vec3 amp_p = je.contains("amplitude_p")
                         ? Vec3(je.at("amplitude_p").at(0), je.at("amplitude_p").at(1),
                                je.at("amplitude_p").at(2))
                         : Vec3(0.0, 0.0, 1.0);
  for (const auto& e : detail::require<std::vector<std::string>>(
           je, "experiment", "excitations")) {
    try {
      if (e == "S")
        cfg.excitations.push_back(make_incident_wave(WaveMode::S, amp_s));
      else if (e == "P")
        cfg.excitations.push_back(make_incident_wave(WaveMode::P, amp_p));
      else
        throw ConfigError("config: experiment.excitations: unknown mode " + e);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("config: experiment amplitude: ") +
                        err.what());
    }
  }
  if (cfg.excitations.empty())
    throw ConfigError("config: experiment.excitations must be non-empty");
  if (!je.contains("xi_grid"))
    throw ConfigError("config: missing experiment.xi_grid");
  cfg.xi_n = detail::require<int>(je.at("xi_grid"), "experiment.xi_grid", "n");
  if (cfg.xi_n <= 0 || cfg.xi_n % 2 != 0)
    throw ConfigError("config: experiment.xi_grid.n must be even and positive");
  if (je.at("xi_grid").contains("xi_max")) {
    cfg.xi_max = je.at("xi_grid").at("xi_max").get<double>();
  } else if (je.at("xi_grid").contains("dxi")) {
    cfg.xi_max =
        0.5 * cfg.xi_n * je.at("xi_grid").at("dxi").get<double>();
  } else {
    // default: 1.2 x the largest shear wavenumber
    double kmax = 0.0;
    for (double w : cfg.omegas) kmax = std::max(kmax, cfg.background(w).ks);
    cfg.xi_max = 1.2 * kmax;
  }
  if (!(cfg.xi_max > 0.0))
    throw ConfigError("config: experiment.xi_grid extent must be positive");
  if (je.contains("trajectory")) {
    if (cfg.frequency_sweep())
      throw ConfigError(
          "config: trajectory and omega_list cannot be combined");
    cfg.has_trajectory = true;
    const auto& jt = je.at("trajectory");
    if (jt.contains("axis")) {
      const auto a = jt.at("axis");
      cfg.axis = Vec3(a.at(0), a.at(1), a.at(2));
      if (cfg.axis.norm() == 0.0)
        throw ConfigError("config: experiment.trajectory.axis must be nonzero");
      cfg.axis.normalize();
    }
    cfg.n_angles = detail::require<int>(jt, "experiment.trajectory", "n_angles");
    if (cfg.n_angles <= 0)
      throw ConfigError("config: experiment.trajectory.n_angles must be > 0");
  }

  if (j.contains("inversion")) {
    const auto& ji = j.at("inversion");
    if (ji.contains("kgrid")) {
      cfg.kgrid_n = detail::require<int>(ji.at("kgrid"), "inversion.kgrid", "n");
      if (cfg.kgrid_n <= 0 || cfg.kgrid_n % 2 != 0)
        throw ConfigError("config: inversion.kgrid.n must be even and positive");
      if (ji.at("kgrid").contains("extent"))
        cfg.kgrid_extent = ji.at("kgrid").at("extent").get<double>();
    }
    cfg.tau_den = ji.value("tau_den", kTauDenDefault);
    if (!(cfg.tau_den > 0.0))
      throw ConfigError("config: inversion.tau_den must be positive");
    cfg.kappa_max = ji.value("kappa_max", 1e6);
    const std::string g = ji.value("gridding", "nearest");
    if (g == "nearest")
      cfg.gridding = GriddingKernel::Nearest;
    else if (g == "trilinear")
      cfg.gridding = GriddingKernel::Trilinear;
    else if (g == "kaiser-bessel")
      cfg.gridding = GriddingKernel::KaiserBessel;
    else
      throw ConfigError("config: inversion.gridding: unknown kernel " + g);
    if (!kgrid_resolves_support(cfg.kgrid(), cfg.phantom.r_support))
      throw ConfigError(
          "config: inversion.kgrid spacing violates the support Nyquist bound");
  }

  if (j.contains("modes")) {
    for (const auto& m : j.at("modes").get<std::vector<std::string>>()) {
      try {
        cfg.modes.push_back(mode_tag_from_string(m));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: modes: ") + e.what());
      }
    }
  } else {
    cfg.modes = {ModeTag::PP, ModeTag::PS, ModeTag::SP1,
                 ModeTag::SP2, ModeTag::SS1, ModeTag::SS2};
  }
  if (j.contains("seeds")) cfg.seed = j.at("seeds").value("master", 0ull);
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path().string();
  return config_from_json(j, dir.empty() ? "." : dir);
}

}  // namespace edt
