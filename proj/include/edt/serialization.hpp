#pragma once

#include <limits>
#include <string>
#include <vector>

#include "edt/backproject.hpp"
#include "edt/edtg.hpp"
#include "edt/forward.hpp"
#include "edt/kgrid.hpp"
#include "edt/modesep.hpp"

namespace edt {

namespace detail {

inline nlohmann::json bg_to_json(const Background& bg) {
  return {{"rho0", bg.rho0},
          {"mu0", bg.mu0},
          {"lambda0", bg.lambda0},
          {"omega", bg.omega}};
}

inline Background bg_from_json(const nlohmann::json& j) {
  return make_background(j.at("rho0"), j.at("mu0"), j.at("lambda0"),
                         j.at("omega"));
}

inline nlohmann::json wave_to_json(const IncidentWave& w) {
  return {{"mode", w.mode == WaveMode::S ? "S" : "P"},
          {"amplitude", {w.amplitude(0), w.amplitude(1), w.amplitude(2)}}};
}

inline IncidentWave wave_from_json(const nlohmann::json& j) {
  const auto a = j.at("amplitude");
  return make_incident_wave(
      j.at("mode").get<std::string>() == "S" ? WaveMode::S : WaveMode::P,
      Vec3(a.at(0), a.at(1), a.at(2)));
}

inline nlohmann::json mask_to_json(const std::vector<std::uint8_t>& mask) {
  nlohmann::json out = nlohmann::json::array();
  for (auto m : mask) out.push_back(static_cast<int>(m));
  return out;
}

inline std::vector<std::uint8_t> mask_from_json(const nlohmann::json& j) {
  std::vector<std::uint8_t> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(static_cast<std::uint8_t>(v.get<int>()));
  return out;
}

}  // namespace detail

inline EdtgFile to_edtg(const MeasurementPlane& p) {
  EdtgFile f;
  f.kind = EdtgKind::Plane;
  f.dtype = EdtgDtype::Complex128;
  f.dims = {static_cast<std::uint32_t>(p.grid.n1),
            static_cast<std::uint32_t>(p.grid.n2)};
  f.spacing = {p.grid.dxi1, p.grid.dxi2};
  const LateralFreq o = p.grid.node(0, 0);
  f.origin = {o.xi1, o.xi2};
  f.metadata["components"] = 3;
  f.metadata["side"] = p.side == Side::Transmission ? "T" : "R";
  f.metadata["r_M"] = p.r_M;
  f.metadata["background"] = detail::bg_to_json(p.bg);
  f.metadata["waves"] = nlohmann::json::array();
  for (const auto& w : p.waves)
    f.metadata["waves"].push_back(detail::wave_to_json(w));
  f.metadata["mask"] = detail::mask_to_json(p.mask);
  f.cplx_payload.reserve(p.values.size() * 3);
  for (const auto& v : p.values)
    for (int c = 0; c < 3; ++c) f.cplx_payload.push_back(v(c));
  return f;
}

inline MeasurementPlane plane_from_edtg(const EdtgFile& f) {
  if (f.kind != EdtgKind::Plane)
    throw std::runtime_error("edtg: expected a plane file (kind 0)");
  MeasurementPlane p;
  p.grid.n1 = static_cast<int>(f.dims.at(0));
  p.grid.n2 = static_cast<int>(f.dims.at(1));
  p.grid.dxi1 = f.spacing.at(0);
  p.grid.dxi2 = f.spacing.at(1);
  p.side = f.metadata.at("side").get<std::string>() == "T"
               ? Side::Transmission
               : Side::Reflection;
  p.r_M = f.metadata.at("r_M");
  p.bg = detail::bg_from_json(f.metadata.at("background"));
  for (const auto& jw : f.metadata.at("waves"))
    p.waves.push_back(detail::wave_from_json(jw));
  p.mask = detail::mask_from_json(f.metadata.at("mask"));
  const std::size_t npts = p.grid.size();
  if (f.cplx_payload.size() != 3 * npts || p.mask.size() != npts)
    throw std::runtime_error("edtg: plane payload/mask size mismatch");
  p.values.resize(npts);
  for (std::size_t i = 0; i < npts; ++i)
    p.values[i] = CVec3(f.cplx_payload[3 * i], f.cplx_payload[3 * i + 1],
                        f.cplx_payload[3 * i + 2]);
  return p;
}

inline EdtgFile to_edtg(const ModeGrid& m) {
  EdtgFile f;
  f.kind = EdtgKind::ModeGrid;
  f.dtype = EdtgDtype::Complex128;
  f.dims = {static_cast<std::uint32_t>(m.grid.n1),
            static_cast<std::uint32_t>(m.grid.n2)};
  f.spacing = {m.grid.dxi1, m.grid.dxi2};
  const LateralFreq o = m.grid.node(0, 0);
  f.origin = {o.xi1, o.xi2};
  f.metadata["components"] = 1;
  f.metadata["mode"] = to_string(m.tag);
  f.metadata["side"] = m.side == Side::Transmission ? "T" : "R";
  f.metadata["r_M"] = m.r_M;
  f.metadata["background"] = detail::bg_to_json(m.bg);
  f.metadata["wave"] = detail::wave_to_json(m.wave);
  f.metadata["mask"] = detail::mask_to_json(m.mask);
  f.cplx_payload = m.values;
  return f;
}

inline ModeGrid mode_grid_from_edtg(const EdtgFile& f) {
  if (f.kind != EdtgKind::ModeGrid)
    throw std::runtime_error("edtg: expected a mode-grid file (kind 1)");
  ModeGrid m;
  m.grid.n1 = static_cast<int>(f.dims.at(0));
  m.grid.n2 = static_cast<int>(f.dims.at(1));
  m.grid.dxi1 = f.spacing.at(0);
  m.grid.dxi2 = f.spacing.at(1);
  m.tag = mode_tag_from_string(f.metadata.at("mode"));
  m.side = f.metadata.at("side").get<std::string>() == "T"
               ? Side::Transmission
               : Side::Reflection;
  m.r_M = f.metadata.at("r_M");
  m.bg = detail::bg_from_json(f.metadata.at("background"));
  m.wave = detail::wave_from_json(f.metadata.at("wave"));
  m.mask = detail::mask_from_json(f.metadata.at("mask"));
  m.values = f.cplx_payload;
  if (m.values.size() != m.grid.size() || m.mask.size() != m.grid.size())
    throw std::runtime_error("edtg: mode grid payload/mask size mismatch");
  return m;
}

/// Accumulated k-grid: channels [mass, weight] (weight stored in the real
/// part of the second channel).
inline EdtgFile to_edtg(const KGrid& kg) {
  EdtgFile f;
  f.kind = EdtgKind::KGrid;
  f.dtype = EdtgDtype::Complex128;
  const auto n = static_cast<std::uint32_t>(kg.spec.n);
  f.dims = {n, n, n};
  f.spacing = {kg.spec.dy(), kg.spec.dy(), kg.spec.dy()};
  const Vec3 o = kg.spec.node(0, 0, 0);
  f.origin = {o(0), o(1), o(2)};
  f.metadata["components"] = 2;
  f.metadata["channels"] = {"mass", "weight"};
  f.metadata["deposited"] = kg.deposited;
  f.metadata["out_of_extent"] = kg.out_of_extent;
  f.cplx_payload.reserve(kg.mass.size() * 2);
  for (std::size_t v = 0; v < kg.mass.size(); ++v) {
    f.cplx_payload.push_back(kg.mass[v]);
    f.cplx_payload.push_back(cplx(kg.weight[v], 0.0));
  }
  return f;
}

/// Solved parameter spectra on a k-grid: channels [dmu, dlambda, drho];
/// per-voxel flags live in the diagnostics CSV.
inline EdtgFile solved_to_edtg(const KGridSpec& spec,
                               const std::vector<VoxelSolve>& sol) {
  EdtgFile f;
  f.kind = EdtgKind::KGrid;
  f.dtype = EdtgDtype::Complex128;
  const auto n = static_cast<std::uint32_t>(spec.n);
  f.dims = {n, n, n};
  f.spacing = {spec.dy(), spec.dy(), spec.dy()};
  const Vec3 o = spec.node(0, 0, 0);
  f.origin = {o(0), o(1), o(2)};
  f.metadata["components"] = 3;
  f.metadata["channels"] = {"dmu", "dlambda", "drho"};
  f.cplx_payload.reserve(sol.size() * 3);
  for (const auto& s : sol) {
    // undetermined components are written as NaN, never as zeros
    for (int p = 0; p < 3; ++p)
      f.cplx_payload.push_back(
          s.undetermined[p]
              ? cplx(std::numeric_limits<double>::quiet_NaN(),
                     std::numeric_limits<double>::quiet_NaN())
              : s.spectra(p));
  }
  return f;
}

inline EdtgFile to_edtg(const VolumeGrid& v) {
  EdtgFile f;
  f.kind = EdtgKind::Volume;
  f.dtype = EdtgDtype::Complex128;
  const auto n = static_cast<std::uint32_t>(v.n);
  f.dims = {n, n, n};
  f.spacing = {v.dr, v.dr, v.dr};
  const Vec3 o = v.node(0, 0, 0);
  f.origin = {o(0), o(1), o(2)};
  f.metadata["components"] = 1;
  f.metadata["imag_fraction"] = v.imag_fraction();
  f.cplx_payload = v.values;
  return f;
}

inline EdtgFile occupancy_to_edtg(const KGridSpec& spec,
                                  const std::vector<double>& occupancy,
                                  const nlohmann::json& extra = {}) {
  EdtgFile f;
  f.kind = EdtgKind::Occupancy;
  f.dtype = EdtgDtype::Float64;
  const auto n = static_cast<std::uint32_t>(spec.n);
  f.dims = {n, n, n};
  f.spacing = {spec.dy(), spec.dy(), spec.dy()};
  const Vec3 o = spec.node(0, 0, 0);
  f.origin = {o(0), o(1), o(2)};
  f.metadata["components"] = 1;
  if (!extra.is_null()) f.metadata["set"] = extra;
  f.real_payload = occupancy;
  return f;
}

}  // namespace edt
