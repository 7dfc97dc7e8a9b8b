#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "edt/forward.hpp"
#include "edt/phantom.hpp"
#include "edt/spectral.hpp"
#include "edt/types.hpp"

namespace edt {

/// Scattered/incident mode pairs. The first letter is the scattered branch
/// (alpha, fixes the locus radius k_alpha), the second the excitation
/// (beta, fixes the locus center -k_beta e3). SP has two redundant
/// extraction components; SS separates into two independent scalars named
/// after their coefficient vectors in the lateral decomposition
///   (qp x M)_lat = A (e3 x As) + B (xi'.As)(e3 x qp).
enum class ModeTag { PP, PS, SP1, SP2, SS1, SS2 };

inline const char* to_string(ModeTag t) {
  switch (t) {
    case ModeTag::PP: return "PP";
    case ModeTag::PS: return "PS";
    case ModeTag::SP1: return "SP1";
    case ModeTag::SP2: return "SP2";
    case ModeTag::SS1: return "SS1";
    case ModeTag::SS2: return "SS2";
  }
  return "?";
}

inline ModeTag mode_tag_from_string(const std::string& s) {
  if (s == "PP") return ModeTag::PP;
  if (s == "PS") return ModeTag::PS;
  if (s == "SP1") return ModeTag::SP1;
  if (s == "SP2") return ModeTag::SP2;
  if (s == "SS1") return ModeTag::SS1;
  if (s == "SS2") return ModeTag::SS2;
  throw std::invalid_argument("unknown mode tag: " + s);
}

/// Scattered branch (locus sphere radius).
inline WaveMode mode_scattered(ModeTag t) {
  return (t == ModeTag::PP || t == ModeTag::PS) ? WaveMode::P : WaveMode::S;
}

/// Excitation branch (locus sphere center).
inline WaveMode mode_excitation(ModeTag t) {
  return (t == ModeTag::PP || t == ModeTag::SP1 || t == ModeTag::SP2)
             ? WaveMode::P
             : WaveMode::S;
}

inline double mode_k_alpha(ModeTag t, const Background& bg) {
  return mode_scattered(t) == WaveMode::S ? bg.ks : bg.kp;
}

inline double mode_k_beta(ModeTag t, const Background& bg) {
  return mode_excitation(t) == WaveMode::S ? bg.ks : bg.kp;
}

/// Locus point y(xi) = (xi, s kappa_alpha - k_beta); requires |xi| < k_alpha.
inline Vec3 mode_locus(ModeTag t, const LateralFreq& xi, Side side,
                       const Background& bg) {
  const double ka = mode_k_alpha(t, bg);
  if (!(xi.norm2() < ka * ka))
    throw std::invalid_argument("mode_locus: xi outside the propagating disc");
  const double kappa = std::sqrt(ka * ka - xi.norm2());
  return {xi.xi1, xi.xi2, side_sign(side) * kappa - mode_k_beta(t, bg)};
}

/// Default relative threshold for the per-node denominator guards.
inline constexpr double kTauDenDefault = 1e-3;

/// One separated scattering function sampled on its k-space locus.
struct ModeGrid {
  ModeTag tag = ModeTag::PP;
  Side side = Side::Transmission;
  double r_M = 0.0;
  XiGrid grid;
  std::vector<cplx> values;
  std::vector<std::uint8_t> mask;  // 1 = valid
  Background bg;
  IncidentWave wave;

  Vec3 locus(std::size_t lin) const {
    return mode_locus(tag, grid.node(lin), side, bg);
  }
  std::size_t valid_count() const {
    std::size_t c = 0;
    for (auto m : mask) c += m;
    return c;
  }
};

namespace detail {

inline const IncidentWave& single_excitation(const MeasurementPlane& plane,
                                             WaveMode required,
                                             const char* who) {
  if (plane.waves.size() != 1)
    throw std::invalid_argument(std::string(who) +
                                ": separation requires a single-excitation "
                                "plane (simultaneous S+P is not separable)");
  if (plane.waves[0].mode != required)
    throw std::invalid_argument(std::string(who) +
                                ": wrong excitation mode for this extractor");
  return plane.waves[0];
}

inline ModeGrid init_grid(ModeTag tag, const MeasurementPlane& plane) {
  ModeGrid g;
  g.tag = tag;
  g.side = plane.side;
  g.r_M = plane.r_M;
  g.grid = plane.grid;
  g.bg = plane.bg;
  g.wave = plane.waves[0];
  g.values.assign(plane.grid.size(), cplx(0.0, 0.0));
  g.mask.assign(plane.grid.size(), 0);
  return g;
}

/// Nodes usable by a mode extractor: plane-valid and strictly inside the
/// scattered branch's propagating disc (the locus must stay real).
inline bool node_in_disc(const MeasurementPlane& plane, std::size_t lin,
                         double k_alpha) {
  if (!plane.mask[lin]) return false;
  const LateralFreq xi = plane.grid.node(lin);
  return xi.norm2() < k_alpha * k_alpha && !near_ring(xi, k_alpha);
}

}  // namespace detail

/// PP scattering function:
///   f_pp = sqrt(2/pi) e^{-i kappa_p r_M} (qs . M) / ((e3.Ap)(qs.qp)),
/// masked where |qs.qp| < tau ks kp.
inline ModeGrid scatfun_pp(const MeasurementPlane& plane,
                           double tau_den = kTauDenDefault) {
  const auto& wave =
      detail::single_excitation(plane, WaveMode::P, "scatfun_pp");
  ModeGrid out = detail::init_grid(ModeTag::PP, plane);
  const double a3 = wave.amplitude(2);
  for (std::size_t lin = 0; lin < plane.grid.size(); ++lin) {
    if (!detail::node_in_disc(plane, lin, plane.bg.kp)) continue;
    const LateralFreq xi = plane.grid.node(lin);
    const auto pv = propagation_vectors(xi, plane.bg, plane.side);
    const cplx qsqp = cdot(pv.qs, pv.qp);
    if (std::abs(qsqp) <= tau_den * plane.bg.ks * plane.bg.kp) continue;
    const cplx num = cdot(pv.qs, plane.values[lin]);
    out.values[lin] = std::sqrt(2.0 / M_PI) *
                      std::exp(-iu * pv.kappa_p * plane.r_M) * num /
                      (a3 * qsqp);
    out.mask[lin] = 1;
  }
  return out;
}

/// PS scattering function:
///   f_ps = sqrt(2/pi) e^{-i kappa_p r_M} (qs . M) / ((xi'.As)(qs.qp)),
/// masked where |xi'.As| < tau |xi||As| (the xi' _|_ As line is
/// structurally unrecoverable) or |qs.qp| small.
inline ModeGrid scatfun_ps(const MeasurementPlane& plane,
                           double tau_den = kTauDenDefault) {
  const auto& wave =
      detail::single_excitation(plane, WaveMode::S, "scatfun_ps");
  ModeGrid out = detail::init_grid(ModeTag::PS, plane);
  const double amp_norm = wave.amplitude.norm();
  for (std::size_t lin = 0; lin < plane.grid.size(); ++lin) {
    if (!detail::node_in_disc(plane, lin, plane.bg.kp)) continue;
    const LateralFreq xi = plane.grid.node(lin);
    const double xia =
        xi.xi1 * wave.amplitude(0) + xi.xi2 * wave.amplitude(1);
    if (std::abs(xia) <= tau_den * xi.norm() * amp_norm) continue;
    const auto pv = propagation_vectors(xi, plane.bg, plane.side);
    const cplx qsqp = cdot(pv.qs, pv.qp);
    if (std::abs(qsqp) <= tau_den * plane.bg.ks * plane.bg.kp) continue;
    const cplx num = cdot(pv.qs, plane.values[lin]);
    out.values[lin] = std::sqrt(2.0 / M_PI) *
                      std::exp(-iu * pv.kappa_p * plane.r_M) * num /
                      (xia * qsqp);
    out.mask[lin] = 1;
  }
  return out;
}

/// SP scattering function from lateral component i of the pressure-filtered
/// data:
///   f_sp = sqrt(2/pi) e^{-i kappa_s r_M} ((qp x M).ei) / ((e3.Ap)((e3 x qp).ei)),
/// masked where the selected denominator component is small. Components 1
/// and 2 carry the same scalar and agree on jointly valid nodes.
inline ModeGrid scatfun_sp(const MeasurementPlane& plane, int component,
                           double tau_den = kTauDenDefault) {
  if (component != 1 && component != 2)
    throw std::invalid_argument("scatfun_sp: component must be 1 or 2");
  const auto& wave =
      detail::single_excitation(plane, WaveMode::P, "scatfun_sp");
  ModeGrid out = detail::init_grid(
      component == 1 ? ModeTag::SP1 : ModeTag::SP2, plane);
  const double a3 = wave.amplitude(2);
  for (std::size_t lin = 0; lin < plane.grid.size(); ++lin) {
    if (!detail::node_in_disc(plane, lin, plane.bg.ks)) continue;
    const LateralFreq xi = plane.grid.node(lin);
    const auto pv = propagation_vectors(xi, plane.bg, plane.side);
    const CVec3 e3xqp = ccross(Vec3::UnitZ().cast<cplx>().eval(), pv.qp);
    const cplx den = e3xqp(component - 1);
    if (std::abs(den) <= tau_den * xi.norm()) continue;
    const cplx num = ccross(pv.qp, plane.values[lin])(component - 1);
    out.values[lin] = std::sqrt(2.0 / M_PI) *
                      std::exp(-iu * pv.kappa_s * plane.r_M) * num /
                      (a3 * den);
    out.mask[lin] = 1;
  }
  return out;
}

/// SS scattering functions: per node solve the 2x2 lateral system
///   sqrt(2/pi) e^{-i kappa_s r_M} (qp x M)_lat = A (e3 x As) + gB (e3 x qp)
/// for (A, gB) and divide the second scalar by (xi'.As). SS1 carries A,
/// masked where the system determinant is small relative to the row norms;
/// SS2 additionally needs |xi'.As| away from zero.
inline std::pair<ModeGrid, ModeGrid> scatfun_ss(
    const MeasurementPlane& plane, double tau_den = kTauDenDefault) {
  const auto& wave =
      detail::single_excitation(plane, WaveMode::S, "scatfun_ss");
  ModeGrid out1 = detail::init_grid(ModeTag::SS1, plane);
  ModeGrid out2 = detail::init_grid(ModeTag::SS2, plane);
  const double a1 = wave.amplitude(0), a2 = wave.amplitude(1);
  const double amp_norm = wave.amplitude.norm();
  for (std::size_t lin = 0; lin < plane.grid.size(); ++lin) {
    if (!detail::node_in_disc(plane, lin, plane.bg.ks)) continue;
    const LateralFreq xi = plane.grid.node(lin);
    const auto pv = propagation_vectors(xi, plane.bg, plane.side);
    const CVec3 e3xqp = ccross(Vec3::UnitZ().cast<cplx>().eval(), pv.qp);
    // columns (e3 x As)_lat and (e3 x qp)_lat
    const cplx u1 = -a2, u2 = a1;
    const cplx v1 = e3xqp(0), v2 = e3xqp(1);
    const cplx det = u1 * v2 - u2 * v1;
    const double row1 = std::sqrt(std::norm(u1) + std::norm(v1));
    const double row2 = std::sqrt(std::norm(u2) + std::norm(v2));
    if (std::abs(det) <= tau_den * row1 * row2) continue;
    const CVec3 filtered = ccross(pv.qp, plane.values[lin]);
    const cplx scale =
        std::sqrt(2.0 / M_PI) * std::exp(-iu * pv.kappa_s * plane.r_M);
    const cplx r1 = scale * filtered(0);
    const cplx r2 = scale * filtered(1);
    const cplx A = (r1 * v2 - r2 * v1) / det;
    const cplx gB = (u1 * r2 - u2 * r1) / det;
    out1.values[lin] = A;
    out1.mask[lin] = 1;
    const double xia = xi.xi1 * a1 + xi.xi2 * a2;
    if (std::abs(xia) <= tau_den * xi.norm() * amp_norm) continue;
    out2.values[lin] = gB / xia;
    out2.mask[lin] = 1;
  }
  return {std::move(out1), std::move(out2)};
}

/// Coefficient row of a mode: the scattering function at its locus equals
///   c_mu dmu^ + c_lambda dlambda^ + c_rho drho^
/// with the spectra evaluated at mode_locus(tag, xi, side). Derived from the
/// lateral-FT Green tensor algebra (see tools/verify_identities.py); PS, SP
/// and both SS rows are lambda-free (a dlambda source term is a pure
/// gradient and radiates no shear; its PS/SP contributions cancel exactly).
struct ModeRow {
  cplx c_mu{0.0, 0.0};
  cplx c_lambda{0.0, 0.0};
  cplx c_rho{0.0, 0.0};

  cplx apply(const ParameterSpectra& sp) const {
    return c_mu * sp.dmu + c_lambda * sp.dlambda + c_rho * sp.drho;
  }
};

inline ModeRow mode_coefficients(ModeTag tag, const LateralFreq& xi, Side side,
                                 const Background& bg) {
  const double ka = mode_k_alpha(tag, bg);
  if (!(xi.norm2() < ka * ka))
    throw std::invalid_argument(
        "mode_coefficients: xi outside the propagating disc");
  const double sg = side_sign(side);
  // kappa_p is evanescent (imaginary) on the SP/SS discs beyond |xi| = kp;
  // the rows stay valid there with the complex continuation.
  const cplx kappa_s = axial_wavenumber(xi, bg.ks);
  const cplx kappa_p = axial_wavenumber(xi, bg.kp);
  const double m = bg.mu0 * bg.ks * bg.ks;
  const double w2 = bg.omega * bg.omega;
  const cplx qsqp = -(xi.norm2() + kappa_s * kappa_p);
  ModeRow row;
  switch (tag) {
    case ModeTag::PP:
      row.c_mu = 2.0 * bg.kp * kappa_p / m;
      row.c_lambda = bg.kp * bg.kp * bg.kp / (m * kappa_p);
      row.c_rho = -sg * w2 / m;
      break;
    case ModeTag::PS:
      row.c_mu = 2.0 * sg * bg.ks / m;
      row.c_rho = -w2 / (m * kappa_p);
      break;
    case ModeTag::SP1:
    case ModeTag::SP2:
      row.c_mu = 2.0 * iu * sg * bg.kp * qsqp / m;
      row.c_rho = -iu * w2 * qsqp / (m * kappa_s);
      break;
    case ModeTag::SS1:
      row.c_mu = -bg.ks * kappa_p / bg.mu0;
      row.c_rho = sg * kappa_p * w2 / (bg.mu0 * kappa_s);
      break;
    case ModeTag::SS2:
      row.c_mu = iu * bg.ks * ((kappa_s - kappa_p) * kappa_s + qsqp) /
                 (m * kappa_s);
      row.c_rho = -iu * sg * (kappa_s - kappa_p) * w2 / (m * kappa_s);
      break;
  }
  return row;
}

/// SP components carry the same scalar; report their agreement on jointly
/// valid nodes (consistency diagnostic).
inline double sp_component_max_reldiff(const ModeGrid& sp1,
                                       const ModeGrid& sp2) {
  double worst = 0.0;
  for (std::size_t lin = 0; lin < sp1.values.size(); ++lin) {
    if (!sp1.mask[lin] || !sp2.mask[lin]) continue;
    const double scale =
        std::max(std::abs(sp1.values[lin]), std::abs(sp2.values[lin]));
    if (scale == 0.0) continue;
    worst = std::max(worst,
                     std::abs(sp1.values[lin] - sp2.values[lin]) / scale);
  }
  return worst;
}

}  // namespace edt
