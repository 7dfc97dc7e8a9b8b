#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "edt/fft.hpp"
#include "edt/parallel.hpp"
#include "edt/phantom.hpp"
#include "edt/spectral.hpp"
#include "edt/types.hpp"

namespace edt {

/// Uniform lateral-frequency grid, centered at the origin: node (i, j) sits
/// at ((i - n1/2) dxi1, (j - n2/2) dxi2). Even dimensions keep the grid
/// FFT-dual friendly.
struct XiGrid {
  int n1 = 0;
  int n2 = 0;
  double dxi1 = 0.0;
  double dxi2 = 0.0;

  std::size_t size() const {
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
  }
  LateralFreq node(int i, int j) const {
    return {(i - n1 / 2) * dxi1, (j - n2 / 2) * dxi2};
  }
  LateralFreq node(std::size_t lin) const {
    return node(static_cast<int>(lin) / n2, static_cast<int>(lin) % n2);
  }
};

inline XiGrid make_xi_grid(int n, double xi_max) {
  if (n <= 0 || n % 2 != 0)
    throw std::invalid_argument("xi grid size must be a positive even number");
  const double d = 2.0 * xi_max / n;
  return XiGrid{n, n, d, d};
}

/// Complex 3-vector field F_{1,2} u(xi, +-r_M) on a lateral-frequency grid,
/// one per (excitation set, side, orientation, frequency). Nodes inside the
/// singular-ring guard bands are masked and carry zero values.
struct MeasurementPlane {
  Side side = Side::Transmission;
  double r_M = 0.0;
  XiGrid grid;
  std::vector<CVec3> values;
  std::vector<std::uint8_t> mask;  // 1 = valid
  Background bg;
  std::vector<IncidentWave> waves;

  std::size_t valid_count() const {
    std::size_t c = 0;
    for (auto m : mask) c += m;
    return c;
  }
};

/// One node of the diffraction identity: with s = sign(x3),
///   F_{1,2} u = sqrt(pi/2) [ Gs e^{i kap_s r_M} sum_w Ff_w(xi, s kap_s - k_w)
///                          + Gp e^{i kap_p r_M} sum_w Ff_w(xi, s kap_p - k_w) ]
/// where w runs over the given excitations and k_w is the incident
/// wavenumber of w.
inline CVec3 forward_node(const Phantom& ph,
                          const std::vector<IncidentWave>& waves,
                          const Background& bg, Side side, double r_M,
                          const LateralFreq& xi) {
  const GreenHat gh = green_hat(xi, bg, side);
  const double sg = side_sign(side);
  CVec3 fs_branch = CVec3::Zero();
  CVec3 fp_branch = CVec3::Zero();
  for (const auto& w : waves) {
    const double kw = w.wavenumber(bg);
    fs_branch +=
        scattering_potential_ft(ph, w, bg, xi, sg * gh.pv.kappa_s - kw);
    fp_branch +=
        scattering_potential_ft(ph, w, bg, xi, sg * gh.pv.kappa_p - kw);
  }
  const cplx es = std::exp(iu * gh.pv.kappa_s * r_M);
  const cplx ep = std::exp(iu * gh.pv.kappa_p * r_M);
  return std::sqrt(M_PI / 2.0) * (es * (gh.gs * fs_branch).eval() +
                                  ep * (gh.gp * fp_branch).eval());
}

inline MeasurementPlane forward_full(const Phantom& ph,
                                     const std::vector<IncidentWave>& waves,
                                     const Background& bg, Side side,
                                     double r_M, const XiGrid& grid,
                                     int threads = 1) {
  validate(ph);
  if (!(r_M > ph.r_support))
    throw std::invalid_argument("forward_full: r_M must exceed r_support");
  if (waves.empty())
    throw std::invalid_argument("forward_full: at least one excitation");
  MeasurementPlane plane;
  plane.side = side;
  plane.r_M = r_M;
  plane.grid = grid;
  plane.bg = bg;
  plane.waves = waves;
  plane.values.assign(grid.size(), CVec3::Zero());
  plane.mask.assign(grid.size(), 0);
  parallel_for(grid.size(), threads, [&](std::size_t lin) {
    const LateralFreq xi = grid.node(lin);
    if (near_ring(xi, bg.ks) || near_ring(xi, bg.kp)) return;
    plane.values[lin] = forward_node(ph, waves, bg, side, r_M, xi);
    plane.mask[lin] = 1;
  });
  if (plane.valid_count() == 0)
    throw std::runtime_error("forward_full: every grid node is masked");
  return plane;
}

/// Analytic 3D transform of a compactly supported source, together with its
/// declared axial support; entire in the third argument.
struct SourceSpectrum {
  std::function<CVec3(const LateralFreq&, cplx)> ft;
  double z_lo = 0.0;
  double z_hi = 0.0;
};

/// Field spectrum of a general one-sided source at plane x3: only the
/// Heaviside split term on the source side of the plane survives, and
/// sign(x3 - support) selects the propagation vectors.
inline CVec3 forward_general_source(const SourceSpectrum& src,
                                    const Background& bg, double x3,
                                    const LateralFreq& xi) {
  if (x3 > src.z_lo && x3 < src.z_hi)
    throw std::invalid_argument(
        "forward_general_source: plane intersects the source support");
  const Side side =
      x3 >= src.z_hi ? Side::Transmission : Side::Reflection;
  const GreenHat gh = green_hat(xi, bg, side);
  const double sg = side_sign(side);
  const cplx es = std::exp(iu * gh.pv.kappa_s * sg * x3);
  const cplx ep = std::exp(iu * gh.pv.kappa_p * sg * x3);
  return std::sqrt(M_PI / 2.0) *
         (es * (gh.gs * src.ft(xi, sg * gh.pv.kappa_s)).eval() +
          ep * (gh.gp * src.ft(xi, sg * gh.pv.kappa_p)).eval());
}

// --- sampled plane fields and their lateral transform ----------------------

/// Uniform spatial grid on a plane, node (i, j) at ((i-n/2) dx, (j-n/2) dx).
struct PlaneSamples {
  int n1 = 0;
  int n2 = 0;
  double dx1 = 0.0;
  double dx2 = 0.0;
  std::vector<CVec3> values;  // row-major

  std::size_t size() const {
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
  }
  Vec2 node(int i, int j) const {
    return {(i - n1 / 2) * dx1, (j - n2 / 2) * dx2};
  }
};

struct LateralField {
  XiGrid grid;
  std::vector<CVec3> values;
  bool boundary_warning = false;  // window truncation criterion unmet
};

/// In-place Tukey (tapered cosine) window, flat over the central
/// flat_fraction of each axis. Suppresses the spectral sidelobe leakage of
/// the slowly decaying grazing-wave tail before plane_partial_ft.
inline void apply_tukey_window(PlaneSamples& s, double flat_fraction) {
  if (!(flat_fraction >= 0.0 && flat_fraction <= 1.0))
    throw std::invalid_argument("tukey flat fraction must be in [0, 1]");
  const auto w1 = [flat_fraction](int i, int n) {
    const double x = std::abs((i - n / 2) / (0.5 * n));
    if (x <= flat_fraction) return 1.0;
    const double t = (x - flat_fraction) / (1.0 - flat_fraction);
    return 0.5 * (1.0 + std::cos(M_PI * t));
  };
  for (int i = 0; i < s.n1; ++i)
    for (int j = 0; j < s.n2; ++j)
      s.values[static_cast<std::size_t>(i) * s.n2 + j] *= w1(i, s.n1) * w1(j, s.n2);
}

/// Discrete approximation of F_{1,2} u(xi, x3) = (2 pi)^{-1} int e^{-i xi.x} u,
/// scaled by dx1 dx2 / (2 pi), evaluated on the dual grid
/// dxi_d = 2 pi / (n_d dx_d). Sets boundary_warning when the samples have
/// not decayed below 1e-3 of their peak at the window edge.
inline LateralField plane_partial_ft(const PlaneSamples& in) {
  LateralField out;
  out.grid.n1 = in.n1;
  out.grid.n2 = in.n2;
  out.grid.dxi1 = 2.0 * M_PI / (in.n1 * in.dx1);
  out.grid.dxi2 = 2.0 * M_PI / (in.n2 * in.dx2);
  const std::vector<int> dims{in.n1, in.n2};
  const double scale = in.dx1 * in.dx2 / (2.0 * M_PI);
  out.values.assign(in.size(), CVec3::Zero());
  std::vector<cplx> comp(in.size());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < in.size(); ++k) comp[k] = in.values[k](c);
    const auto hat = fft::centered_dft(comp, dims, -1);
    for (std::size_t k = 0; k < in.size(); ++k) out.values[k](c) = scale * hat[k];
  }
  double peak = 0.0, edge = 0.0;
  for (int i = 0; i < in.n1; ++i)
    for (int j = 0; j < in.n2; ++j) {
      const double m = in.values[static_cast<std::size_t>(i) * in.n2 + j].norm();
      peak = std::max(peak, m);
      if (i == 0 || j == 0 || i == in.n1 - 1 || j == in.n2 - 1)
        edge = std::max(edge, m);
    }
  out.boundary_warning = peak > 0.0 && edge > 1e-3 * peak;
  return out;
}

/// Inverse of plane_partial_ft on the matching dual grids (round trip is an
/// identity up to rounding).
inline PlaneSamples plane_partial_ft_inverse(const LateralField& in) {
  PlaneSamples out;
  out.n1 = in.grid.n1;
  out.n2 = in.grid.n2;
  out.dx1 = 2.0 * M_PI / (in.grid.n1 * in.grid.dxi1);
  out.dx2 = 2.0 * M_PI / (in.grid.n2 * in.grid.dxi2);
  const std::vector<int> dims{out.n1, out.n2};
  const double scale = in.grid.dxi1 * in.grid.dxi2 / (2.0 * M_PI);
  out.values.assign(in.values.size(), CVec3::Zero());
  std::vector<cplx> comp(in.values.size());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < in.values.size(); ++k) comp[k] = in.values[k](c);
    const auto u = fft::centered_dft(comp, dims, +1);
    for (std::size_t k = 0; k < in.values.size(); ++k)
      out.values[k](c) = scale * u[k];
  }
  return out;
}

}  // namespace edt
