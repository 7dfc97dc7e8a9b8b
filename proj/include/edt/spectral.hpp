#pragma once

#include <cmath>
#include <stdexcept>

#include "edt/background.hpp"
#include "edt/types.hpp"

namespace edt {

/// Relative half-width of the guard band around the singular rings
/// |xi| = ks and |xi| = kp where the lateral-FT Green tensor blows up.
inline constexpr double kRingGuardRel = 1e-6;

/// Axial wavenumber for lateral frequency xi and wavenumber k:
///   sqrt(k^2 - |xi|^2)          on the propagating disc,
///   i sqrt(|xi|^2 - k^2)        in the evanescent region.
/// Real nonnegative inside, positive imaginary outside; continuous (-> 0)
/// across the ring from both sides.
inline cplx axial_wavenumber(const LateralFreq& xi, double k) {
  const double d = k * k - xi.norm2();
  if (d >= 0.0) return cplx(std::sqrt(d), 0.0);
  return cplx(0.0, std::sqrt(-d));
}

/// True if xi lies within the relative guard band of the ring |xi| = k.
inline bool near_ring(const LateralFreq& xi, double k,
                      double eps_rel = kRingGuardRel) {
  return std::abs(xi.norm2() - k * k) < eps_rel * k * k;
}

/// Axial wavenumbers and propagation vectors for one lateral frequency.
/// q_alpha = i (xi' + kappa_alpha sign(x3) e3), so that the outgoing plane
/// wave e^{i(xi.x + kappa x3 sign(x3))} has gradient q_alpha times itself,
/// and q_alpha . q_alpha = -k_alpha^2.
struct PropagationVectors {
  cplx kappa_s;
  cplx kappa_p;
  CVec3 qs;
  CVec3 qp;
};

inline PropagationVectors propagation_vectors(const LateralFreq& xi,
                                              const Background& bg,
                                              Side side) {
  PropagationVectors pv;
  pv.kappa_s = axial_wavenumber(xi, bg.ks);
  pv.kappa_p = axial_wavenumber(xi, bg.kp);
  const double sg = side_sign(side);
  const CVec3 xip = xi.embed().cast<cplx>();
  const CVec3 e3 = Vec3::UnitZ().cast<cplx>();
  pv.qs = iu * (xip + pv.kappa_s * sg * e3);
  pv.qp = iu * (xip + pv.kappa_p * sg * e3);
  return pv;
}

/// Lateral Fourier transforms of the S and P branches of the Green tensor,
///   gs = ( i/(mu0 ks^2 kappa_s)) (ks^2 I + qs qs^T)
///   gp = (-i/(mu0 ks^2 kappa_p))  qp qp^T
/// Both symmetric; qs . (gs v) = 0 and qp x (gp v) = 0 for every v.
struct GreenHat {
  CMat3 gs;
  CMat3 gp;
  PropagationVectors pv;
};

inline GreenHat green_hat(const LateralFreq& xi, const Background& bg,
                          Side side, double eps_rel = kRingGuardRel) {
  if (near_ring(xi, bg.ks, eps_rel))
    throw std::domain_error("green_hat: |xi| within guard band of shear ring");
  if (near_ring(xi, bg.kp, eps_rel))
    throw std::domain_error(
        "green_hat: |xi| within guard band of pressure ring");
  GreenHat gh;
  gh.pv = propagation_vectors(xi, bg, side);
  const double m = bg.mu0 * bg.ks * bg.ks;
  gh.gs = (iu / (m * gh.pv.kappa_s)) *
          (bg.ks * bg.ks * CMat3::Identity() +
           gh.pv.qs * gh.pv.qs.transpose());
  gh.gp = (-iu / (m * gh.pv.kappa_p)) * (gh.pv.qp * gh.pv.qp.transpose());
  return gh;
}

}  // namespace edt
