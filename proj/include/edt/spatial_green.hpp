#pragma once

#include <cmath>
#include <stdexcept>

#include "edt/background.hpp"
#include "edt/types.hpp"

namespace edt {

namespace detail {

/// Hessian of the outgoing Helmholtz fundamental solution g = e^{ikr}/(4 pi r)
/// about the source, in closed form:
///   grad grad g = g [ (3/r^2 - 3ik/r - k^2) rhat rhat^T + (ik/r - 1/r^2) I ].
inline CMat3 helmholtz_hessian(const Vec3& d, double k) {
  const double r = d.norm();
  const Vec3 rhat = d / r;
  const cplx g = std::exp(iu * k * r) / (4.0 * M_PI * r);
  const cplx a = 3.0 / (r * r) - 3.0 * iu * k / r - k * k;
  const cplx b = iu * k / r - 1.0 / (r * r);
  CMat3 h = (g * a) * (rhat * rhat.transpose()).cast<cplx>();
  h += (g * b) * CMat3::Identity();
  return h;
}

inline cplx helmholtz_kernel(double r, double k) {
  return std::exp(iu * k * r) / (4.0 * M_PI * r);
}

}  // namespace detail

/// Full-space elastodynamic Green tensor
///   G(x, xsrc) = (1/(mu0 ks^2)) (ks^2 I + grad grad) g_s
///              - (1/(lambda0 + 2 mu0)) (grad grad / kp^2) g_p
/// with g_a = e^{i k_a |x-xsrc|} / (4 pi |x-xsrc|). Depends on x - xsrc only
/// and is symmetric. Used as the direct-space oracle for the spectral
/// formulas; not intended for near-singular evaluation.
inline CMat3 spatial_green_tensor(const Vec3& x, const Vec3& xsrc,
                                  const Background& bg) {
  const Vec3 d = x - xsrc;
  const double r = d.norm();
  if (!(r > 0.0))
    throw std::invalid_argument("spatial_green_tensor: coincident points");
  const double ks2 = bg.ks * bg.ks;
  const double kp2 = bg.kp * bg.kp;
  CMat3 g = (1.0 / (bg.mu0 * ks2)) *
            (ks2 * detail::helmholtz_kernel(r, bg.ks) * CMat3::Identity() +
             detail::helmholtz_hessian(d, bg.ks));
  g -= (1.0 / (bg.pwave_modulus() * kp2)) * detail::helmholtz_hessian(d, bg.kp);
  return g;
}

/// S (solenoidal) part alone; its columns are divergence free.
inline CMat3 spatial_green_tensor_s(const Vec3& x, const Vec3& xsrc,
                                    const Background& bg) {
  const Vec3 d = x - xsrc;
  const double r = d.norm();
  if (!(r > 0.0))
    throw std::invalid_argument("spatial_green_tensor_s: coincident points");
  const double ks2 = bg.ks * bg.ks;
  return (1.0 / (bg.mu0 * ks2)) *
         (ks2 * detail::helmholtz_kernel(r, bg.ks) * CMat3::Identity() +
          detail::helmholtz_hessian(d, bg.ks));
}

}  // namespace edt
