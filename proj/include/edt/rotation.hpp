#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "edt/background.hpp"
#include "edt/modesep.hpp"
#include "edt/types.hpp"

namespace edt {

/// Rotation by angle theta about the unit axis n (componentwise closed
/// form). Orthogonal with determinant +1.
inline Mat3 rotation_matrix(double theta, const Vec3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("rotation_matrix: axis must be a unit vector");
  const double c = std::cos(theta), s = std::sin(theta);
  const double n1 = n(0), n2 = n(1), n3 = n(2);
  Mat3 r;
  r << n1 * n1 * (1 - c) + c, n1 * n2 * (1 - c) - n3 * s,
      n1 * n3 * (1 - c) + n2 * s,  //
      n1 * n2 * (1 - c) + n3 * s, n2 * n2 * (1 - c) + c,
      n2 * n3 * (1 - c) - n1 * s,  //
      n1 * n3 * (1 - c) - n2 * s, n2 * n3 * (1 - c) + n1 * s,
      n3 * n3 * (1 - c) + c;
  return r;
}

/// Fixed-axis rotation sweep: strictly increasing angle samples with
/// quadrature weights. A full uniform rotation (theta spanning [0, 2 pi])
/// covers each interior k-space point exactly twice, which the
/// backprojection divides out.
struct RotationTrajectory {
  Vec3 axis = Vec3::UnitX();
  std::vector<double> theta;   // sample angles
  std::vector<double> weight;  // quadrature weights (sum = swept angle)
  double theta_start = 0.0;
  double theta_end = 0.0;

  bool full_rotation() const {
    return theta_start == 0.0 &&
           std::abs(theta_end - 2.0 * M_PI) < 1e-12 && axis != Vec3::UnitZ();
  }
  std::size_t size() const { return theta.size(); }
};

/// Uniform midpoint rule over [0, 2 pi).
inline RotationTrajectory full_rotation_trajectory(const Vec3& axis,
                                                   int n_angles) {
  if (n_angles <= 0)
    throw std::invalid_argument("trajectory needs at least one angle");
  if (std::abs(axis.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("trajectory axis must be a unit vector");
  RotationTrajectory t;
  t.axis = axis;
  t.theta_start = 0.0;
  t.theta_end = 2.0 * M_PI;
  const double d = 2.0 * M_PI / n_angles;
  for (int j = 0; j < n_angles; ++j) {
    t.theta.push_back((j + 0.5) * d);
    t.weight.push_back(d);
  }
  return t;
}

/// Trace map: the k-space point informed by lateral frequency xi at
/// rotation angle theta,
///   T(xi, theta) = R_{theta,n} (xi, +-kappa_alpha - k_beta)^T.
/// Requires |xi| < k_alpha.
inline Vec3 trace_map(ModeTag mode, const LateralFreq& xi, double theta,
                      const Vec3& axis, Side side, const Background& bg) {
  return rotation_matrix(theta, axis) * mode_locus(mode, xi, side, bg);
}

/// Magnitude of the Jacobian determinant of the trace map for a fixed axis:
///   |grad T| = k_beta |theta'| |n2 xi1 - n1 xi2| / kappa_alpha.
inline double jacobian_fixed_axis(ModeTag mode, const LateralFreq& xi,
                                  double theta_prime, const Vec3& axis,
                                  const Background& bg) {
  const double ka = mode_k_alpha(mode, bg);
  if (!(xi.norm2() < ka * ka))
    throw std::invalid_argument("jacobian: xi outside the propagating disc");
  const double kappa = std::sqrt(ka * ka - xi.norm2());
  return mode_k_beta(mode, bg) * std::abs(theta_prime) *
         std::abs(axis(1) * xi.xi1 - axis(0) * xi.xi2) / kappa;
}

/// Preimage of the trace map under a full e1-axis rotation. Zero, one or two
/// (xi, theta) solutions; two in the interior (the Banach indicatrix value).
struct TracePreimage {
  LateralFreq xi;
  double theta;
};

inline std::vector<TracePreimage> trace_map_invert_e1(ModeTag mode,
                                                      const Vec3& y, Side side,
                                                      const Background& bg) {
  const double ka = mode_k_alpha(mode, bg);
  const double kb = mode_k_beta(mode, bg);
  const double xi1 = y(0);
  std::vector<TracePreimage> out;
  if (ka * ka - xi1 * xi1 <= 0.0) return out;
  const double rho2 = y(1) * y(1) + y(2) * y(2);
  const double sg = side_sign(side);
  // kappa of the preimage from the rotated-radius equation
  const double w = sg * (ka * ka - xi1 * xi1 + kb * kb - rho2) / (2.0 * kb);
  if (!(w > 0.0)) return out;
  const double xi2sq = ka * ka - xi1 * xi1 - w * w;
  if (!(xi2sq >= 0.0)) return out;
  const double h3 = sg * w - kb;
  for (double xi2 : {std::sqrt(xi2sq), -std::sqrt(xi2sq)}) {
    double theta = std::atan2(y(2), y(1)) - std::atan2(h3, xi2);
    if (theta < 0.0) theta += 2.0 * M_PI;
    out.push_back({LateralFreq{xi1, xi2}, theta});
    if (xi2sq == 0.0) break;
  }
  return out;
}

}  // namespace edt
