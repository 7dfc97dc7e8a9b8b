#pragma once

#include <Eigen/Dense>
#include <complex>

namespace edt {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using CMat3 = Eigen::Matrix3cd;

inline constexpr cplx iu{0.0, 1.0};

/// Which measurement plane: transmission sits at x3 = +r_M (behind the
/// scatterer, seen from the incoming wave), reflection at x3 = -r_M.
enum class Side { Transmission, Reflection };

inline int side_sign(Side s) { return s == Side::Transmission ? +1 : -1; }

enum class WaveMode { S, P };

/// Lateral spatial frequency (the transform variables of x1, x2).
struct LateralFreq {
  double xi1 = 0.0;
  double xi2 = 0.0;

  double norm2() const { return xi1 * xi1 + xi2 * xi2; }
  double norm() const { return std::sqrt(norm2()); }
  Vec3 embed() const { return {xi1, xi2, 0.0}; }  // xi' = (xi, 0)
};

// bilinear complex dot / cross products (no conjugation); Eigen's dot()
// conjugates, which breaks the q . G q = 0 algebra.
inline cplx cdot(const CVec3& a, const CVec3& b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

inline CVec3 ccross(const CVec3& a, const CVec3& b) {
  return {a(1) * b(2) - a(2) * b(1),
          a(2) * b(0) - a(0) * b(2),
          a(0) * b(1) - a(1) * b(0)};
}

}  // namespace edt
