#include <gtest/gtest.h>

#include <random>

#include "edt/spatial_green.hpp"

using namespace edt;

namespace {

std::mt19937_64 rng(777);

Vec3 random_vec(double lim) {
  std::uniform_real_distribution<double> u(-lim, lim);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST(SpatialGreen, HessianMatchesFiniteDifferences) {
  // closed-form grad grad of e^{ikr}/(4 pi r) against central differences
  const double k = 2.3;
  for (int trial = 0; trial < 20; ++trial) {
    Vec3 d = random_vec(2.0);
    if (d.norm() < 0.3) continue;
    const double r = d.norm();
    const double h = 1e-4 * r;
    const auto g = [&](const Vec3& x) {
      return std::exp(iu * k * x.norm()) / (4.0 * M_PI * x.norm());
    };
    const CMat3 analytic = detail::helmholtz_hessian(d, k);
    CMat3 fd;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Vec3 da = Vec3::Zero(), db = Vec3::Zero();
        da(a) = h;
        db(b) = h;
        if (a == b) {
          fd(a, b) = (g(d + da) - 2.0 * g(d) + g(d - da)) / (h * h);
        } else {
          fd(a, b) = (g(d + da + db) - g(d + da - db) - g(d - da + db) +
                      g(d - da - db)) /
                     (4.0 * h * h);
        }
      }
    EXPECT_LT((analytic - fd).norm() / analytic.norm(), 1e-5);
  }
}

TEST(SpatialGreen, SymmetricTensor) {
  const auto bg = make_background(1.0, 1.5, 0.7, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 x = random_vec(3.0), xs = random_vec(1.0);
    if ((x - xs).norm() < 0.2) continue;
    const CMat3 g = spatial_green_tensor(x, xs, bg);
    EXPECT_LT((g - g.transpose()).norm() / g.norm(), 1e-13);
  }
}

TEST(SpatialGreen, TranslationInvariance) {
  const auto bg = make_background(1.0, 1.0, 1.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 x = random_vec(2.0), xs = random_vec(1.0), a = random_vec(5.0);
    if ((x - xs).norm() < 0.2) continue;
    const CMat3 g0 = spatial_green_tensor(x, xs, bg);
    const CMat3 g1 = spatial_green_tensor(x + a, xs + a, bg);
    EXPECT_LT((g0 - g1).norm() / g0.norm(), 1e-12);
  }
}

TEST(SpatialGreen, SolenoidalPartIsDivergenceFree) {
  const auto bg = make_background(1.0, 1.0, 1.0, 2.0);
  const double r = 5.0 / bg.ks;
  const Vec3 xs = Vec3::Zero();
  const Vec3 x0 = r * Vec3(0.36, -0.48, 0.8).normalized();
  const double h = 1e-4 * r;
  for (int col = 0; col < 3; ++col) {
    cplx div = 0.0;
    double scale = 0.0;
    for (int a = 0; a < 3; ++a) {
      Vec3 da = Vec3::Zero();
      da(a) = h;
      const CVec3 plus = spatial_green_tensor_s(x0 + da, xs, bg).col(col);
      const CVec3 minus = spatial_green_tensor_s(x0 - da, xs, bg).col(col);
      div += (plus(a) - minus(a)) / (2.0 * h);
      scale += std::abs((plus(a) - minus(a)) / (2.0 * h));
    }
    EXPECT_LT(std::abs(div) / (scale + 1e-300), 1e-6);
  }
}

TEST(SpatialGreen, CoincidentPointsRejected) {
  const auto bg = make_background(1.0, 1.0, 1.0, 2.0);
  const Vec3 x(0.5, 0.5, 0.5);
  EXPECT_THROW(spatial_green_tensor(x, x, bg), std::invalid_argument);
}
