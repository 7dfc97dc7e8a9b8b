#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "edt/forward.hpp"
#include "edt/parallel.hpp"
#include "edt/phantom.hpp"
#include "edt/spatial_green.hpp"
#include "edt/types.hpp"

namespace edt {

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on the recurrence).
struct GaussLegendre {
  std::vector<double> node;
  std::vector<double> weight;

  explicit GaussLegendre(int n) {
    node.resize(n);
    weight.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      node[i] = x;
      weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

namespace detail {

/// Born sources tabulated on one shared tensor Gauss-Legendre lattice over
/// the support box, quadrature weights folded in. Nodes negligible for every
/// source are dropped.
struct QuadratureSourceBatch {
  std::vector<Vec3> point;
  std::vector<std::vector<CVec3>> value;  // [source][node]
};

inline QuadratureSourceBatch tabulate_sources(
    const Phantom& ph, const std::vector<std::vector<IncidentWave>>& sources,
    const Background& bg, int order) {
  const GaussLegendre gl(order);
  const double r = ph.r_support;
  std::vector<double> x(order), w(order);
  for (int i = 0; i < order; ++i) {
    x[i] = r * gl.node[i];
    w[i] = r * gl.weight[i];
  }
  const std::size_t ns = sources.size();
  QuadratureSourceBatch raw;
  raw.value.resize(ns);
  double peak = 0.0;
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j)
      for (int k = 0; k < order; ++k) {
        const Vec3 xp(x[i], x[j], x[k]);
        const double wq = w[i] * w[j] * w[k];
        raw.point.push_back(xp);
        for (std::size_t s = 0; s < ns; ++s) {
          CVec3 g = CVec3::Zero();
          for (const auto& wav : sources[s]) {
            const double kw = wav.wavenumber(bg);
            g += scattering_potential_spatial(ph, wav, bg, xp) *
                 std::exp(iu * kw * xp(2));
          }
          raw.value[s].push_back(g * wq);
          peak = std::max(peak, raw.value[s].back().norm());
        }
      }
  QuadratureSourceBatch out;
  out.value.resize(ns);
  for (std::size_t n = 0; n < raw.point.size(); ++n) {
    double mag = 0.0;
    for (std::size_t s = 0; s < ns; ++s)
      mag = std::max(mag, raw.value[s][n].norm());
    if (mag > 1e-16 * peak) {
      out.point.push_back(raw.point[n]);
      for (std::size_t s = 0; s < ns; ++s)
        out.value[s].push_back(raw.value[s][n]);
    }
  }
  return out;
}

}  // namespace detail

/// Direct-space fields u(x) = int G(x, x') g(x') dx' for several Born
/// sources g = sum_w f_w e^{i k_w x3'} at once, sharing the Green tensor
/// evaluations (the dominant cost). The validation oracle for every
/// spectral formula.
inline std::vector<std::vector<CVec3>> oracle_field_batch(
    const Phantom& ph, const std::vector<std::vector<IncidentWave>>& sources,
    const Background& bg, const std::vector<Vec3>& points, int order = 48,
    int threads = 1) {
  validate(ph);
  for (const auto& p : points)
    if (p.norm() <= ph.r_support)
      throw std::invalid_argument(
          "oracle_field: evaluation point inside phantom support");
  const auto src = detail::tabulate_sources(ph, sources, bg, order);
  const std::size_t ns = sources.size();
  std::vector<std::vector<CVec3>> out(
      ns, std::vector<CVec3>(points.size(), CVec3::Zero()));
  parallel_for(points.size(), threads, [&](std::size_t n) {
    std::vector<CVec3> acc(ns, CVec3::Zero());
    for (std::size_t m = 0; m < src.point.size(); ++m) {
      const CMat3 g = spatial_green_tensor(points[n], src.point[m], bg);
      for (std::size_t s = 0; s < ns; ++s) acc[s] += g * src.value[s][m];
    }
    for (std::size_t s = 0; s < ns; ++s) out[s][n] = acc[s];
  });
  return out;
}

inline std::vector<CVec3> oracle_field(const Phantom& ph,
                                       const std::vector<IncidentWave>& waves,
                                       const Background& bg,
                                       const std::vector<Vec3>& points,
                                       int order = 48, int threads = 1) {
  return oracle_field_batch(ph, {waves}, bg, points, order, threads)[0];
}

inline std::vector<Vec3> plane_sample_points(int n, double dx, Side side,
                                             double r_M) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  const double x3 = side_sign(side) * r_M;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pts.emplace_back((i - n / 2) * dx, (j - n / 2) * dx, x3);
  return pts;
}

/// Oracle field sampled on a measurement-plane window at x3 = +-r_M.
inline PlaneSamples oracle_plane_samples(const Phantom& ph,
                                         const std::vector<IncidentWave>& waves,
                                         const Background& bg, Side side,
                                         double r_M, int n, double dx,
                                         int order = 48, int threads = 1) {
  PlaneSamples ps;
  ps.n1 = ps.n2 = n;
  ps.dx1 = ps.dx2 = dx;
  ps.values = oracle_field(ph, waves, bg, plane_sample_points(n, dx, side, r_M),
                           order, threads);
  return ps;
}

}  // namespace edt
