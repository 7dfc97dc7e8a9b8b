#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>

#include "edt/background.hpp"
#include "edt/modesep.hpp"
#include "edt/types.hpp"

namespace edt {

/// Wavenumber interval of a frequency sweep.
struct KRange {
  double kmin = 0.0;
  double kmax = 0.0;
};

/// k-space coverage sets: the single-orientation hemispheres, the solids
/// swept by a full e1-axis rotation (horn/ring/spindle torus parts split by
/// the transmission/reflection sphere |y|^2 = k_a^2 + k_b^2), and the
/// frequency-diversity regions between two internally tangent spheres.
/// Membership uses an absolute slack so that generator images on the
/// boundary shells test as members.
struct CoverageSet {
  enum class Kind { Hemisphere, AngularTorus, FrequencyRegion };

  Kind kind = Kind::AngularTorus;
  ModeTag mode = ModeTag::PP;
  Side side = Side::Transmission;
  // Hemisphere / AngularTorus
  Background bg;
  // FrequencyRegion
  KRange range_s;
  KRange range_p;
  double tol = 0.0;

  double k_alpha_max() const {
    return mode_scattered(mode) == WaveMode::S ? range_s.kmax : range_p.kmax;
  }
  double k_alpha_min() const {
    return mode_scattered(mode) == WaveMode::S ? range_s.kmin : range_p.kmin;
  }
  double k_beta_max() const {
    return mode_excitation(mode) == WaveMode::S ? range_s.kmax : range_p.kmax;
  }
  double k_beta_min() const {
    return mode_excitation(mode) == WaveMode::S ? range_s.kmin : range_p.kmin;
  }
};

inline CoverageSet hemisphere_set(ModeTag mode, Side side,
                                  const Background& bg) {
  CoverageSet s;
  s.kind = CoverageSet::Kind::Hemisphere;
  s.mode = mode;
  s.side = side;
  s.bg = bg;
  s.tol = 1e-9 * bg.ks;
  return s;
}

inline CoverageSet angular_torus_set(ModeTag mode, Side side,
                                     const Background& bg) {
  CoverageSet s = hemisphere_set(mode, side, bg);
  s.kind = CoverageSet::Kind::AngularTorus;
  return s;
}

inline CoverageSet frequency_region_set(ModeTag mode, Side side,
                                        const KRange& ks_range,
                                        const KRange& kp_range) {
  if (!(ks_range.kmin <= ks_range.kmax) || !(kp_range.kmin <= kp_range.kmax))
    throw std::invalid_argument("frequency region: kmin must not exceed kmax");
  CoverageSet s;
  s.kind = CoverageSet::Kind::FrequencyRegion;
  s.mode = mode;
  s.side = side;
  s.range_s = ks_range;
  s.range_p = kp_range;
  s.tol = 1e-9 * ks_range.kmax;
  return s;
}

/// Single-orientation accessible shell: y = (xi, +-kappa_alpha - k_beta)
/// for |xi| < k_alpha, i.e. |y + k_beta e3| = k_alpha on the side's
/// y3-halfspace relative to -k_beta.
inline bool in_hemisphere(const Vec3& y, ModeTag mode, Side side,
                          const Background& bg, double tol = -1.0) {
  if (tol < 0.0) tol = 1e-9 * bg.ks;
  const double ka = mode_k_alpha(mode, bg);
  const double kb = mode_k_beta(mode, bg);
  const double shell = (y + kb * Vec3::UnitZ()).norm();
  if (std::abs(shell - ka) > tol) return false;
  const double axial = y(2) + kb;
  return side == Side::Transmission ? axial > -tol : axial < tol;
}

/// Full e1-axis rotation coverage (transmission or reflection part): the
/// torus solid y1^2 + (|(y2,y3)| - k_beta)^2 <= k_alpha^2 intersected with
/// the inside (transmission) or outside (reflection) of the sphere
/// |y|^2 = k_alpha^2 + k_beta^2.
inline bool in_coverage_angular(const Vec3& y, ModeTag mode, Side side,
                                const Background& bg, double tol = -1.0) {
  if (tol < 0.0) tol = 1e-9 * bg.ks;
  const double ka = mode_k_alpha(mode, bg);
  const double kb = mode_k_beta(mode, bg);
  const double u = std::hypot(y(1), y(2));
  const double torus = y(0) * y(0) + (u - kb) * (u - kb);
  if (torus > ka * ka + tol * bg.ks) return false;
  const double split = y.squaredNorm() - (ka * ka + kb * kb);
  return side == Side::Transmission ? split < tol * bg.ks : split > -tol * bg.ks;
}

/// Frequency-diversity coverage for a single orientation: the region between
/// the spheres of the extreme wavenumbers. Transmission loci sit at
/// y3 = +kappa_alpha - k_beta (bounds as printed in the source
/// inequalities); reflection loci sit at y3 = -kappa_alpha - k_beta, giving
/// the same envelopes with flipped kappa sign.
inline bool in_coverage_frequency(const Vec3& y, const CoverageSet& s) {
  const double tol = s.tol;
  const double rho = std::hypot(y(0), y(1));
  const double kam = s.k_alpha_max(), kan = s.k_alpha_min();
  const double kbm = s.k_beta_max(), kbn = s.k_beta_min();
  if (rho > kam + tol) return false;
  const double cap_max = std::sqrt(std::max(kam * kam - rho * rho, 0.0));
  double lower, upper;
  if (s.side == Side::Transmission) {
    upper = cap_max - kbm;
    lower = rho >= kan ? -rho : std::sqrt(kan * kan - rho * rho) - kbn;
  } else {
    lower = -cap_max - kbm;
    upper = rho >= kan ? -rho : -std::sqrt(kan * kan - rho * rho) - kbn;
  }
  return y(2) <= upper + tol && y(2) >= lower - tol;
}

inline bool coverage_contains(const CoverageSet& s, const Vec3& y) {
  switch (s.kind) {
    case CoverageSet::Kind::Hemisphere:
      return in_hemisphere(y, s.mode, s.side, s.bg, s.tol);
    case CoverageSet::Kind::AngularTorus:
      return in_coverage_angular(y, s.mode, s.side, s.bg, s.tol);
    case CoverageSet::Kind::FrequencyRegion:
      return in_coverage_frequency(y, s);
  }
  return false;
}

/// Axis-aligned bounding box of a set (for sampling).
inline std::pair<Vec3, Vec3> coverage_bounding_box(const CoverageSet& s) {
  if (s.kind == CoverageSet::Kind::FrequencyRegion) {
    const double r = s.k_alpha_max();
    const double depth = s.k_alpha_max() + s.k_beta_max();
    return {Vec3(-r, -r, -depth), Vec3(r, r, 0.0)};
  }
  const double ka = mode_k_alpha(s.mode, s.bg);
  const double kb = mode_k_beta(s.mode, s.bg);
  const double lateral = ka + kb;
  return {Vec3(-ka, -lateral, -lateral), Vec3(ka, lateral, lateral)};
}

struct VolumeEstimate {
  double volume = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo volume over the bounding box, deterministic for a given seed
/// and independent of threading (fixed block structure).
inline VolumeEstimate coverage_volume(const CoverageSet& s,
                                      std::size_t n_samples,
                                      std::uint64_t seed) {
  if (s.kind == CoverageSet::Kind::Hemisphere)
    throw std::invalid_argument(
        "coverage_volume: hemisphere sets have zero volume (degenerate)");
  if (n_samples < 10000)
    throw std::invalid_argument("coverage_volume: need at least 1e4 samples");
  const auto [lo, hi] = coverage_bounding_box(s);
  const Vec3 ext = hi - lo;
  const double vbox = ext(0) * ext(1) * ext(2);
  if (!(vbox > 0.0))
    throw std::invalid_argument("coverage_volume: empty bounding box");
  constexpr std::size_t kBlocks = 256;
  std::size_t hits = 0;
  for (std::size_t b = 0; b < kBlocks; ++b) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (b + 1)));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t lo_i = n_samples * b / kBlocks;
    const std::size_t hi_i = n_samples * (b + 1) / kBlocks;
    for (std::size_t i = lo_i; i < hi_i; ++i) {
      const Vec3 y(lo(0) + ext(0) * u(rng), lo(1) + ext(1) * u(rng),
                   lo(2) + ext(2) * u(rng));
      hits += coverage_contains(s, y) ? 1 : 0;
    }
  }
  const double p = static_cast<double>(hits) / n_samples;
  VolumeEstimate e;
  e.volume = vbox * p;
  e.std_error = vbox * std::sqrt(p * (1.0 - p) / n_samples);
  e.samples = n_samples;
  return e;
}

/// Deterministic quadrature oracle for the same sets, exploiting their axial
/// symmetry: angular sets are solids of revolution about e1, frequency
/// regions about e3. Midpoint rule on the 2D reduced domain.
inline double coverage_volume_quadrature(const CoverageSet& s, int n_grid) {
  if (s.kind == CoverageSet::Kind::Hemisphere)
    throw std::invalid_argument("quadrature volume: degenerate set");
  double vol = 0.0;
  if (s.kind == CoverageSet::Kind::AngularTorus) {
    const double ka = mode_k_alpha(s.mode, s.bg);
    const double kb = mode_k_beta(s.mode, s.bg);
    const double t_max = ka, u_max = ka + kb;
    const double dt = 2.0 * t_max / n_grid, du = u_max / n_grid;
    for (int i = 0; i < n_grid; ++i)
      for (int j = 0; j < n_grid; ++j) {
        const double t = -t_max + (i + 0.5) * dt;
        const double u = (j + 0.5) * du;
        // revolve (t, u) about e1: y = (t, u cos, u sin)
        if (coverage_contains(s, Vec3(t, u, 0.0)))
          vol += 2.0 * M_PI * u * dt * du;
      }
    return vol;
  }
  const double rho_max = s.k_alpha_max();
  const double depth = s.k_alpha_max() + s.k_beta_max();
  const double drho = rho_max / n_grid, dz = depth / n_grid;
  for (int i = 0; i < n_grid; ++i)
    for (int j = 0; j < n_grid; ++j) {
      const double rho = (i + 0.5) * drho;
      const double z = -depth + (j + 0.5) * dz;
      if (coverage_contains(s, Vec3(rho, 0.0, z)))
        vol += 2.0 * M_PI * rho * drho * dz;
    }
  return vol;
}

}  // namespace edt
