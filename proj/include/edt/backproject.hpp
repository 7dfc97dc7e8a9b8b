#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "edt/fft.hpp"
#include "edt/kgrid.hpp"
#include "edt/parallel.hpp"

namespace edt {

/// Real-space reconstruction volume on the centered grid r = (j - n/2) dr.
/// Values are kept complex; the imaginary part of a Hermitian-consistent
/// reconstruction is a discretization-error indicator.
struct VolumeGrid {
  int n = 0;
  double dr = 0.0;
  std::vector<cplx> values;

  Vec3 node(int i, int j, int k) const {
    return {(i - n / 2) * dr, (j - n / 2) * dr, (k - n / 2) * dr};
  }
  std::size_t lin(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  double imag_fraction() const {
    double re = 0.0, im = 0.0;
    for (const auto& v : values) {
      re += v.real() * v.real();
      im += v.imag() * v.imag();
    }
    return re > 0.0 ? std::sqrt(im / re) : 0.0;
  }
};

/// Density post-compensation: replace each covered voxel's mass by the
/// weighted-mean sample value times the uniform voxel measure,
///   mass_v <- (mass_v / weight_v) dy^3.
/// The sample-carried quadrature measure fluctuates voxel to voxel (the
/// lattice image of the (xi, theta) grid beats against the k-lattice); the
/// ratio removes that ripple and the exact voxel volume restores the
/// coverage-set integral on interior voxels.
inline void density_compensate(KGrid& kg) {
  const double cell = std::pow(kg.spec.dy(), 3);
  for (std::size_t v = 0; v < kg.mass.size(); ++v)
    kg.mass[v] = kg.weight[v] > 0.0 ? kg.mass[v] * (cell / kg.weight[v])
                                    : cplx(0.0, 0.0);
}

/// Enforce F(-y) = conj(F(y)) on the deposited masses (real-valued target).
inline void hermitian_symmetrize(KGrid& kg) {
  const int n = kg.spec.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const int im = (n - i) % n, jm = (n - j) % n, km = (n - k) % n;
        // the -y node exists only away from the extent edge
        if (im == 0 && i != 0) continue;
        if (jm == 0 && j != 0) continue;
        if (km == 0 && k != 0) continue;
        const std::size_t v = kg.spec.lin(i, j, k);
        const std::size_t w = kg.spec.lin(im, jm, km);
        if (w < v) continue;
        const cplx avg = 0.5 * (kg.mass[v] + std::conj(kg.mass[w]));
        kg.mass[v] = avg;
        kg.mass[w] = std::conj(avg);
      }
}

/// FFT-path backprojection: vol(r) = (2 pi)^{-3/2} sum_v mass_v e^{i y_v.r}
/// on the dual grid dr = 2 pi / (n dy). Nearest-voxel deposition acts as a
/// box-kernel convolution in k-space; deapodization divides out its sinc
/// roll-off in r-space (skip it when the exact transform pair against the
/// raw masses is wanted).
inline VolumeGrid backproject_fft(const KGrid& kg, bool deapodize = true) {
  VolumeGrid vol;
  vol.n = kg.spec.n;
  vol.dr = 2.0 * M_PI / (kg.spec.n * kg.spec.dy());
  const std::vector<int> dims{kg.spec.n, kg.spec.n, kg.spec.n};
  const auto f = fft::centered_dft(kg.mass, dims, +1);
  vol.values.resize(f.size());
  const double scale = std::pow(2.0 * M_PI, -1.5);
  for (std::size_t m = 0; m < f.size(); ++m) vol.values[m] = scale * f[m];
  if (deapodize) {
    const double d = kg.spec.dy();
    const int n = vol.n;
    std::vector<double> axis(n);
    for (int i = 0; i < n; ++i)
      axis[i] = detail::kernel_ft(kg.kernel, (i - n / 2) * vol.dr * d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          vol.values[vol.lin(i, j, k)] /= axis[i] * axis[j] * axis[k];
  }
  return vol;
}

/// Direct nonuniform summation on an arbitrary centered grid; reference
/// path for the FFT gridding.
inline VolumeGrid backproject_direct(const std::vector<TraceSample>& samples,
                                     int n, double dr, int threads = 1) {
  VolumeGrid vol;
  vol.n = n;
  vol.dr = dr;
  vol.values.assign(static_cast<std::size_t>(n) * n * n, cplx(0.0, 0.0));
  const double scale = std::pow(2.0 * M_PI, -1.5);
  parallel_for(vol.values.size(), threads, [&](std::size_t lin) {
    const int k = static_cast<int>(lin % n);
    const int j = static_cast<int>((lin / n) % n);
    const int i = static_cast<int>(lin / (static_cast<std::size_t>(n) * n));
    const Vec3 r = vol.node(i, j, k);
    cplx acc{0.0, 0.0};
    for (const auto& s : samples)
      acc += s.value * s.weight * std::exp(iu * cplx(s.y.dot(r), 0.0));
    vol.values[lin] = scale * acc;
  });
  return vol;
}

/// Backprojection of a rotation sweep (one mode grid per trajectory angle).
/// Default FFT path: deposit, Hermitian-symmetrize, inverse transform.
inline VolumeGrid backproject(const std::vector<ModeGrid>& per_angle,
                              const RotationTrajectory& traj,
                              const KGridSpec& spec, double card = -1.0,
                              bool symmetrize = true) {
  KGrid kg(spec);
  accumulate(kg, per_angle, traj, card);
  if (symmetrize) hermitian_symmetrize(kg);
  return backproject_fft(kg);
}

/// Numeric Banach indicatrix by multiplicity binning: push the quadrature
/// measure |grad T| d(xi, theta) through the trace map and divide by the
/// voxel volume; interior voxels of a full rotation approach the analytic
/// covering number 2.
inline std::vector<double> estimate_indicatrix(
    ModeTag mode, Side side, const Background& bg,
    const RotationTrajectory& traj, const KGridSpec& spec, int n_xi,
    GriddingKernel kernel = GriddingKernel::Trilinear) {
  KGrid kg(spec, false, kernel);
  const double ka = mode_k_alpha(mode, bg);
  const double dxi = 2.0 * ka / n_xi;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const Mat3 rot = rotation_matrix(traj.theta[j], traj.axis);
    for (int a = 0; a < n_xi; ++a)
      for (int b = 0; b < n_xi; ++b) {
        const LateralFreq xi{-ka + (a + 0.5) * dxi, -ka + (b + 0.5) * dxi};
        if (xi.norm2() >= ka * ka) continue;
        TraceSample s;
        s.y = rot * mode_locus(mode, xi, side, bg);
        s.value = cplx(1.0, 0.0);
        s.weight = dxi * dxi * traj.weight[j] *
                   jacobian_fixed_axis(mode, xi, 1.0, traj.axis, bg);
        kg.deposit(s);
      }
  }
  const double voxel = std::pow(spec.dy(), 3);
  std::vector<double> card(spec.size(), 0.0);
  for (std::size_t v = 0; v < card.size(); ++v)
    card[v] = kg.weight[v] / voxel;
  return card;
}

}  // namespace edt
