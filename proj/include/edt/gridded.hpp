#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "edt/fft.hpp"
#include "edt/phantom.hpp"
#include "edt/types.hpp"

namespace edt {

/// Second-class phantom ingestion: perturbation fields sampled on a cube
/// grid (node (i,j,k) at ((i-n/2) dx, ...)). Spectra come from a
/// zero-padded DFT with trilinear interpolation in k, so they carry
/// gridding error; the analytic blob path is what the validation chain
/// uses.
struct GriddedPerturbations {
  int n = 0;
  double dx = 0.0;
  std::vector<double> dmu, dlambda, drho;  // row-major n^3

  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
};

/// Sample an analytic phantom onto a grid; Gaussians are truncated at six
/// standard deviations.
inline GriddedPerturbations rasterize(const Phantom& ph, int n, double dx) {
  if (n <= 0 || n % 2 != 0)
    throw std::invalid_argument("rasterize: grid size must be even, positive");
  GriddedPerturbations g;
  g.n = n;
  g.dx = dx;
  g.dmu.assign(g.size(), 0.0);
  g.dlambda.assign(g.size(), 0.0);
  g.drho.assign(g.size(), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Vec3 x((i - n / 2) * dx, (j - n / 2) * dx, (k - n / 2) * dx);
        const std::size_t lin = (static_cast<std::size_t>(i) * n + j) * n + k;
        for (const auto& b : ph.blobs) {
          const double d2 = (x - b.center).squaredNorm();
          if (d2 > 36.0 * b.sigma * b.sigma) continue;  // 6 sigma cut
          const double v = std::exp(-d2 / (2.0 * b.sigma * b.sigma));
          g.dmu[lin] += b.amp_mu * v;
          g.dlambda[lin] += b.amp_lambda * v;
          g.drho[lin] += b.amp_rho * v;
        }
      }
  return g;
}

/// Unitary-convention spectra of the gridded fields on the dual lattice
/// (zero padding by the given factor refines the lattice).
struct GriddedSpectra {
  int n = 0;
  double dy = 0.0;
  std::vector<cplx> dmu, dlambda, drho;

  std::size_t lin(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
};

inline GriddedSpectra gridded_ft(const GriddedPerturbations& g,
                                 int pad_factor = 2) {
  if (pad_factor < 1) throw std::invalid_argument("pad factor must be >= 1");
  const int np = g.n * pad_factor;
  GriddedSpectra out;
  out.n = np;
  out.dy = 2.0 * M_PI / (np * g.dx);
  const std::vector<int> dims{np, np, np};
  const double scale = std::pow(g.dx, 3) * std::pow(2.0 * M_PI, -1.5);
  const int off = (np - g.n) / 2;
  const auto transform = [&](const std::vector<double>& field) {
    std::vector<cplx> buf(static_cast<std::size_t>(np) * np * np,
                          cplx(0.0, 0.0));
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k)
          buf[(static_cast<std::size_t>(i + off) * np + (j + off)) * np +
              (k + off)] =
              field[(static_cast<std::size_t>(i) * g.n + j) * g.n + k];
    auto hat = fft::centered_dft(buf, dims, -1);
    for (auto& v : hat) v *= scale;
    return hat;
  };
  out.dmu = transform(g.dmu);
  out.dlambda = transform(g.dlambda);
  out.drho = transform(g.drho);
  return out;
}

/// Trilinear interpolation of the gridded spectra at a real k-space point.
inline ParameterSpectra gridded_spectra_sample(const GriddedSpectra& s,
                                               const Vec3& y) {
  const double u0 = y(0) / s.dy + s.n / 2;
  const double u1 = y(1) / s.dy + s.n / 2;
  const double u2 = y(2) / s.dy + s.n / 2;
  const int i0 = static_cast<int>(std::floor(u0));
  const int j0 = static_cast<int>(std::floor(u1));
  const int k0 = static_cast<int>(std::floor(u2));
  if (i0 < 0 || i0 + 1 >= s.n || j0 < 0 || j0 + 1 >= s.n || k0 < 0 ||
      k0 + 1 >= s.n)
    throw std::invalid_argument("gridded spectra: point outside the lattice");
  const double ta = u0 - i0, tb = u1 - j0, tc = u2 - k0;
  ParameterSpectra sp;
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b)
      for (int c = 0; c <= 1; ++c) {
        const double w = (a ? ta : 1 - ta) * (b ? tb : 1 - tb) *
                         (c ? tc : 1 - tc);
        const std::size_t v = s.lin(i0 + a, j0 + b, k0 + c);
        sp.dmu += w * s.dmu[v];
        sp.dlambda += w * s.dlambda[v];
        sp.drho += w * s.drho[v];
      }
  return sp;
}

}  // namespace edt
