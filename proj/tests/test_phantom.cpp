#include <gtest/gtest.h>

#include <random>

#include "edt/fft.hpp"
#include "edt/oracle.hpp"
#include "edt/phantom.hpp"

using namespace edt;

namespace {

std::mt19937_64 rng(4242);

double urand(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Phantom two_blob_phantom() {
  Phantom ph;
  ph.r_support = 1.0;
  ph.blobs.push_back({Vec3(0.15, -0.1, 0.2), 0.12, 0.8, -0.5, 0.6});
  ph.blobs.push_back({Vec3(-0.2, 0.05, -0.15), 0.1, -0.3, 0.4, 0.9});
  return ph;
}

}  // namespace

TEST(Phantom, ValidationRejectsOversizedBlobs) {
  Phantom ph;
  ph.r_support = 1.0;
  ph.blobs.push_back({Vec3(0.5, 0.0, 0.0), 0.1, 1.0, 0.0, 0.0});
  EXPECT_NO_THROW(validate(ph));
  ph.blobs.push_back({Vec3(0.5, 0.0, 0.0), 0.2, 1.0, 0.0, 0.0});
  EXPECT_THROW(validate(ph), std::invalid_argument);
}

TEST(Phantom, IncidentWaveConstraints) {
  EXPECT_NO_THROW(make_incident_wave(WaveMode::S, Vec3(1.0, 0.5, 0.0)));
  EXPECT_THROW(make_incident_wave(WaveMode::S, Vec3(1.0, 0.0, 0.1)),
               std::invalid_argument);
  EXPECT_THROW(make_incident_wave(WaveMode::S, Vec3::Zero()),
               std::invalid_argument);
  EXPECT_NO_THROW(make_incident_wave(WaveMode::P, Vec3(0.0, 0.0, 2.0)));
  EXPECT_THROW(make_incident_wave(WaveMode::P, Vec3(0.1, 0.0, 2.0)),
               std::invalid_argument);
  EXPECT_THROW(make_incident_wave(WaveMode::P, Vec3::Zero()),
               std::invalid_argument);
}

// The unitary-convention normalization: spectrum(0) must equal
// (2 pi)^{-3/2} int delta_mu dx, with the integral done by quadrature.
TEST(Phantom, FtNormalizationAgainstQuadrature) {
  Phantom ph;
  ph.r_support = 1.0;
  ph.blobs.push_back({Vec3(0.1, 0.0, -0.05), 0.15, 0.7, 0.0, 0.0});
  const GaussLegendre gl(40);
  double integral = 0.0;
  const double r = ph.r_support;
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j)
      for (int k = 0; k < 40; ++k) {
        const Vec3 x(r * gl.node[i], r * gl.node[j], r * gl.node[k]);
        integral += r * r * r * gl.weight[i] * gl.weight[j] * gl.weight[k] *
                    phantom_eval(ph, x).dmu;
      }
  const double expected = integral / std::pow(2.0 * M_PI, 1.5);
  const ParameterSpectra sp = phantom_ft(ph, Vec3(0.0, 0.0, 0.0));
  EXPECT_NEAR(sp.dmu.real(), expected, 1e-8 * std::abs(expected));
  EXPECT_NEAR(sp.dmu.imag(), 0.0, 1e-12);
  // closed form at y = 0: amp * sigma^3
  EXPECT_NEAR(sp.dmu.real(), 0.7 * std::pow(0.15, 3), 1e-14);
}

TEST(Phantom, HermitianSymmetryForRealFields) {
  const Phantom ph = two_blob_phantom();
  for (int t = 0; t < 100; ++t) {
    const Vec3 y(urand(-4, 4), urand(-4, 4), urand(-4, 4));
    const auto plus = phantom_ft(ph, y);
    const auto minus = phantom_ft(ph, Vec3(-y));
    EXPECT_NEAR(std::abs(minus.dmu - std::conj(plus.dmu)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(minus.dlambda - std::conj(plus.dlambda)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(minus.drho - std::conj(plus.drho)), 0.0, 1e-14);
  }
}

TEST(Phantom, ShiftTheorem) {
  Phantom base;
  base.r_support = 2.0;
  base.blobs.push_back({Vec3::Zero(), 0.2, 1.0, 0.5, -0.25});
  const Vec3 a(0.3, -0.2, 0.4);
  Phantom shifted = base;
  shifted.blobs[0].center = a;
  for (int t = 0; t < 50; ++t) {
    const Vec3 y(urand(-3, 3), urand(-3, 3), urand(-3, 3));
    const cplx phase = std::exp(-iu * cplx(y.dot(a), 0.0));
    const auto s0 = phantom_ft(base, y);
    const auto s1 = phantom_ft(shifted, y);
    EXPECT_NEAR(std::abs(s1.dmu - phase * s0.dmu), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(s1.drho - phase * s0.drho), 0.0, 1e-13);
  }
}

TEST(ScatteringPotential, DensityOnlyBlobKeepsAmplitudeDirection) {
  Phantom ph;
  ph.r_support = 1.0;
  const Vec3 c(0.1, 0.05, -0.1);
  ph.blobs.push_back({c, 0.1, 0.0, 0.0, 0.9});
  const auto bg = make_background(1.0, 1.0, 1.0, 3.0);
  const auto wave = make_incident_wave(WaveMode::S, Vec3(1.0, -0.5, 0.0));
  const CVec3 f = scattering_potential_spatial(ph, wave, bg, c);
  const CVec3 expect =
      -bg.omega * bg.omega * 0.9 * wave.amplitude.cast<cplx>();
  EXPECT_LT((f - expect).norm() / expect.norm(), 1e-14);
}

TEST(ScatteringPotential, CompactSupport) {
  Phantom ph;
  ph.r_support = 1.0;
  ph.blobs.push_back({Vec3(0.05, 0.0, 0.0), 0.08, 0.5, 0.3, 0.4});
  const auto bg = make_background(1.0, 1.0, 1.0, 3.0);
  const auto wave = make_incident_wave(WaveMode::P, Vec3(0.0, 0.0, 1.0));
  double peak = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Vec3 x(urand(-0.4, 0.4), urand(-0.4, 0.4), urand(-0.4, 0.4));
    peak = std::max(peak,
                    scattering_potential_spatial(ph, wave, bg, x).norm());
  }
  for (int t = 0; t < 50; ++t) {
    Vec3 x(urand(-2, 2), urand(-2, 2), urand(-2, 2));
    if (x.norm() < 1.0) x *= 2.0 / x.norm();
    EXPECT_LT(scattering_potential_spatial(ph, wave, bg, x).norm(),
              1e-12 * peak);
  }
}

// stress-divergence term against central differences of the incident-stress
// matrix built from phantom_eval
TEST(ScatteringPotential, DivergenceTermMatchesFiniteDifferences) {
  const Phantom ph = two_blob_phantom();
  const auto bg = make_background(1.0, 1.0, 1.0, 3.0);
  const auto wave = make_incident_wave(WaveMode::S, Vec3(0.8, 0.6, 0.0));
  const double h = 1e-6;
  for (int t = 0; t < 20; ++t) {
    const Vec3 x(urand(-0.3, 0.3), urand(-0.3, 0.3), urand(-0.3, 0.3));
    const auto stress = [&](const Vec3& p) {
      const double dmu = phantom_eval(ph, p).dmu;
      Mat3 s = Mat3::Zero();
      s(0, 2) = s(2, 0) = dmu * wave.amplitude(0);
      s(1, 2) = s(2, 1) = dmu * wave.amplitude(1);
      return s;
    };
    Vec3 div = Vec3::Zero();
    for (int a = 0; a < 3; ++a) {
      Vec3 da = Vec3::Zero();
      da(a) = h;
      div += (stress(x + da).col(a) - stress(x - da).col(a)) / (2.0 * h);
    }
    const auto vals = phantom_eval(ph, x);
    const CVec3 expected =
        (bg.ks * bg.ks * vals.dmu - bg.omega * bg.omega * vals.drho) *
            wave.amplitude.cast<cplx>() -
        iu * bg.ks * div.cast<cplx>();
    const CVec3 got = scattering_potential_spatial(ph, wave, bg, x);
    EXPECT_LT((got - expected).norm() / (expected.norm() + 1e-300), 1e-6);
  }
}

TEST(ScatteringPotential, FtDensityOnlyCase) {
  Phantom ph;
  ph.r_support = 1.0;
  ph.blobs.push_back({Vec3(0.1, -0.1, 0.0), 0.1, 0.0, 0.0, 1.3});
  const auto bg = make_background(1.0, 1.0, 1.0, 3.0);
  const auto wave = make_incident_wave(WaveMode::S, Vec3(1.0, 0.0, 0.0));
  const LateralFreq xi{0.7, -0.4};
  const cplx zeta(0.3, 0.1);
  const CVec3 got = scattering_potential_ft(ph, wave, bg, xi, zeta);
  const CVec3 y(cplx(xi.xi1), cplx(xi.xi2), zeta);
  const CVec3 expect = -bg.omega * bg.omega * phantom_ft(ph, y).drho *
                       wave.amplitude.cast<cplx>();
  EXPECT_LT((got - expect).norm() / expect.norm(), 1e-14);
}

TEST(ScatteringPotential, FtAxialComponentStructure) {
  const Phantom ph = two_blob_phantom();
  const auto bg = make_background(1.0, 1.0, 1.0, 3.0);
  const auto wave = make_incident_wave(WaveMode::S, Vec3(1.0, 0.0, 0.0));
  // xi' orthogonal to the amplitude: no axial component in F f_s
  const CVec3 f =
      scattering_potential_ft(ph, wave, bg, {0.0, 1.2}, cplx(0.4, 0.0));
  EXPECT_NEAR(std::abs(f(2)), 0.0, 1e-14);
  const CVec3 g =
      scattering_potential_ft(ph, wave, bg, {1.2, 0.0}, cplx(0.4, 0.0));
  EXPECT_GT(std::abs(g(2)), 1e-6);
}

TEST(ScatteringPotential, LinearityInPerturbations) {
  Phantom a = two_blob_phantom();
  Phantom b = a;
  for (auto& blob : b.blobs) {
    blob.amp_mu *= 2.5;
    blob.amp_lambda *= 2.5;
    blob.amp_rho *= 2.5;
  }
  const auto bg = make_background(1.0, 1.0, 1.0, 3.0);
  const auto wave = make_incident_wave(WaveMode::P, Vec3(0.0, 0.0, 1.5));
  const Vec3 x(0.12, -0.07, 0.2);
  const CVec3 fa = scattering_potential_spatial(a, wave, bg, x);
  const CVec3 fb = scattering_potential_spatial(b, wave, bg, x);
  EXPECT_LT((fb - 2.5 * fa).norm() / fb.norm(), 1e-13);
}

// 3D DFT oracle: grid the spatial potential on 64^3 and compare its centered
// DFT (continuous-FT scaling) against the closed-form transform at matching
// grid frequencies.
TEST(ScatteringPotential, FtMatchesGriddedDft) {
  const Phantom ph = two_blob_phantom();
  const auto bg = make_background(1.0, 1.0, 1.0, 3.0);
  for (WaveMode mode : {WaveMode::S, WaveMode::P}) {
    const auto wave = mode == WaveMode::S
                          ? make_incident_wave(WaveMode::S, Vec3(0.8, 0.6, 0.0))
                          : make_incident_wave(WaveMode::P, Vec3(0.0, 0.0, 1.0));
    const int n = 64;
    const double L = 3.2;  // window; fields are ~1e-12 of peak at the edge
    const double dx = L / n;
    std::vector<int> dims{n, n, n};
    std::vector<cplx> samp(static_cast<std::size_t>(n) * n * n);
    std::vector<CVec3> hat(samp.size(), CVec3::Zero());
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            const Vec3 x((i - n / 2) * dx, (j - n / 2) * dx, (k - n / 2) * dx);
            samp[(static_cast<std::size_t>(i) * n + j) * n + k] =
                scattering_potential_spatial(ph, wave, bg, x)(c);
          }
      const auto h = fft::centered_dft(samp, dims, -1);
      const double scale = dx * dx * dx / std::pow(2.0 * M_PI, 1.5);
      for (std::size_t m = 0; m < h.size(); ++m) hat[m](c) = scale * h[m];
    }
    const double dxi = 2.0 * M_PI / L;
    double num = 0.0, den = 0.0;
    for (int i = n / 2 - 4; i <= n / 2 + 4; ++i)
      for (int j = n / 2 - 4; j <= n / 2 + 4; ++j)
        for (int k = n / 2 - 4; k <= n / 2 + 4; ++k) {
          const LateralFreq xi{(i - n / 2) * dxi, (j - n / 2) * dxi};
          const cplx zeta((k - n / 2) * dxi, 0.0);
          const CVec3 closed = scattering_potential_ft(ph, wave, bg, xi, zeta);
          const CVec3 grid = hat[(static_cast<std::size_t>(i) * n + j) * n + k];
          num += (closed - grid).squaredNorm();
          den += closed.squaredNorm();
        }
    EXPECT_LT(std::sqrt(num / den), 1e-3);
  }
}

#include "edt/gridded.hpp"

// second-class gridded ingestion: padded-DFT spectra approximate the
// analytic transforms
TEST(GriddedPhantom, SpectraApproximateAnalyticTransforms) {
  const Phantom ph = two_blob_phantom();
  const auto g = rasterize(ph, 48, 2.4 / 48 * 2.0);  // spans +-2.4
  const auto spectra = gridded_ft(g, 2);
  double num = 0.0, den = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Vec3 y(urand(-3, 3), urand(-3, 3), urand(-3, 3));
    const auto approx = gridded_spectra_sample(spectra, y);
    const auto exact = phantom_ft(ph, y);
    num += std::norm(approx.dmu - exact.dmu) +
           std::norm(approx.drho - exact.drho);
    den += std::norm(exact.dmu) + std::norm(exact.drho);
  }
  EXPECT_LT(std::sqrt(num / den), 0.02);
}

TEST(GriddedPhantom, SampleOutsideLatticeRejected) {
  Phantom ph;
  ph.r_support = 1.0;
  ph.blobs.push_back({Vec3::Zero(), 0.1, 1.0, 0.0, 0.0});
  const auto spectra = gridded_ft(rasterize(ph, 16, 0.125), 1);
  EXPECT_THROW(gridded_spectra_sample(spectra, Vec3(1e4, 0, 0)),
               std::invalid_argument);
}
