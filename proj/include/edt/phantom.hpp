#pragma once

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "edt/background.hpp"
#include "edt/types.hpp"

namespace edt {

/// One isotropic Gaussian perturbation bump,
///   delta(x) = amp * exp(-|x - center|^2 / (2 sigma^2)),
/// carried simultaneously by the three parameter fields with independent
/// amplitudes. The closed-form 3D Fourier transform keeps the whole
/// validation chain free of gridding error.
struct GaussianBlob {
  Vec3 center = Vec3::Zero();
  double sigma = 0.0;       // width [m]
  double amp_mu = 0.0;      // [Pa]
  double amp_lambda = 0.0;  // [Pa]
  double amp_rho = 0.0;     // [kg/m^3]
};

struct Phantom {
  std::vector<GaussianBlob> blobs;
  double r_support = 0.0;  // all blob 4-sigma balls fit in this ball
};

inline void validate(const Phantom& ph) {
  if (!(ph.r_support > 0.0))
    throw std::invalid_argument("phantom: r_support must be positive");
  for (const auto& b : ph.blobs) {
    if (!(b.sigma > 0.0))
      throw std::invalid_argument("phantom: blob sigma must be positive");
    if (b.center.norm() + 4.0 * b.sigma > ph.r_support)
      throw std::invalid_argument(
          "phantom: blob 4-sigma ball exceeds the declared support");
  }
}

/// Incident plane wave travelling along +e3. Shear amplitudes are lateral,
/// pressure amplitudes axial.
struct IncidentWave {
  WaveMode mode = WaveMode::S;
  Vec3 amplitude = Vec3::Zero();

  double wavenumber(const Background& bg) const {
    return mode == WaveMode::S ? bg.ks : bg.kp;
  }
};

inline IncidentWave make_incident_wave(WaveMode mode, const Vec3& amplitude) {
  if (mode == WaveMode::S) {
    if (amplitude(2) != 0.0)
      throw std::invalid_argument("shear amplitude must be orthogonal to e3");
    if (amplitude.head<2>().norm() == 0.0)
      throw std::invalid_argument("shear amplitude must be nonzero");
  } else {
    if (amplitude(0) != 0.0 || amplitude(1) != 0.0)
      throw std::invalid_argument("pressure amplitude must be along e3");
    if (amplitude(2) == 0.0)
      throw std::invalid_argument("pressure amplitude must be nonzero");
  }
  return IncidentWave{mode, amplitude};
}

/// Unitary 3D Fourier transforms (convention (2 pi)^{-3/2}) of the three
/// perturbation fields at one (possibly complex) frequency point.
struct ParameterSpectra {
  cplx dmu{0.0, 0.0};
  cplx dlambda{0.0, 0.0};
  cplx drho{0.0, 0.0};
};

/// Evaluate the phantom spectra at y = (y1, y2, y3) with complex y3; the
/// Gaussian transform sigma^3 exp(-sigma^2 (y.y)/2) exp(-i y.center) is
/// entire in y3, which is what the evanescent continuation needs.
inline ParameterSpectra phantom_ft(const Phantom& ph, const CVec3& y) {
  ParameterSpectra sp;
  for (const auto& b : ph.blobs) {
    const cplx ydoty = cdot(y, y);
    const cplx phase = cdot(y, b.center.cast<cplx>());
    const double s3 = b.sigma * b.sigma * b.sigma;
    const cplx shape = s3 * std::exp(-0.5 * b.sigma * b.sigma * ydoty) *
                       std::exp(-iu * phase);
    sp.dmu += b.amp_mu * shape;
    sp.dlambda += b.amp_lambda * shape;
    sp.drho += b.amp_rho * shape;
  }
  return sp;
}

inline ParameterSpectra phantom_ft(const Phantom& ph, const Vec3& y) {
  return phantom_ft(ph, CVec3(y.cast<cplx>()));
}

/// Point values of the three perturbation fields.
struct ParameterValues {
  double dmu = 0.0;
  double dlambda = 0.0;
  double drho = 0.0;
};

inline ParameterValues phantom_eval(const Phantom& ph, const Vec3& x) {
  ParameterValues v;
  for (const auto& b : ph.blobs) {
    const double g = std::exp(-(x - b.center).squaredNorm() /
                              (2.0 * b.sigma * b.sigma));
    v.dmu += b.amp_mu * g;
    v.dlambda += b.amp_lambda * g;
    v.drho += b.amp_rho * g;
  }
  return v;
}

/// Analytic gradients of the perturbation fields (for the incident-stress
/// divergence): grad delta = -(x - c)/sigma^2 * delta.
struct ParameterGradients {
  Vec3 dmu = Vec3::Zero();
  Vec3 dlambda = Vec3::Zero();
};

inline ParameterGradients phantom_grad(const Phantom& ph, const Vec3& x) {
  ParameterGradients g;
  for (const auto& b : ph.blobs) {
    const Vec3 d = x - b.center;
    const double gv = std::exp(-d.squaredNorm() / (2.0 * b.sigma * b.sigma));
    const Vec3 gr = -(d / (b.sigma * b.sigma)) * gv;
    g.dmu += b.amp_mu * gr;
    g.dlambda += b.amp_lambda * gr;
  }
  return g;
}

/// Spatial scattering potential with the incident phase e^{i k_beta x3}
/// peeled off. For shear excitation:
///   f_s = ks^2 dmu A - i ks div(sigma_s) - omega^2 drho A,
///   sigma_s = dmu (A (x) e3 + e3 (x) A),
///   div(sigma_s) = (d3 dmu) A + (grad_12 dmu . A) e3;
/// for pressure excitation:
///   f_p = kp^2 (dlam + 2 dmu) A - i kp div(sigma_p) - omega^2 drho A,
///   sigma_p = a3 diag(dlam, dlam, dlam + 2 dmu),
///   div(sigma_p) = a3 (d1 dlam, d2 dlam, d3 (dlam + 2 dmu)).
inline CVec3 scattering_potential_spatial(const Phantom& ph,
                                          const IncidentWave& wave,
                                          const Background& bg,
                                          const Vec3& x) {
  const ParameterValues v = phantom_eval(ph, x);
  const ParameterGradients gr = phantom_grad(ph, x);
  const double w2 = bg.omega * bg.omega;
  const CVec3 a = wave.amplitude.cast<cplx>();
  if (wave.mode == WaveMode::S) {
    CVec3 div = gr.dmu(2) * a;
    div(2) += gr.dmu.head<2>().dot(wave.amplitude.head<2>());
    return (bg.ks * bg.ks * v.dmu - w2 * v.drho) * a - iu * bg.ks * div;
  }
  const double a3 = wave.amplitude(2);
  CVec3 div;
  div << a3 * gr.dlambda(0), a3 * gr.dlambda(1),
      a3 * (gr.dlambda(2) + 2.0 * gr.dmu(2));
  return (bg.kp * bg.kp * (v.dlambda + 2.0 * v.dmu) - w2 * v.drho) * a -
         iu * bg.kp * div;
}

/// Closed-form 3D Fourier transform of the scattering potential at
/// y = (xi, zeta), zeta complex (typically +-kappa_alpha - k_beta):
///   F f_s = [(ks^2 + ks zeta) dmu^ - omega^2 drho^] A + ks (xi'.A) dmu^ e3
///   F f_p = [(kp^2 + kp zeta)(dlam^ + 2 dmu^) - omega^2 drho^] A
///           + kp (e3.A) dlam^ xi'
inline CVec3 scattering_potential_ft(const Phantom& ph,
                                     const IncidentWave& wave,
                                     const Background& bg,
                                     const LateralFreq& xi, cplx zeta) {
  const CVec3 y(cplx(xi.xi1, 0.0), cplx(xi.xi2, 0.0), zeta);
  const ParameterSpectra sp = phantom_ft(ph, y);
  const double w2 = bg.omega * bg.omega;
  const CVec3 a = wave.amplitude.cast<cplx>();
  if (wave.mode == WaveMode::S) {
    const double xia = xi.xi1 * wave.amplitude(0) + xi.xi2 * wave.amplitude(1);
    CVec3 f = ((bg.ks * bg.ks + bg.ks * zeta) * sp.dmu - w2 * sp.drho) * a;
    f(2) += bg.ks * xia * sp.dmu;
    return f;
  }
  const cplx pmod = sp.dlambda + 2.0 * sp.dmu;
  CVec3 f = ((bg.kp * bg.kp + bg.kp * zeta) * pmod - w2 * sp.drho) * a;
  f(0) += bg.kp * wave.amplitude(2) * sp.dlambda * xi.xi1;
  f(1) += bg.kp * wave.amplitude(2) * sp.dlambda * xi.xi2;
  return f;
}

/// Phantom observed after a rotation R of the observation frame, i.e. the
/// composition x -> f(R x): blob centers move to R^T c.
inline Phantom rotated(const Phantom& ph, const Mat3& rot) {
  Phantom out = ph;
  for (auto& b : out.blobs) b.center = rot.transpose() * b.center;
  return out;
}

// --- phantom description files (JSON, SI units) ---------------------------

inline Phantom phantom_from_json(const nlohmann::json& j) {
  Phantom ph;
  ph.r_support = j.at("r_support").get<double>();
  for (const auto& jb : j.at("blobs")) {
    GaussianBlob b;
    const auto c = jb.at("center");
    b.center = Vec3(c.at(0).get<double>(), c.at(1).get<double>(),
                    c.at(2).get<double>());
    b.sigma = jb.at("sigma").get<double>();
    b.amp_mu = jb.value("amp_mu", 0.0);
    b.amp_lambda = jb.value("amp_lambda", 0.0);
    b.amp_rho = jb.value("amp_rho", 0.0);
    ph.blobs.push_back(b);
  }
  validate(ph);
  return ph;
}

inline nlohmann::json phantom_to_json(const Phantom& ph) {
  nlohmann::json j;
  j["r_support"] = ph.r_support;
  j["blobs"] = nlohmann::json::array();
  for (const auto& b : ph.blobs) {
    j["blobs"].push_back({{"center", {b.center(0), b.center(1), b.center(2)}},
                          {"sigma", b.sigma},
                          {"amp_mu", b.amp_mu},
                          {"amp_lambda", b.amp_lambda},
                          {"amp_rho", b.amp_rho}});
  }
  return j;
}

inline Phantom load_phantom(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open phantom file: " + path);
  nlohmann::json j;
  in >> j;
  return phantom_from_json(j);
}

}  // namespace edt
