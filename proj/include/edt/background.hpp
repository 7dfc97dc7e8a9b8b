#pragma once

#include <cmath>
#include <stdexcept>

namespace edt {

/// Homogeneous isotropic elastic reference medium at a fixed angular
/// frequency. The derived wavenumbers satisfy
///   ks^2 = omega^2 rho0 / mu0,   kp^2 = omega^2 rho0 / (lambda0 + 2 mu0),
/// and kp < ks whenever lambda0 + mu0 > 0.
struct Background {
  double rho0 = 0.0;     // mass density [kg/m^3]
  double mu0 = 0.0;      // shear Lame parameter [Pa]
  double lambda0 = 0.0;  // first Lame parameter [Pa]
  double omega = 0.0;    // angular frequency [rad/s]
  double ks = 0.0;       // shear wavenumber [1/m]
  double kp = 0.0;       // pressure wavenumber [1/m]

  double pwave_modulus() const { return lambda0 + 2.0 * mu0; }
};

inline Background make_background(double rho0, double mu0, double lambda0,
                                  double omega) {
  if (!(rho0 > 0.0)) throw std::invalid_argument("rho0 must be positive");
  if (!(mu0 > 0.0)) throw std::invalid_argument("mu0 must be positive");
  if (!(lambda0 + 2.0 * mu0 > 0.0))
    throw std::invalid_argument("lambda0 + 2*mu0 must be positive");
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  Background bg;
  bg.rho0 = rho0;
  bg.mu0 = mu0;
  bg.lambda0 = lambda0;
  bg.omega = omega;
  bg.ks = omega * std::sqrt(rho0 / mu0);
  bg.kp = omega * std::sqrt(rho0 / (lambda0 + 2.0 * mu0));
  return bg;
}

/// Same material at a different frequency (wavenumbers rescale with omega).
inline Background at_frequency(const Background& bg, double omega) {
  return make_background(bg.rho0, bg.mu0, bg.lambda0, omega);
}

}  // namespace edt
