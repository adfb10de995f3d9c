#pragma once

/// \file
/// \brief Beam kinematics of a Bessel-mode electron: wave numbers, energy,
/// pitch angle and the characteristic radii that bound the velocity regimes.
///
/// Natural units throughout (hbar = c = 1). Lengths are in units of the
/// reduced Compton wavelength 1/m, momenta and energies in units of m.

#include <cmath>
#include <stdexcept>
#include <string>

namespace twisted {

/// Reference scale and display conversion. Only the CLI uses these.
namespace units {
inline constexpr double electron_mass_kev = 510.99895000;
/// hbar / (m c) in picometres
inline constexpr double reduced_compton_pm = 0.38615926796;
} // namespace units

class KinematicsError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable kinematic inputs plus derived k, E and theta_k.
class BeamParameters {
public:
  BeamParameters(double kappa, double k_z, double mass = 1.0) : kappa_(kappa), k_z_(k_z), mass_(mass) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
      throw KinematicsError("transverse wave number must be finite and >= 0");
    if (!(mass > 0.0) || !std::isfinite(mass))
      throw KinematicsError("mass must be finite and > 0");
    if (!std::isfinite(k_z))
      throw KinematicsError("longitudinal wave number must be finite");
    if (kappa == 0.0 && k_z == 0.0)
      throw KinematicsError("kappa and k_z cannot both vanish");
    k_ = std::hypot(kappa_, k_z_);
    energy_ = std::hypot(k_, mass_);
    theta_ = std::atan2(kappa_, k_z_);
  }

  double kappa() const { return kappa_; }
  double k_z() const { return k_z_; }
  double mass() const { return mass_; }
  double k() const { return k_; }
  double energy() const { return energy_; }
  /// pitch angle in [0, pi)
  double theta() const { return theta_; }

  double cos_half() const { return std::cos(0.5 * theta_); }
  double sin_half() const { return std::sin(0.5 * theta_); }

  /// E^2 - k_z^2 - kappa^2 - m^2
  double mass_shell_defect() const {
    return energy_ * energy_ - k_z_ * k_z_ - kappa_ * kappa_ - mass_ * mass_;
  }

  friend bool operator==(const BeamParameters &, const BeamParameters &) = default;

private:
  double kappa_;
  double k_z_;
  double mass_;
  double k_ = 0;
  double energy_ = 0;
  double theta_ = 0;
};

inline BeamParameters derive_kinematics(double kappa, double k_z, double mass = 1.0) {
  return BeamParameters(kappa, k_z, mass);
}

/// Beam from pitch angle and longitudinal wave number, kappa = k_z tan(theta).
inline BeamParameters beam_from_pitch(double theta, double k_z, double mass = 1.0) {
  return BeamParameters(k_z * std::tan(theta), k_z, mass);
}

struct CharacteristicRadii {
  /// l tan(theta_k) / kappa: below this the antiparallel field rotates rigidly
  double r_bucket = 0;
  /// l / kappa: validity edge of the small-argument Bessel forms
  double r_bessel = 0;
  /// l / E
  double r_compton_scale = 0;
  /// Barnett crossover, see barnett_crossing_radius()
  double r_crossing = 0;
};

/// rho* = l sqrt(2|b|^2 / ((|a|^2+|b|^2) E (E+m))), where the moderate-radius
/// 1/rho branch of the Barnett velocity meets the small-radius linear branch.
inline double barnett_crossing_radius(const BeamParameters &beam, int ell, double a_norm2,
                                      double b_norm2) {
  if (a_norm2 + b_norm2 <= 0.0)
    throw KinematicsError("mixing coefficients (a, b) cannot both vanish");
  const double e = beam.energy();
  return ell * std::sqrt(2.0 * b_norm2 / ((a_norm2 + b_norm2) * e * (e + beam.mass())));
}

/// r_crossing is filled for the equal-weight mixture |a| = |b|; use
/// barnett_crossing_radius() for other weights.
inline CharacteristicRadii characteristic_radii(const BeamParameters &beam, int ell) {
  if (ell < 1)
    throw KinematicsError("characteristic radii need ell >= 1, got " + std::to_string(ell));
  if (beam.kappa() == 0.0)
    throw KinematicsError("characteristic radii are undefined for kappa = 0");
  CharacteristicRadii r;
  r.r_bucket = ell * std::tan(beam.theta()) / beam.kappa();
  r.r_bessel = ell / beam.kappa();
  r.r_compton_scale = ell / beam.energy();
  r.r_crossing = barnett_crossing_radius(beam, ell, 1.0, 1.0);
  return r;
}

} // namespace twisted
