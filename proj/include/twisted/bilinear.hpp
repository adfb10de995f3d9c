#pragma once

/// \file
/// \brief Local densities of a spinor field and the velocity fields built on them.
///
/// Three momentum densities are compared:
///   Dirac current      j^mu = psibar gamma^mu psi
///   canonical          P^mu = (i/2) psibar gamma^0 <->d^mu psi
///   Belinfante         P^mu = (i/4) psibar (gamma^0 <->d^mu + gamma^mu <->d^0) psi
/// with <->d = right-acting minus left-acting derivative. Spatial vectors are
/// reported in the cylindrical basis (rho, phi, z) at the evaluation point.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "twisted/spinor.hpp"

namespace twisted {

enum class VelocityDefinition { DiracCurrent, Canonical, Belinfante };

inline std::string to_string(VelocityDefinition d) {
  switch (d) {
  case VelocityDefinition::DiracCurrent:
    return "dirac";
  case VelocityDefinition::Canonical:
    return "canonical";
  case VelocityDefinition::Belinfante:
    return "belinfante";
  }
  return "unknown";
}

inline VelocityDefinition definition_from_string(const std::string &s) {
  for (auto d : {VelocityDefinition::DiracCurrent, VelocityDefinition::Canonical, VelocityDefinition::Belinfante})
    if (to_string(d) == s)
      return d;
  throw std::invalid_argument("unknown velocity definition '" + s + "'");
}

/// (t, rho, phi, z) components
struct CylVector4 {
  double t = 0;
  double rho = 0;
  double phi = 0;
  double z = 0;
};

struct DensitySet {
  double scalar = 0;
  CylVector4 current;
  CylVector4 p_canonical;
  CylVector4 p_belinfante;
};

struct VelocityVector {
  double v_rho = 0;
  double v_phi = 0;
  double v_z = 0;
  VelocityDefinition definition = VelocityDefinition::DiracCurrent;

  double speed() const { return std::sqrt(v_rho * v_rho + v_phi * v_phi + v_z * v_z); }
};

namespace detail {

inline double expect_re(const Spinor4 &psi, const Matrix4 &m, const Spinor4 &chi) {
  return psi.dot(m * chi).real();
}
inline double expect_im(const Spinor4 &psi, const Matrix4 &m, const Spinor4 &chi) {
  return psi.dot(m * chi).imag();
}
inline double overlap_im(const Spinor4 &psi, const Spinor4 &chi) { return psi.dot(chi).imag(); }

} // namespace detail

inline DensitySet densities(const SpinorField &field, const SpacetimePoint &p) {
  const Spinor4 psi = field.value(p).c;
  const BispinorGradient g = field.gradient(p);
  const auto &m = dirac_matrices(Basis::Dirac);
  const double c = std::cos(p.phi);
  const double s = std::sin(p.phi);
  const Matrix4 alpha_rho = c * m.alpha[0] + s * m.alpha[1];
  const Matrix4 alpha_phi = -s * m.alpha[0] + c * m.alpha[1];
  const Matrix4 &alpha_z = m.alpha[2];

  DensitySet d;
  d.scalar = psi.squaredNorm();
  d.current = {d.scalar, detail::expect_re(psi, alpha_rho, psi), detail::expect_re(psi, alpha_phi, psi),
               detail::expect_re(psi, alpha_z, psi)};

  // d^0 = d_t, d^i = -d_i; P_can^mu = -Im(psi^dag d^mu psi)
  const double energy_density = -detail::overlap_im(psi, g.d_t);
  d.p_canonical = {energy_density, detail::overlap_im(psi, g.d_rho), detail::overlap_im(psi, g.d_phi_over_rho),
                   detail::overlap_im(psi, g.d_z)};

  // second Belinfante half: -(1/2) Im(psi^dag alpha^mu d_t psi), alpha^0 = 1
  d.p_belinfante = {energy_density, 0.5 * d.p_canonical.rho - 0.5 * detail::expect_im(psi, alpha_rho, g.d_t),
                    0.5 * d.p_canonical.phi - 0.5 * detail::expect_im(psi, alpha_phi, g.d_t),
                    0.5 * d.p_canonical.z - 0.5 * detail::expect_im(psi, alpha_z, g.d_t)};
  return d;
}

inline DensitySet densities(const SolutionSpec &spec, const BeamParameters &beam, const SpacetimePoint &p) {
  return densities(make_field(spec, beam), p);
}

/// Spatial density over number or energy density. Empty where psi^dag psi = 0
/// (the axis for ell >= 1), where the velocity is undefined.
inline std::optional<VelocityVector> velocity(const DensitySet &d, VelocityDefinition def) {
  if (!(d.scalar > 0.0) || !std::isfinite(d.scalar))
    return std::nullopt;
  const CylVector4 &num = def == VelocityDefinition::DiracCurrent ? d.current
                          : def == VelocityDefinition::Canonical  ? d.p_canonical
                                                                  : d.p_belinfante;
  if (!(num.t > 0.0))
    return std::nullopt;
  return VelocityVector{num.rho / num.t, num.phi / num.t, num.z / num.t, def};
}

inline std::optional<VelocityVector> velocity(const SpinorField &field, const SpacetimePoint &p,
                                              VelocityDefinition def) {
  if (p.rho == 0.0 && field.singular_on_axis())
    return std::nullopt;
  return velocity(densities(field, p), def);
}

inline std::optional<VelocityVector> velocity(const SolutionSpec &spec, const BeamParameters &beam,
                                              const SpacetimePoint &p, VelocityDefinition def) {
  return velocity(make_field(spec, beam), p, def);
}

// ---------------------------------------------------------------------------
// Closed-form approximations, kept verbatim as comparison targets

enum class ClosedForm {
  /// (kappa/E) J_l J_{l+1} / (sin^2(theta/2) J_l^2 + cos^2(theta/2) J_{l+1}^2)
  Antiparallel,
  /// (2 l / E) |b|^2/(|a|^2+|b|^2) / rho
  BarnettModerate,
  /// (E + m) rho / l
  BarnettSmall,
  /// l / (rho E)
  Canonical,
  /// l/(2 rho E) + (kappa/2E) J_{l+1}/J_l
  Belinfante,
};

class BesselZeroError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct MixingWeights {
  double a_norm2 = 1.0;
  double b_norm2 = 1.0;
};

inline double velocity_closed_form(const BeamParameters &beam, int ell, double rho, ClosedForm which,
                                    MixingWeights w = {}) {
  if (!(rho > 0.0))
    throw std::invalid_argument("closed forms need rho > 0");
  const double e = beam.energy();
  const double x = beam.kappa() * rho;
  switch (which) {
  case ClosedForm::Antiparallel: {
    const double jl = bessel_j(ell, x);
    const double jl1 = bessel_j(ell + 1, x);
    const double s = beam.sin_half();
    const double c = beam.cos_half();
    return beam.kappa() / e * jl * jl1 / (s * s * jl * jl + c * c * jl1 * jl1);
  }
  case ClosedForm::BarnettModerate:
    return 2.0 * ell / e * w.b_norm2 / (w.a_norm2 + w.b_norm2) / rho;
  case ClosedForm::BarnettSmall:
    return (e + beam.mass()) * rho / ell;
  case ClosedForm::Canonical:
    return ell / (rho * e);
  case ClosedForm::Belinfante: {
    const double jl = bessel_j(ell, x);
    const double jl1 = bessel_j(ell + 1, x);
    if (jl == 0.0 || std::abs(jl) <= 1e-15 * std::abs(jl1))
      throw BesselZeroError("Belinfante closed form has a pole at a zero of J_ell");
    return ell / (2.0 * rho * e) + beam.kappa() / (2.0 * e) * jl1 / jl;
  }
  }
  throw std::invalid_argument("unhandled closed form");
}

/// Bilinears of the small-radius Barnett spinor: the exact psi^dag alpha_phi psi
/// and psi^dag psi of that spinor next to their paraxial closed forms (A0 = 1).
struct BarnettBilinearCheck {
  double current_exact = 0;
  double current_closed_form = 0;
  double density_exact = 0;
  double density_closed_form = 0;
};

inline BarnettBilinearCheck bilinear_barnett_check(const BeamParameters &beam, int ell, cplx a, cplx b,
                                                   const SpacetimePoint &p) {
  const DensitySet d = densities(barnett_small_rho_field(beam, ell, a, b, 1.0), p);
  const double e = beam.energy();
  const double em = e + beam.mass();
  const double jl = bessel_j(ell, beam.kappa() * p.rho);
  const double an = std::norm(a);
  const double bn = std::norm(b);
  BarnettBilinearCheck r;
  r.current_exact = d.current.phi;
  r.density_exact = d.scalar;
  r.current_closed_form = 4.0 * ell * jl * jl * bn / p.rho;
  r.density_closed_form = jl * jl *
                    (2.0 * e * (an + bn) + 4.0 * ell * ell * bn / (em * p.rho * p.rho) +
                     4.0 * ell * beam.k_z() / (em * p.rho) * (std::conj(a) * b * std::polar(1.0, -p.phi)).imag());
  return r;
}

// ---------------------------------------------------------------------------
// Current conservation

/// Transverse divergence of the Dirac current by centred differences, in units
/// of j^0 (1/rho + kappa). d_t j^0 and d_z j^z vanish identically for these
/// stationary fields with a common k_z.
inline double current_divergence_fd(const SpinorField &field, const SpacetimePoint &p) {
  const double inv_scale = 1.0 / p.rho + field.beam().kappa();
  const double h = 1e-5 / inv_scale;
  const double x0 = p.rho * std::cos(p.phi);
  const double y0 = p.rho * std::sin(p.phi);
  auto cartesian_current = [&](double x, double y) {
    const auto q = SpacetimePoint::make(std::hypot(x, y), std::atan2(y, x), p.z, p.t);
    const DensitySet d = densities(field, q);
    const double c = std::cos(q.phi);
    const double s = std::sin(q.phi);
    return std::pair{c * d.current.rho - s * d.current.phi, s * d.current.rho + c * d.current.phi};
  };
  const double djx = (cartesian_current(x0 + h, y0).first - cartesian_current(x0 - h, y0).first) / (2 * h);
  const double djy = (cartesian_current(x0, y0 + h).second - cartesian_current(x0, y0 - h).second) / (2 * h);
  const double j0 = densities(field, p).scalar;
  return std::abs(djx + djy) / (j0 * inv_scale);
}

} // namespace twisted
