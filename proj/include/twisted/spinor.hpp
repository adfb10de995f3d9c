#pragma once

/// \file
/// \brief Coordinate-space Bessel-mode Dirac spinors.
///
/// Every solution family is stored as a short list of mode terms, each of the
/// form  coeff * e^{i(k_z z - E t)} * e^{i n phi} * J_m(kappa rho) * rho^{-p}
/// attached to one bispinor component. Exact families only use n = m, p = 0;
/// the small-radius Barnett approximation has one term with n = m - 1, p = 1.
/// Values and analytic gradients follow from that single representation.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twisted/kinematics.hpp"
#include "twisted/special.hpp"

namespace twisted {

using cplx = std::complex<double>;
using Spinor4 = Eigen::Vector4cd;
using Matrix4 = Eigen::Matrix4cd;

inline constexpr cplx I{0.0, 1.0};

class SpinorError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Basis { Dirac, Weyl };

struct SpacetimePoint {
  double rho = 0;
  double phi = 0;
  double z = 0;
  double t = 0;

  /// phi is conventionally 0 on the axis
  static SpacetimePoint make(double rho, double phi, double z = 0, double t = 0) {
    if (!(rho >= 0.0) || !std::isfinite(rho))
      throw SpinorError("rho must be finite and >= 0");
    return {rho, rho == 0.0 ? 0.0 : phi, z, t};
  }
};

struct Bispinor {
  Spinor4 c = Spinor4::Zero();
  Basis basis = Basis::Dirac;

  double norm2() const { return c.squaredNorm(); }
  cplx operator[](int i) const { return c[i]; }
};

/// Cylindrical gradient; d_phi_over_rho is (1/rho) d/dphi, kept finite on axis.
struct BispinorGradient {
  Spinor4 d_t = Spinor4::Zero();
  Spinor4 d_z = Spinor4::Zero();
  Spinor4 d_rho = Spinor4::Zero();
  Spinor4 d_phi_over_rho = Spinor4::Zero();
  Basis basis = Basis::Dirac;

  Spinor4 d_x(double phi) const { return std::cos(phi) * d_rho - std::sin(phi) * d_phi_over_rho; }
  Spinor4 d_y(double phi) const { return std::sin(phi) * d_rho + std::cos(phi) * d_phi_over_rho; }
};

// ---------------------------------------------------------------------------
// Dirac matrices

/// gamma^mu (upper index), alpha_i = gamma^0 gamma^i, gamma5 = i g0 g1 g2 g3.
struct DiracMatrices {
  std::array<Matrix4, 4> gamma;
  std::array<Matrix4, 3> alpha;
  Matrix4 gamma5;
  Basis basis;
};

namespace detail {

inline std::array<Eigen::Matrix2cd, 3> pauli() {
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -I, I, 0;
  sz << 1, 0, 0, -1;
  return {sx, sy, sz};
}

inline Matrix4 blocks(const Eigen::Matrix2cd &a, const Eigen::Matrix2cd &b, const Eigen::Matrix2cd &c,
                      const Eigen::Matrix2cd &d) {
  Matrix4 m;
  m << a, b, c, d;
  return m;
}

/// psi_Weyl = U psi_Dirac; upper pair right-handed (gamma5 = +1).
inline Matrix4 dirac_to_weyl_matrix() {
  const Eigen::Matrix2cd one = Eigen::Matrix2cd::Identity();
  return blocks(one, one, one, -one) / std::numbers::sqrt2;
}

inline DiracMatrices build_dirac() {
  const auto s = pauli();
  const Eigen::Matrix2cd one = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd zero = Eigen::Matrix2cd::Zero();
  DiracMatrices m;
  m.basis = Basis::Dirac;
  m.gamma[0] = blocks(one, zero, zero, -one);
  for (int i = 0; i < 3; ++i) {
    m.gamma[i + 1] = blocks(zero, s[i], -s[i], zero);
    m.alpha[i] = blocks(zero, s[i], s[i], zero);
  }
  m.gamma5 = I * m.gamma[0] * m.gamma[1] * m.gamma[2] * m.gamma[3];
  return m;
}

inline DiracMatrices build_weyl() {
  const DiracMatrices d = build_dirac();
  const Matrix4 u = dirac_to_weyl_matrix();
  DiracMatrices w;
  w.basis = Basis::Weyl;
  for (int mu = 0; mu < 4; ++mu)
    w.gamma[mu] = u * d.gamma[mu] * u.adjoint();
  for (int i = 0; i < 3; ++i)
    w.alpha[i] = u * d.alpha[i] * u.adjoint();
  w.gamma5 = u * d.gamma5 * u.adjoint();
  return w;
}

} // namespace detail

inline const DiracMatrices &dirac_matrices(Basis basis = Basis::Dirac) {
  static const DiracMatrices dirac = detail::build_dirac();
  static const DiracMatrices weyl = detail::build_weyl();
  return basis == Basis::Dirac ? dirac : weyl;
}

inline Bispinor to_weyl(const Bispinor &psi) {
  if (psi.basis != Basis::Dirac)
    throw SpinorError("to_weyl expects a Dirac-basis bispinor");
  static const Matrix4 u = detail::dirac_to_weyl_matrix();
  return {u * psi.c, Basis::Weyl};
}

// ---------------------------------------------------------------------------
// Quantum numbers and solution specification

/// Half-integer stored as twice its value.
struct HalfInteger {
  int twice = 1;

  double value() const { return 0.5 * twice; }
  bool is_half_odd() const { return twice % 2 != 0; }

  static HalfInteger from_double(double v) {
    const double t = std::round(2.0 * v);
    if (!std::isfinite(v) || std::abs(2.0 * v - t) > 1e-9)
      throw SpinorError("not a multiple of 1/2: " + std::to_string(v));
    return {static_cast<int>(t)};
  }

  friend bool operator==(HalfInteger, HalfInteger) = default;
};

enum class Family { HelicityPlus, HelicityMinus, BialynickiBirula, Barnett, BarnettSmallRho };

inline std::string to_string(Family f) {
  switch (f) {
  case Family::HelicityPlus:
    return "helicity_plus";
  case Family::HelicityMinus:
    return "helicity_minus";
  case Family::BialynickiBirula:
    return "bialynicki_birula";
  case Family::Barnett:
    return "barnett";
  case Family::BarnettSmallRho:
    return "barnett_small_rho";
  }
  return "unknown";
}

inline Family family_from_string(const std::string &s) {
  for (Family f : {Family::HelicityPlus, Family::HelicityMinus, Family::BialynickiBirula, Family::Barnett,
                   Family::BarnettSmallRho})
    if (to_string(f) == s)
      return f;
  throw SpinorError("unknown solution family '" + s + "'");
}

inline bool has_definite_jz(Family f) {
  return f == Family::HelicityPlus || f == Family::HelicityMinus || f == Family::BialynickiBirula;
}

struct SolutionSpec {
  Family family = Family::HelicityPlus;
  /// total angular momentum along z (helicity and BB families)
  HalfInteger j_z{1};
  /// orbital index of the Barnett families
  int ell = 1;
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};
  cplx a0{1.0, 0.0};

  /// +1 or -1 times 1/2 for helicity families, 0 otherwise
  HalfInteger helicity() const {
    if (family == Family::HelicityPlus)
      return {1};
    if (family == Family::HelicityMinus)
      return {-1};
    return {0};
  }

  /// The index carried by f_B^ell: j_z - 1/2 for the definite-j_z families
  /// (both helicities use this labelling), ell for the Barnett families.
  int orbital_index() const {
    if (!has_definite_jz(family))
      return ell;
    if (!j_z.is_half_odd())
      throw SpinorError("j_z must be half-odd-integer so that j_z - lambda is an integer");
    return (j_z.twice - 1) / 2;
  }

  /// The l that sets the vortex length scales. Negative helicity with
  /// j_z = l - 1/2 carries J_{l-1} above and J_l below, and its bucket core
  /// ends near l tan(theta)/kappa, so it is labelled by j_z + 1/2.
  int vortex_index() const {
    const int l = orbital_index();
    return family == Family::HelicityMinus ? l + 1 : l;
  }

  friend bool operator==(const SolutionSpec &, const SolutionSpec &) = default;
};

// ---------------------------------------------------------------------------
// Mode-sum field

struct ModeTerm {
  int component = 0;
  cplx coeff{};
  /// n in e^{i n phi}
  int azimuthal = 0;
  /// m in J_m(kappa rho)
  int order = 0;
  /// p in rho^{-p}
  int inverse_power = 0;
};

class SpinorField {
public:
  SpinorField(BeamParameters beam, std::vector<ModeTerm> terms) : beam_(beam), terms_(std::move(terms)) {
    for (const auto &t : terms_) {
      if (t.component < 0 || t.component > 3)
        throw SpinorError("mode term component out of range");
      if (std::abs(t.order) + 1 > max_bessel_order)
        throw SpinorError("Bessel order too large for mode term");
      if (t.inverse_power < 0)
        throw SpinorError("negative inverse power");
    }
  }

  const BeamParameters &beam() const { return beam_; }
  std::span<const ModeTerm> terms() const { return terms_; }

  bool singular_on_axis() const {
    for (const auto &t : terms_)
      if (t.inverse_power > 0)
        return true;
    return false;
  }

  Bispinor value(const SpacetimePoint &p) const {
    check_point(p);
    const cplx wave = plane_phase(p);
    const double x = beam_.kappa() * p.rho;
    Bispinor out;
    for (const auto &t : terms_) {
      const double radial = detail::bessel_j_unchecked(t.order, x) * std::pow(p.rho, -t.inverse_power);
      out.c[t.component] += t.coeff * wave * azimuth(t.azimuthal, p.phi) * radial;
    }
    return out;
  }

  BispinorGradient gradient(const SpacetimePoint &p) const {
    check_point(p);
    const cplx wave = plane_phase(p);
    const double kappa = beam_.kappa();
    const double x = kappa * p.rho;
    BispinorGradient g;
    Spinor4 psi = Spinor4::Zero();
    for (const auto &t : terms_) {
      const cplx common = t.coeff * wave * azimuth(t.azimuthal, p.phi);
      const double jm = detail::bessel_j_unchecked(t.order, x);
      const double jlo = detail::bessel_j_unchecked(t.order - 1, x);
      const double jhi = detail::bessel_j_unchecked(t.order + 1, x);
      if (t.inverse_power == 0) {
        psi[t.component] += common * jm;
        g.d_rho[t.component] += common * (kappa * 0.5 * (jlo - jhi));
        if (t.azimuthal == t.order) // n J_n(x)/x = (J_{n-1} + J_{n+1})/2
          g.d_phi_over_rho[t.component] += common * (I * kappa * 0.5 * (jlo + jhi));
        else
          g.d_phi_over_rho[t.component] += common * (I * double(t.azimuthal) * jm / p.rho);
      } else {
        const double scale = std::pow(p.rho, -t.inverse_power);
        psi[t.component] += common * jm * scale;
        g.d_rho[t.component] +=
            common * (kappa * 0.5 * (jlo - jhi) * scale - t.inverse_power * jm * scale / p.rho);
        g.d_phi_over_rho[t.component] += common * (I * double(t.azimuthal) * jm * scale / p.rho);
      }
    }
    g.d_t = -I * beam_.energy() * psi;
    g.d_z = I * beam_.k_z() * psi;
    return g;
  }

  /// Multiplies one component by a real factor. Negative-control hook.
  SpinorField scaled_component(int component, double factor) const {
    SpinorField copy = *this;
    for (auto &t : copy.terms_)
      if (t.component == component)
        t.coeff *= factor;
    return copy;
  }

private:
  void check_point(const SpacetimePoint &p) const {
    if (!(p.rho >= 0.0))
      throw SpinorError("rho must be >= 0");
    if (p.rho == 0.0 && singular_on_axis())
      throw SpinorError("field has a 1/rho term and is undefined on the axis");
  }

  cplx plane_phase(const SpacetimePoint &p) const {
    return std::polar(1.0, beam_.k_z() * p.z - beam_.energy() * p.t);
  }

  static cplx azimuth(int n, double phi) { return n == 0 ? cplx{1.0, 0.0} : std::polar(1.0, n * phi); }

  BeamParameters beam_;
  std::vector<ModeTerm> terms_;
};

// ---------------------------------------------------------------------------
// Solution families

namespace detail {

inline void check_mixing(cplx a, cplx b) {
  if (a == cplx{} && b == cplx{})
    throw SpinorError("mixing coefficients (a, b) cannot both vanish");
}

} // namespace detail

/// Definite-helicity Bessel modes; ell = j_z - 1/2 labels f_B^ell for both signs.
inline SpinorField helicity_field(const BeamParameters &beam, HalfInteger j_z, HalfInteger lambda, cplx a0) {
  if (!j_z.is_half_odd())
    throw SpinorError("j_z - lambda must be an integer");
  if (lambda.twice != 1 && lambda.twice != -1)
    throw SpinorError("helicity must be +1/2 or -1/2");
  const int l = (j_z.twice - 1) / 2;
  const double em = beam.energy() + beam.mass();
  const double k = beam.k();
  const double c = beam.cos_half();
  const double s = beam.sin_half();
  const cplx pre = a0 / std::sqrt(em);
  if (lambda.twice == 1)
    return SpinorField(beam, {{0, pre * em * c, l, l},
                              {1, pre * I * em * s, l + 1, l + 1},
                              {2, pre * k * c, l, l},
                              {3, pre * I * k * s, l + 1, l + 1}});
  return SpinorField(beam, {{0, pre * I * em * s, l, l},
                            {1, pre * em * c, l + 1, l + 1},
                            {2, pre * (-I) * k * s, l, l},
                            {3, pre * (-k) * c, l + 1, l + 1}});
}

/// Two-parameter definite-j_z family; a linear combination of both helicities.
inline SpinorField bb_field(const BeamParameters &beam, HalfInteger j_z, cplx a, cplx b, cplx a0) {
  detail::check_mixing(a, b);
  if (!j_z.is_half_odd())
    throw SpinorError("j_z must be half-odd-integer");
  const int l = (j_z.twice - 1) / 2;
  const double em = beam.energy() + beam.mass();
  const double kz = beam.k_z();
  const double kappa = beam.kappa();
  const cplx pre = a0 / std::sqrt(em);
  return SpinorField(beam, {{0, pre * a * em, l, l},
                            {1, pre * b * em, l + 1, l + 1},
                            {2, pre * (a * kz - I * b * kappa), l, l},
                            {3, pre * (I * a * kappa - b * kz), l + 1, l + 1}});
}

/// Mixed-j_z family valid over all space.
inline SpinorField barnett_field(const BeamParameters &beam, int ell, cplx a, cplx b, cplx a0) {
  detail::check_mixing(a, b);
  const double em = beam.energy() + beam.mass();
  const double kz = beam.k_z();
  const double kappa = beam.kappa();
  const cplx pre = a0 / std::sqrt(em);
  return SpinorField(beam, {{0, pre * a * em, ell, ell},
                            {1, pre * b * em, ell, ell},
                            {2, pre * a * kz, ell, ell},
                            {2, pre * (-I) * kappa * b, ell - 1, ell - 1},
                            {3, pre * (-b) * kz, ell, ell},
                            {3, pre * I * kappa * a, ell + 1, ell + 1}});
}

/// Small-radius form: drops the f^{ell+1} term and replaces kappa f^{ell-1}
/// by its leading (2 ell / rho) e^{-i phi} f^ell. Singular on the axis when b != 0.
inline SpinorField barnett_small_rho_field(const BeamParameters &beam, int ell, cplx a, cplx b, cplx a0) {
  detail::check_mixing(a, b);
  const double em = beam.energy() + beam.mass();
  const double kz = beam.k_z();
  const cplx pre = a0 / std::sqrt(em);
  std::vector<ModeTerm> terms{{0, pre * a * em, ell, ell},
                              {1, pre * b * em, ell, ell},
                              {2, pre * a * kz, ell, ell},
                              {3, pre * (-b) * kz, ell, ell}};
  if (b != cplx{})
    terms.push_back({2, pre * (-I) * (2.0 * ell) * b, ell - 1, ell, 1});
  return SpinorField(beam, std::move(terms));
}

inline SpinorField make_field(const SolutionSpec &spec, const BeamParameters &beam) {
  switch (spec.family) {
  case Family::HelicityPlus:
  case Family::HelicityMinus:
    return helicity_field(beam, spec.j_z, spec.helicity(), spec.a0);
  case Family::BialynickiBirula:
    return bb_field(beam, spec.j_z, spec.a, spec.b, spec.a0);
  case Family::Barnett:
    return barnett_field(beam, spec.ell, spec.a, spec.b, spec.a0);
  case Family::BarnettSmallRho:
    return barnett_small_rho_field(beam, spec.ell, spec.a, spec.b, spec.a0);
  }
  throw SpinorError("unhandled family");
}

// Point-wise convenience wrappers

inline cplx mode_function(const BeamParameters &beam, int ell, const SpacetimePoint &p) {
  return SpinorField(beam, {{0, 1.0, ell, ell}}).value(p)[0];
}

inline Bispinor helicity_solution(const BeamParameters &beam, HalfInteger j_z, HalfInteger lambda, cplx a0,
                                  const SpacetimePoint &p) {
  return helicity_field(beam, j_z, lambda, a0).value(p);
}

inline Bispinor bb_solution(const BeamParameters &beam, HalfInteger j_z, cplx a, cplx b, cplx a0,
                            const SpacetimePoint &p) {
  return bb_field(beam, j_z, a, b, a0).value(p);
}

inline Bispinor barnett_solution(const BeamParameters &beam, int ell, cplx a, cplx b, cplx a0,
                                 const SpacetimePoint &p) {
  return barnett_field(beam, ell, a, b, a0).value(p);
}

inline Bispinor barnett_small_rho(const BeamParameters &beam, int ell, cplx a, cplx b, cplx a0,
                                  const SpacetimePoint &p) {
  if (p.rho == 0.0)
    throw SpinorError("small-radius Barnett form is singular at rho = 0");
  return barnett_small_rho_field(beam, ell, a, b, a0).value(p);
}

inline BispinorGradient analytic_gradient(const SolutionSpec &spec, const BeamParameters &beam,
                                          const SpacetimePoint &p) {
  return make_field(spec, beam).gradient(p);
}

/// b that zeroes the second Weyl component of the BB family for given a:
/// b (E + m - k_z) + i a kappa = 0.
inline cplx bb_weyl_zero_b(const BeamParameters &beam, cplx a) {
  return -I * a * beam.kappa() / (beam.energy() + beam.mass() - beam.k_z());
}

// ---------------------------------------------------------------------------
// Dirac equation check

/// |(i gamma^mu d_mu - m) psi| / (m |psi|)
inline double dirac_residual(const SpinorField &field, const SpacetimePoint &p) {
  const Bispinor psi = field.value(p);
  const double norm = psi.c.norm();
  if (norm == 0.0)
    throw SpinorError("dirac_residual is undefined where psi = 0");
  const BispinorGradient g = field.gradient(p);
  const auto &m = dirac_matrices(Basis::Dirac);
  const Spinor4 r = I * (m.gamma[0] * g.d_t + m.gamma[1] * g.d_x(p.phi) + m.gamma[2] * g.d_y(p.phi) +
                         m.gamma[3] * g.d_z) -
                    field.beam().mass() * psi.c;
  return r.norm() / (field.beam().mass() * norm);
}

inline double dirac_residual(const SolutionSpec &spec, const BeamParameters &beam, const SpacetimePoint &p) {
  return dirac_residual(make_field(spec, beam), p);
}

} // namespace twisted
