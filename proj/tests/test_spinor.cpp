#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "twisted/spinor.hpp"

using namespace twisted;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<SpacetimePoint> random_points(int n, unsigned seed, double rho_lo = 1e-3, double rho_hi = 50.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SpacetimePoint> pts;
  for (int i = 0; i < n; ++i)
    pts.push_back(SpacetimePoint::make(rho_lo * std::pow(rho_hi / rho_lo, u(rng)), 2 * pi * u(rng),
                                       -5 + 10 * u(rng), -5 + 10 * u(rng)));
  return pts;
}

double rel_diff(const Spinor4 &a, const Spinor4 &b) { return (a - b).norm() / std::max(a.norm(), b.norm()); }

const std::vector<BeamParameters> &beams() {
  static const std::vector<BeamParameters> b{BeamParameters(0.3, 0.4), BeamParameters(0.05, 1.0),
                                             BeamParameters(0.02, 0.5), BeamParameters(1.5, 0.7),
                                             BeamParameters(0.4, -0.3)};
  return b;
}

} // namespace

// ---------------------------------------------------------------------------

TEST(DiracMatrices, CliffordAlgebraInBothBases) {
  const double metric[4] = {1, -1, -1, -1};
  for (Basis basis : {Basis::Dirac, Basis::Weyl}) {
    const auto &m = dirac_matrices(basis);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        const Matrix4 anti = m.gamma[mu] * m.gamma[nu] + m.gamma[nu] * m.gamma[mu];
        const Matrix4 expect = (mu == nu ? 2.0 * metric[mu] : 0.0) * Matrix4::Identity();
        EXPECT_LE((anti - expect).norm(), 1e-14);
      }
    for (int i = 0; i < 3; ++i)
      EXPECT_LE((m.alpha[i] - m.gamma[0] * m.gamma[i + 1]).norm(), 1e-15);
  }
}

TEST(DiracMatrices, StandardBlockForms) {
  const auto &d = dirac_matrices(Basis::Dirac);
  // alpha_x = [[0, sigma_x], [sigma_x, 0]]
  EXPECT_EQ(d.alpha[0](0, 3), cplx(1, 0));
  EXPECT_EQ(d.alpha[0](3, 0), cplx(1, 0));
  EXPECT_EQ(d.alpha[1](0, 3), cplx(0, -1));
  EXPECT_EQ(d.alpha[2](0, 2), cplx(1, 0));
  EXPECT_EQ(d.alpha[2](1, 3), cplx(-1, 0));
  EXPECT_EQ(d.alpha[0](0, 0), cplx(0, 0));
  const auto &w = dirac_matrices(Basis::Weyl);
  Matrix4 chiral = Matrix4::Zero();
  chiral.diagonal() << 1, 1, -1, -1;
  EXPECT_LE((w.gamma5 - chiral).norm(), 1e-15);
}

TEST(ModeFunction, Examples) {
  const BeamParameters beam(0.3, 0.4);
  EXPECT_EQ(mode_function(beam, 0, SpacetimePoint::make(0, 0)), cplx(1, 0));
  EXPECT_EQ(mode_function(beam, 2, SpacetimePoint::make(0, 0)), cplx(0, 0));
  const cplx f = mode_function(beam, 1, SpacetimePoint::make(2.0, pi / 2));
  EXPECT_NEAR(f.real(), 0.0, 1e-16);
  EXPECT_NEAR(f.imag(), 0.286700988063915739746, 1e-15); // J_1(0.6)
}

TEST(HelicitySolution, PlaneWaveSpinorOnAxis) {
  const BeamParameters beam(0.0, 0.75);
  const auto psi = helicity_solution(beam, {1}, {1}, 1.0, SpacetimePoint::make(0, 0));
  const double pre = 1.0 / std::sqrt(beam.energy() + 1.0);
  EXPECT_NEAR(std::abs(psi[0] - pre * (beam.energy() + 1.0)), 0.0, 1e-15);
  EXPECT_EQ(psi[1], cplx(0, 0));
  EXPECT_NEAR(std::abs(psi[2] - pre * beam.k()), 0.0, 1e-15);
  EXPECT_EQ(psi[3], cplx(0, 0));
}

TEST(HelicitySolution, VanishesOnAxisForPositiveOrbitalIndex) {
  const BeamParameters beam(0.3, 0.4);
  const auto psi = helicity_solution(beam, {3}, {-1}, 1.0, SpacetimePoint::make(0, 0));
  EXPECT_EQ(psi.norm2(), 0.0);
}

TEST(HelicitySolution, MatchesAngularIntegral) {
  const auto pts = random_points(100, 11, 1e-3, 50.0);
  for (const auto &beam : beams()) {
    if (beam.kappa() * 50 > 100)
      continue;
    for (int twice_jz : {1, 3, 7, -1, -5}) {
      for (int twice_lambda : {1, -1}) {
        const SpinorField f = helicity_field(beam, {twice_jz}, {twice_lambda}, cplx(0.6, -0.8));
        for (const auto &p : pts) {
          const Spinor4 ref = oracle::angular_integral(beam.kappa(), beam.k_z(), beam.mass(), twice_jz,
                                                       twice_lambda, cplx(0.6, -0.8), p.rho, p.phi, p.z, p.t);
          const Spinor4 got = f.value(p).c;
          // the double-precision quadrature cannot resolve values below ~1e-15 of the plane-wave amplitude
          const double floor = 1e-14 * std::sqrt(2 * beam.energy());
          EXPECT_LE((got - ref).norm(), 1e-10 * ref.norm() + floor)
              << "jz=" << twice_jz << "/2 lambda=" << twice_lambda << "/2 rho=" << p.rho;
        }
      }
    }
  }
}

TEST(HelicitySolution, RejectsIntegerJz) {
  const BeamParameters beam(0.3, 0.4);
  EXPECT_THROW(helicity_field(beam, {2}, {1}, 1.0), SpinorError);
  EXPECT_THROW(helicity_field(beam, {1}, {3}, 1.0), SpinorError);
  SolutionSpec spec;
  spec.j_z = {4};
  EXPECT_THROW(spec.orbital_index(), SpinorError);
  EXPECT_THROW(HalfInteger::from_double(0.3), SpinorError);
}

TEST(BBSolution, IsTheHelicitySuperposition) {
  const auto pts = random_points(200, 12);
  const cplx a(0.7, 0.2), b(-0.3, 0.9);
  for (const auto &beam : beams()) {
    const double c = beam.cos_half(), s = beam.sin_half();
    const cplx alpha = a * c - I * b * s;
    const cplx beta = -I * a * s + b * c;
    for (int twice_jz : {1, 5, -3}) {
      const SpinorField bb = bb_field(beam, {twice_jz}, a, b, 1.0);
      const SpinorField plus = helicity_field(beam, {twice_jz}, {1}, 1.0);
      const SpinorField minus = helicity_field(beam, {twice_jz}, {-1}, 1.0);
      for (const auto &p : pts) {
        const Spinor4 combo = alpha * plus.value(p).c + beta * minus.value(p).c;
        const Spinor4 got = bb.value(p).c;
        if (got.norm() < 1e-280)
          continue;
        EXPECT_LE(rel_diff(got, combo), 1e-13);
      }
    }
  }
}

TEST(BBSolution, ReproducesPositiveHelicity) {
  // a = cos(theta/2), b = i sin(theta/2) zeroes the negative-helicity weight
  const BeamParameters beam(0.3, 0.4);
  const cplx a = beam.cos_half(), b = I * beam.sin_half();
  for (const auto &p : random_points(100, 13)) {
    const auto bb = bb_solution(beam, {3}, a, b, 1.0, p);
    const auto hp = helicity_solution(beam, {3}, {1}, 1.0, p);
    EXPECT_LE(rel_diff(bb.c, hp.c), 1e-14);
  }
}

TEST(BBSolution, RejectsZeroMixing) {
  EXPECT_THROW(bb_field(BeamParameters(0.3, 0.4), {1}, 0.0, 0.0, 1.0), SpinorError);
  EXPECT_THROW(barnett_field(BeamParameters(0.3, 0.4), 1, 0.0, 0.0, 1.0), SpinorError);
}

TEST(Weyl, ZeroSecondComponentCondition) {
  for (const auto &beam : beams()) {
    const cplx a(0.8, -0.3);
    const cplx b = bb_weyl_zero_b(beam, a);
    EXPECT_LE(std::abs(b * (beam.energy() + beam.mass() - beam.k_z()) + I * a * beam.kappa()), 1e-15);
    const SpinorField f = bb_field(beam, {5}, a, b, 1.0);
    for (const auto &p : random_points(100, 14)) {
      const auto w = to_weyl(f.value(p));
      EXPECT_LE(std::abs(w[1]), 1e-13 * std::sqrt(w.norm2()));
    }
  }
}

TEST(Weyl, OppositeSignOfInterferenceTermDoesNotZeroAnyComponent) {
  // b (E + m - k_z) - i a kappa = 0 leaves the pure f^{l+1} Weyl component at 2 i a kappa
  const BeamParameters beam(0.3, 0.4);
  const cplx a = 1.0;
  const cplx b = I * a * beam.kappa() / (beam.energy() + beam.mass() - beam.k_z());
  const auto p = SpacetimePoint::make(2.0, 0.4);
  const auto w = to_weyl(bb_solution(beam, {1}, a, b, 1.0, p));
  EXPECT_GT(std::abs(w[1]), 1e-3 * std::sqrt(w.norm2()));
  EXPECT_GT(std::abs(w[3]), 1e-3 * std::sqrt(w.norm2()));
}

TEST(Weyl, PlaneWaveChiralRatio) {
  for (double kz : {0.2, 0.75, 3.0}) {
    const BeamParameters beam(0.0, kz);
    const auto w = to_weyl(helicity_solution(beam, {1}, {1}, 1.0, SpacetimePoint::make(0, 0)));
    const double ratio = std::abs(w[0]) / std::abs(w[2]);
    EXPECT_NEAR(ratio, std::sqrt((beam.energy() + beam.k()) / (beam.energy() - beam.k())), 1e-12);
  }
}

TEST(Weyl, Unitarity) {
  const BeamParameters beam(0.3, 0.4);
  const SpinorField f = barnett_field(beam, 2, cplx(0.3, 0.1), cplx(-0.5, 0.7), 1.0);
  for (const auto &p : random_points(200, 15)) {
    const auto d = f.value(p);
    const auto w = to_weyl(d);
    EXPECT_LE(std::abs(w.norm2() - d.norm2()), 1e-14 * d.norm2());
    EXPECT_EQ(w.basis, Basis::Weyl);
  }
  EXPECT_THROW(to_weyl(to_weyl(f.value(SpacetimePoint::make(1, 0)))), SpinorError);
}

TEST(BarnettSolution, ReducesToBBBranches) {
  const cplx a(0.7, 0.1), b(0.2, -0.6);
  for (const auto &beam : beams()) {
    for (int ell : {1, 2, 4}) {
      const SpinorField full = barnett_field(beam, ell, a, b, 1.0);
      const SpinorField pure_a = barnett_field(beam, ell, a, 0.0, 1.0);
      const SpinorField pure_b = barnett_field(beam, ell, 0.0, b, 1.0);
      const SpinorField bb_a = bb_field(beam, {2 * ell + 1}, a, 0.0, 1.0);
      const SpinorField bb_b = bb_field(beam, {2 * ell - 1}, 0.0, b, 1.0);
      for (const auto &p : random_points(100, 16)) {
        const Spinor4 va = bb_a.value(p).c, vb = bb_b.value(p).c;
        EXPECT_LE((pure_a.value(p).c - va).norm(), 1e-14 * std::max(1e-300, va.norm()));
        EXPECT_LE((pure_b.value(p).c - vb).norm(), 1e-14 * std::max(1e-300, vb.norm()));
        EXPECT_LE((full.value(p).c - va - vb).norm(), 1e-14 * (va + vb).norm());
      }
    }
  }
}

TEST(BarnettSmallRho, CloseToFullSolutionNearAxis) {
  const cplx a(1.0, 0.0), b(0.6, 0.8);
  for (double theta : {0.01, 0.05}) {
    const BeamParameters beam = beam_from_pitch(theta, 1.0);
    for (int ell : {1, 2, 3}) {
      const SpinorField full = barnett_field(beam, ell, a, b, 1.0);
      const SpinorField approx = barnett_small_rho_field(beam, ell, a, b, 1.0);
      for (double x = 1e-4 * ell; x <= 0.1 * ell; x *= 1.5) {
        const auto p = SpacetimePoint::make(x / beam.kappa(), 0.7);
        const cplx c_full = full.value(p)[2];
        EXPECT_LE(std::abs(approx.value(p)[2] - c_full), 0.05 * std::abs(c_full));
      }
    }
  }
}

TEST(BarnettSmallRho, PureAIsFiniteOnAxisAndSingularOtherwise) {
  const BeamParameters beam = beam_from_pitch(0.02, 1.0);
  const SpinorField pure_a = barnett_small_rho_field(beam, 1, 1.0, 0.0, 1.0);
  EXPECT_FALSE(pure_a.singular_on_axis());
  EXPECT_NO_THROW(pure_a.value(SpacetimePoint::make(0, 0)));
  EXPECT_THROW(barnett_small_rho(beam, 1, 1.0, 0.5, 1.0, SpacetimePoint::make(0, 0)), SpinorError);
  EXPECT_THROW(barnett_small_rho_field(beam, 1, 1.0, 0.5, 1.0).value(SpacetimePoint::make(0, 0)), SpinorError);
}

TEST(BarnettSmallRho, LowerToUpperRatioIsParaxialKOverEPlusM) {
  const BeamParameters beam = beam_from_pitch(0.02, 1.0);
  const auto psi = barnett_small_rho(beam, 2, 1.0, 0.0, 1.0, SpacetimePoint::make(3.0, 0.2));
  const double ratio = std::abs(psi[2] / psi[0]);
  EXPECT_NEAR(ratio, beam.k_z() / (beam.energy() + 1.0), 1e-14);
  const double paraxial = beam.k() / (beam.energy() + 1.0);
  EXPECT_LE(std::abs(ratio / paraxial - 1.0), 0.5 * beam.theta() * beam.theta());
}

TEST(Gradient, StationaryTimeAndZDependence) {
  const BeamParameters beam(0.3, 0.4);
  SolutionSpec spec;
  spec.family = Family::Barnett;
  spec.ell = 2;
  spec.a = cplx(0.4, 0.3);
  spec.b = cplx(-0.2, 0.5);
  const SpinorField f = make_field(spec, beam);
  for (const auto &p : random_points(100, 17)) {
    const Spinor4 psi = f.value(p).c;
    const auto g = analytic_gradient(spec, beam, p);
    EXPECT_LE((g.d_t + I * beam.energy() * psi).norm(), 1e-15 * std::max(1.0, psi.norm()));
    EXPECT_LE((g.d_z - I * beam.k_z() * psi).norm(), 1e-15 * std::max(1.0, psi.norm()));
  }
}

TEST(Gradient, RichardsonConvergenceOfCentredDifferences) {
  const BeamParameters beam(0.3, 0.4);
  const SpinorField f = barnett_field(beam, 2, cplx(0.4, 0.3), cplx(-0.2, 0.5), 1.0);
  const SpinorField sr = barnett_small_rho_field(beam, 2, cplx(0.4, 0.3), cplx(-0.2, 0.5), 1.0);
  for (const SpinorField *field : {&f, &sr}) {
    for (const auto &p : random_points(30, 18, 0.5, 20.0)) {
      const auto g = field->gradient(p);
      auto radial_error = [&](double h) {
        const Spinor4 fd = (field->value(SpacetimePoint::make(p.rho + h, p.phi, p.z, p.t)).c -
                            field->value(SpacetimePoint::make(p.rho - h, p.phi, p.z, p.t)).c) /
                           (2 * h);
        return (fd - g.d_rho).norm();
      };
      auto azimuthal_error = [&](double h) {
        const double dphi = h / p.rho;
        const Spinor4 fd = (field->value(SpacetimePoint::make(p.rho, p.phi + dphi, p.z, p.t)).c -
                            field->value(SpacetimePoint::make(p.rho, p.phi - dphi, p.z, p.t)).c) /
                           (2 * h);
        return (fd - g.d_phi_over_rho).norm();
      };
      const double h = 0.02 * std::min(p.rho, 1.0);
      EXPECT_NEAR(radial_error(h) / radial_error(h / 2), 4.0, 0.5) << "rho=" << p.rho;
      EXPECT_NEAR(azimuthal_error(h) / azimuthal_error(h / 2), 4.0, 0.5) << "rho=" << p.rho;
    }
  }
}

TEST(Gradient, FiniteOnAxis) {
  // J_1(kappa rho) e^{i phi} ~ kappa (x + i y)/2 near the axis
  const BeamParameters beam(0.3, 0.4);
  const SpinorField f(beam, {{0, 1.0, 1, 1}, {1, 1.0, -1, -1}});
  const auto g = f.gradient(SpacetimePoint::make(0, 0));
  EXPECT_NEAR(std::abs(g.d_x(0)[0] - 0.15), 0, 1e-16);
  EXPECT_NEAR(std::abs(g.d_y(0)[0] - I * 0.15), 0, 1e-16);
  // J_{-1}(kappa rho) e^{-i phi} ~ -kappa (x - i y)/2
  EXPECT_NEAR(std::abs(g.d_x(0)[1] + 0.15), 0, 1e-16);
  EXPECT_NEAR(std::abs(g.d_y(0)[1] - I * 0.15), 0, 1e-16);
}

TEST(DiracResidual, ExactFamiliesSolveTheDiracEquation) {
  const auto pts = random_points(1000, 19);
  for (const auto &beam : beams()) {
    std::vector<SpinorField> fields{
        helicity_field(beam, {5}, {1}, cplx(0.3, 0.4)), helicity_field(beam, {5}, {-1}, 1.0),
        helicity_field(beam, {-3}, {1}, 1.0),           bb_field(beam, {3}, cplx(0.7, 0.2), cplx(-0.3, 0.9), 1.0),
        barnett_field(beam, 2, cplx(1, 0), cplx(0, 1), 1.0)};
    for (const auto &f : fields) {
      double worst = 0;
      for (const auto &p : pts)
        worst = std::max(worst, dirac_residual(f, p));
      EXPECT_LE(worst, 1e-12);
    }
  }
}

TEST(DiracResidual, SmallRhoFormIsOnlyApproximate) {
  const BeamParameters beam = beam_from_pitch(0.05, 1.0);
  const int ell = 2;
  const SpinorField f = barnett_small_rho_field(beam, ell, 1.0, cplx(0, 1), 1.0);
  const double r = dirac_residual(f, SpacetimePoint::make(0.5 * ell / beam.kappa(), 0.3));
  EXPECT_GT(r, 1e-6);
  EXPECT_LT(r, 1.0);
}

TEST(DiracResidual, CorruptedComponentFails) {
  const BeamParameters beam(0.3, 0.4);
  const SpinorField f = helicity_field(beam, {3}, {1}, 1.0).scaled_component(2, 1.01);
  EXPECT_GT(dirac_residual(f, SpacetimePoint::make(2.0, 0.5)), 1e-4);
}

TEST(DiracResidual, UndefinedWherePsiVanishes) {
  const BeamParameters beam(0.3, 0.4);
  EXPECT_THROW(dirac_residual(helicity_field(beam, {5}, {1}, 1.0), SpacetimePoint::make(0, 0)), SpinorError);
}

TEST(PhaseCovariance, EachComponentCarriesItsOrbitalIndex) {
  const BeamParameters beam(0.3, 0.4);
  const int twice_jz = 5; // l = 2
  for (int twice_lambda : {1, -1}) {
    const SpinorField f = helicity_field(beam, {twice_jz}, {twice_lambda}, 1.0);
    for (const auto &p : random_points(50, 20)) {
      const double delta = 0.37;
      const auto q = SpacetimePoint::make(p.rho, p.phi + delta, p.z, p.t);
      const auto v0 = f.value(p), v1 = f.value(q);
      const int orders[4] = {2, 3, 2, 3};
      for (int c = 0; c < 4; ++c)
        EXPECT_LE(std::abs(v1[c] - std::polar(1.0, orders[c] * delta) * v0[c]), 1e-14 * std::sqrt(v0.norm2()));
    }
  }
}

TEST(SpacetimePoint, Validation) {
  EXPECT_THROW(SpacetimePoint::make(-1.0, 0.0), SpinorError);
  EXPECT_EQ(SpacetimePoint::make(0.0, 2.0).phi, 0.0);
}
