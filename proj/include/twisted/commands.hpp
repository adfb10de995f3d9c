#pragma once

/// \file
/// \brief The profile / vorticity / validate / classify pipelines behind the CLI.
///
/// Each command returns its rendered output and an exit code; the executable
/// only handles files and flags. Numbers are written with 12 significant
/// digits so identical scenarios give byte-identical output.

#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "twisted/scenario.hpp"
#include "twisted/vortex.hpp"

namespace twisted {

enum ExitCode : int { exit_ok = 0, exit_validation_failure = 1, exit_config_error = 2 };

struct CommandResult {
  int exit_code = exit_ok;
  std::string output;
  /// names of failed checks (validate only)
  std::vector<std::string> failures;
};

namespace detail {

inline std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

inline double round12(double v) { return std::stod(fmt12(v)); }

inline nlohmann::json num_or_null(const std::optional<double> &v) {
  if (!v || !std::isfinite(*v))
    return nullptr;
  return round12(*v);
}

/// Renders a table either as CSV (empty cell for missing values) or as JSON
/// {"columns": [...], "rows": [[...]]} with nulls.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  std::string render(OutputFormat f) const {
    if (f == OutputFormat::Json) {
      nlohmann::json j;
      j["columns"] = columns;
      j["rows"] = nlohmann::json::array();
      for (const auto &r : rows) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto &v : r)
          row.push_back(num_or_null(v));
        j["rows"].push_back(row);
      }
      return j.dump(2) + "\n";
    }
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i)
      out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const auto &r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i)
          out += ",";
        if (r[i] && std::isfinite(*r[i]))
          out += fmt12(*r[i]);
      }
      out += "\n";
    }
    return out;
  }
};

inline const std::vector<VelocityDefinition> &all_definitions() {
  static const std::vector<VelocityDefinition> defs{VelocityDefinition::DiracCurrent, VelocityDefinition::Canonical,
                                                    VelocityDefinition::Belinfante};
  return defs;
}

inline std::vector<double> scenario_radii(const Scenario &s, const BeamParameters &beam) {
  auto radii = log_grid(s.radii.min, s.radii.max, s.radii.points_per_decade);
  if (beam.kappa() > 0.0)
    for (auto &r : radii)
      r = jitter_off_bessel_zero(r, beam, s.solution.orbital_index());
  return radii;
}

} // namespace detail

/// Velocities at (rho, phi = 0, z = 0, t = 0) for every radius of the grid.
inline CommandResult cmd_profile(const Scenario &s, OutputFormat format) {
  const BeamParameters beam = s.beam_parameters();
  const SpinorField field = make_field(s.solution, beam);
  detail::Table t;
  t.columns = {"rho",         "v_phi_dirac",   "v_phi_canonical", "v_phi_belinfante", "v_z_dirac",
               "v_z_canonical", "v_z_belinfante", "density",         "undefined_flag"};
  for (double rho : detail::scenario_radii(s, beam)) {
    const auto p = SpacetimePoint::make(rho, 0.0);
    const DensitySet d = densities(field, p);
    std::vector<std::optional<double>> row(t.columns.size());
    row[0] = rho;
    row[7] = d.scalar;
    bool undefined = false;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto def = detail::all_definitions()[k];
      if (!s.uses(def))
        continue;
      const auto v = velocity(d, def);
      if (!v) {
        undefined = true;
        continue;
      }
      row[1 + k] = v->v_phi;
      row[4 + k] = v->v_z;
    }
    row[8] = undefined ? 1.0 : 0.0;
    t.rows.push_back(std::move(row));
  }
  return {exit_ok, t.render(format), {}};
}

/// Circulation, mean enclosed vorticity and local curl (at phi = 0) per radius.
inline CommandResult cmd_vorticity(const Scenario &s, OutputFormat format) {
  const BeamParameters beam = s.beam_parameters();
  const SpinorField field = make_field(s.solution, beam);
  detail::Table t;
  t.columns = {"rho"};
  for (auto def : s.definitions)
    for (const char *col : {"circulation_", "flux_density_", "curl_fd_"})
      t.columns.push_back(col + to_string(def));
  t.columns.push_back("undefined_flag");
  for (double rho : detail::scenario_radii(s, beam)) {
    std::vector<std::optional<double>> row{rho};
    bool undefined = false;
    for (auto def : s.definitions) {
      try {
        const auto c = circulation(azimuthal_sampler(field, def), rho);
        row.push_back(c.circulation);
        row.push_back(c.flux_density);
      } catch (const VortexError &) {
        undefined = true;
        row.push_back(std::nullopt);
        row.push_back(std::nullopt);
      }
      std::optional<double> curl;
      if (rho >= 4.0 * s.curl_step) {
        try {
          curl = curl_fd(planar_sampler(field, def), rho, 0.0, s.curl_step);
        } catch (const VortexError &) {
          undefined = true;
        }
      }
      row.push_back(curl);
    }
    row.push_back(undefined ? 1.0 : 0.0);
    t.rows.push_back(std::move(row));
  }
  return {exit_ok, t.render(format), {}};
}

// ---------------------------------------------------------------------------
// validate

/// Thresholds shared with the acceptance suite.
namespace thresholds {
inline constexpr double dirac_residual = 1e-12;
inline constexpr double current_conservation = 1e-8;
inline constexpr double causality = 1e-12;
inline constexpr double belinfante_midpoint = 1e-12;
inline constexpr double canonical_vz = 1e-13;
inline constexpr double weyl_zero = 1e-13;
inline constexpr double plane_wave = 1e-13;
} // namespace thresholds

struct ValidateOptions {
  unsigned long long seed = 20231;
  /// scale one component of the scenario's spinor (negative control)
  std::optional<std::pair<int, double>> corrupt_component;
};

struct CheckResult {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool informational = false;

  bool pass() const { return informational || value <= threshold; }
};

inline std::vector<SpacetimePoint> random_points(std::mt19937_64 &rng, int n, double rho_lo = 1e-3,
                                                 double rho_hi = 50.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SpacetimePoint> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double rho = rho_lo * std::pow(rho_hi / rho_lo, unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const double z = -10.0 + 20.0 * unit(rng);
    const double t = -10.0 + 20.0 * unit(rng);
    pts.push_back(SpacetimePoint::make(rho, phi, z, t));
  }
  return pts;
}

inline std::vector<CheckResult> run_validation_checks(const Scenario &s, const ValidateOptions &opt) {
  const BeamParameters beam = s.beam_parameters();
  SpinorField field = make_field(s.solution, beam);
  if (opt.corrupt_component)
    field = field.scaled_component(opt.corrupt_component->first, opt.corrupt_component->second);
  const bool approximate = s.solution.family == Family::BarnettSmallRho;

  std::mt19937_64 rng(opt.seed);
  const auto points = random_points(rng, s.validation_points);

  double residual = 0, divergence = 0, causality = 0, midpoint = 0, vz = 0;
  const std::size_t n_div = std::min<std::size_t>(points.size(), 200);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto &p = points[i];
    const DensitySet d = densities(field, p);
    if (!(d.scalar > 0.0))
      continue;
    residual = std::max(residual, dirac_residual(field, p));
    if (i < n_div)
      divergence = std::max(divergence, current_divergence_fd(field, p));
    const auto vd = velocity(d, VelocityDefinition::DiracCurrent);
    const auto vc = velocity(d, VelocityDefinition::Canonical);
    causality = std::max(causality, vd->speed() - 1.0);
    vz = std::max(vz, std::abs(vc->v_z - beam.k_z() / beam.energy()));
    const double scale = beam.energy() * d.scalar;
    const double e = beam.energy();
    midpoint = std::max({midpoint,
                         std::abs(d.p_belinfante.rho - 0.5 * (d.p_canonical.rho + e * d.current.rho)) / scale,
                         std::abs(d.p_belinfante.phi - 0.5 * (d.p_canonical.phi + e * d.current.phi)) / scale,
                         std::abs(d.p_belinfante.z - 0.5 * (d.p_canonical.z + e * d.current.z)) / scale});
  }

  // BB field with b fixed by the Weyl-zero condition; a from the scenario
  const cplx a = s.solution.a == cplx{} ? cplx{1.0, 0.0} : s.solution.a;
  const int l = std::max(0, s.solution.orbital_index());
  const SpinorField bb = bb_field(beam, HalfInteger{2 * l + 1}, a, bb_weyl_zero_b(beam, a), 1.0);
  double weyl = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(points.size(), 200); ++i) {
    const Bispinor w = to_weyl(bb.value(points[i]));
    if (w.norm2() > 0.0)
      weyl = std::max(weyl, std::abs(w[1]) / std::sqrt(w.norm2()));
  }

  const BeamParameters plane(0.0, beam.k_z() == 0.0 ? 1.0 : beam.k_z(), beam.mass());
  const SpinorField pw = helicity_field(plane, HalfInteger{1}, HalfInteger{1}, 1.0);
  const double target = plane.k_z() / plane.energy();
  double degeneracy = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(points.size(), 50); ++i) {
    const DensitySet d = densities(pw, points[i]);
    for (auto def : detail::all_definitions()) {
      const auto v = velocity(d, def);
      degeneracy = std::max({degeneracy, std::abs(v->v_rho), std::abs(v->v_phi), std::abs(v->v_z - target)});
    }
  }

  return {{"dirac_residual", residual, thresholds::dirac_residual, approximate},
          {"current_conservation", divergence, thresholds::current_conservation, approximate},
          {"causality", std::max(0.0, causality), thresholds::causality, false},
          {"belinfante_midpoint", midpoint, thresholds::belinfante_midpoint, false},
          {"canonical_vz", vz, thresholds::canonical_vz, false},
          {"weyl_zero_component", weyl, thresholds::weyl_zero, false},
          {"plane_wave_degeneracy", degeneracy, thresholds::plane_wave, false}};
}

inline CommandResult cmd_validate(const Scenario &s, const ValidateOptions &opt = {}) {
  const auto checks = run_validation_checks(s, opt);
  nlohmann::json j;
  j["scenario"] = s.name;
  j["family"] = to_string(s.solution.family);
  j["seed"] = opt.seed;
  j["points"] = s.validation_points;
  j["checks"] = nlohmann::json::array();
  std::vector<std::string> failed;
  for (const auto &c : checks) {
    if (!c.pass())
      failed.push_back(c.name);
    j["checks"].push_back({{"name", c.name},
                           {"value", detail::round12(c.value)},
                           {"threshold", c.threshold},
                           {"informational", c.informational},
                           {"pass", c.pass()}});
  }
  j["pass"] = failed.empty();
  return {failed.empty() ? exit_ok : exit_validation_failure, j.dump(2) + "\n", failed};
}

// ---------------------------------------------------------------------------
// classify

struct NamedWindow {
  std::string name;
  SlopeWindow window;
};

/// Fixed-multiple slope windows around the characteristic radii.
inline std::vector<NamedWindow> classification_windows(const Scenario &s, const BeamParameters &beam) {
  const int ell = s.solution.vortex_index();
  const CharacteristicRadii r = characteristic_radii(beam, ell);
  std::vector<NamedWindow> w{{"inner", {0.02 * r.r_bucket, 0.1 * r.r_bucket}},
                             {"range", {2.0 * r.r_bucket, 0.5 * r.r_bessel}}};
  if (s.solution.family == Family::Barnett || s.solution.family == Family::BarnettSmallRho) {
    const double rc = barnett_crossing_radius(beam, ell, std::norm(s.solution.a), std::norm(s.solution.b));
    if (rc > 0.0) {
      w.push_back({"compton_inner", {0.02 * rc, 0.1 * rc}});
      w.push_back({"compton_outer", {2.0 * rc, 8.0 * rc}});
    }
  }
  return w;
}

inline CommandResult cmd_classify(const Scenario &s) {
  const BeamParameters beam = s.beam_parameters();
  const int ell = s.solution.vortex_index();
  if (beam.kappa() == 0.0 || ell < 1)
    throw ConfigError("classification needs kappa > 0 and vortex index >= 1");
  const SpinorField field = make_field(s.solution, beam);
  const CharacteristicRadii radii = characteristic_radii(beam, ell);
  const double rc = barnett_crossing_radius(beam, ell, std::norm(s.solution.a), std::norm(s.solution.b));
  const auto windows = classification_windows(s, beam);

  double lo = windows.front().window.rho_min, hi = windows.front().window.rho_max;
  for (const auto &w : windows) {
    lo = std::min(lo, w.window.rho_min);
    hi = std::max(hi, w.window.rho_max);
  }
  const int ppd = std::max(24, s.radii.points_per_decade);
  std::vector<double> grid = log_grid(lo, hi, ppd);
  for (const auto &w : windows) // make window edges exact samples
    for (double e : {w.window.rho_min, w.window.rho_max})
      grid.push_back(e);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (auto &r : grid)
    r = jitter_off_bessel_zero(r, beam, s.solution.orbital_index());

  nlohmann::json j;
  j["scenario"] = s.name;
  j["family"] = to_string(s.solution.family);
  j["orbital_index"] = s.solution.orbital_index();
  j["vortex_index"] = ell;
  j["energy"] = detail::round12(beam.energy());
  j["energy_kev"] = detail::round12(beam.energy() * units::electron_mass_kev);
  j["theta_k"] = detail::round12(beam.theta());
  const auto pm = [](double r) { return detail::round12(r * units::reduced_compton_pm); };
  j["analytic_radii"] = {{"r_bucket", detail::round12(radii.r_bucket)},
                         {"r_bessel", detail::round12(radii.r_bessel)},
                         {"r_compton_scale", detail::round12(radii.r_compton_scale)},
                         {"r_crossing", detail::round12(rc)}};
  j["analytic_radii_pm"] = {{"r_bucket", pm(radii.r_bucket)},
                            {"r_bessel", pm(radii.r_bessel)},
                            {"r_compton_scale", pm(radii.r_compton_scale)},
                            {"r_crossing", pm(rc)}};

  for (auto def : s.definitions) {
    const auto profile = mean_azimuthal_profile(field, def, grid, 64);
    nlohmann::json table = nlohmann::json::array();
    for (const auto &w : windows) {
      nlohmann::json row = {{"window", w.name},
                            {"rho_min", detail::round12(w.window.rho_min)},
                            {"rho_max", detail::round12(w.window.rho_max)}};
      try {
        const RegimeReport rep = fit_window(profile, w.window);
        row["slope"] = detail::round12(rep.fitted_slope);
        row["r2"] = detail::round12(rep.r2);
        row["regime"] = to_string(rep.regime);
      } catch (const VortexError &e) {
        row["error"] = e.what();
      }
      table.push_back(row);
    }
    j["regimes"][to_string(def)] = table;

    VerdictOptions vopt;
    vopt.scan_max = 0.5 * radii.r_bessel;
    const VerdictRecord v = vortex_line_verdict(field, def, vopt);
    nlohmann::json vj = {{"verdict", to_string(v.verdict)},
                         {"power", detail::round12(v.power)},
                         {"limiting_circulation", detail::round12(v.limiting_circulation)},
                         {"relative_spread", detail::round12(v.relative_spread)}};
    if (v.whirlpool_extent)
      vj["whirlpool_extent"] = {detail::round12(v.whirlpool_extent->first),
                                detail::round12(v.whirlpool_extent->second)};
    else
      vj["whirlpool_extent"] = nullptr;
    j["verdicts"][to_string(def)] = vj;
  }

  try {
    j["transition_radius"] = detail::round12(transition_radius_measured(s.solution, beam));
  } catch (const NoCrossover &) {
    j["transition_radius"] = nullptr;
  }
  return {exit_ok, j.dump(2) + "\n", {}};
}

} // namespace twisted
