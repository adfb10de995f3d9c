#pragma once

/// \file
/// \brief Vorticity of a planar velocity field about the z axis.
///
/// Samplers are callables (rho, phi) -> std::optional<...>; an empty optional
/// marks a point where the velocity is undefined.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twisted/bilinear.hpp"

namespace twisted {

class VortexError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when the curl stencil would reach across rho = 0.
class StencilCrossesAxis : public VortexError {
public:
  using VortexError::VortexError;
};

class InsufficientSamples : public VortexError {
public:
  using VortexError::VortexError;
};

class NoCrossover : public VortexError {
public:
  using VortexError::VortexError;
};

struct PlanarVelocity {
  double v_rho = 0;
  double v_phi = 0;
};

struct CirculationSample {
  double radius = 0;
  double circulation = 0;
  /// circulation / (pi radius^2), the mean curl over the enclosed disc
  double flux_density = 0;
  int n_points = 0;
};

/// Trapezoidal loop integral of v_phi around the circle of the given radius.
/// If a node lands on an undefined point the node set is rotated by a
/// fraction of a step and the integral retried.
template <class Sampler>
CirculationSample circulation(Sampler &&v_phi, double radius, int n_points = 256) {
  if (!(radius > 0.0))
    throw VortexError("circulation needs radius > 0");
  if (n_points < 64)
    throw VortexError("circulation needs at least 64 quadrature points");
  const double step = 2.0 * std::numbers::pi / n_points;
  for (double offset : {0.0, 0.5, 0.25, 0.75}) {
    double sum = 0.0;
    bool ok = true;
    for (int i = 0; i < n_points && ok; ++i) {
      const std::optional<double> v = v_phi(radius, (i + offset) * step);
      if (!v || !std::isfinite(*v))
        ok = false;
      else
        sum += *v;
    }
    if (ok) {
      const double circ = sum * radius * step;
      return {radius, circ, circ / (std::numbers::pi * radius * radius), n_points};
    }
  }
  throw VortexError("velocity undefined on the circle rho = " + std::to_string(radius));
}

/// z component of the curl, (1/rho) d(rho v_phi)/drho - (1/rho) d v_rho/dphi,
/// by centred differences of arc length `step`.
template <class Sampler> double curl_fd(Sampler &&velocity, double rho, double phi, double step) {
  if (!(step > 0.0))
    throw VortexError("curl step must be > 0");
  if (rho < 4.0 * step)
    throw StencilCrossesAxis("curl stencil at rho = " + std::to_string(rho) + " reaches the axis");
  auto at = [&](double r, double p) -> PlanarVelocity {
    const std::optional<PlanarVelocity> v = velocity(r, p);
    if (!v)
      throw VortexError("velocity undefined inside curl stencil");
    return *v;
  };
  const double dphi = step / rho;
  const double outer = (rho + step) * at(rho + step, phi).v_phi;
  const double inner = (rho - step) * at(rho - step, phi).v_phi;
  const double dv_rho = at(rho, phi + dphi).v_rho - at(rho, phi - dphi).v_rho;
  return (outer - inner) / (2.0 * step * rho) - dv_rho / (2.0 * dphi * rho);
}

// ---------------------------------------------------------------------------
// Samplers over spinor fields

inline auto azimuthal_sampler(const SpinorField &field, VelocityDefinition def) {
  return [&field, def](double rho, double phi) -> std::optional<double> {
    const auto v = velocity(field, SpacetimePoint::make(rho, phi), def);
    if (!v)
      return std::nullopt;
    return v->v_phi;
  };
}

inline auto planar_sampler(const SpinorField &field, VelocityDefinition def) {
  return [&field, def](double rho, double phi) -> std::optional<PlanarVelocity> {
    const auto v = velocity(field, SpacetimePoint::make(rho, phi), def);
    if (!v)
      return std::nullopt;
    return PlanarVelocity{v->v_rho, v->v_phi};
  };
}

// ---------------------------------------------------------------------------
// Radial profiles and regime classification

/// Log-spaced radii from lo to hi inclusive, at least points_per_decade per decade.
inline std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
  if (!(lo > 0.0) || !(hi > lo))
    throw VortexError("log grid needs 0 < lo < hi");
  if (points_per_decade < 1)
    throw VortexError("points per decade must be positive");
  const double decades = std::log10(hi / lo);
  const int intervals = std::max(1, static_cast<int>(std::ceil(decades * points_per_decade - 1e-9)));
  std::vector<double> r(intervals + 1);
  for (int i = 0; i <= intervals; ++i)
    r[i] = lo * std::pow(10.0, decades * i / intervals);
  r.back() = hi;
  return r;
}

/// Moves rho off a zero of J_ell(kappa rho) by 1e-6 relative.
inline double jitter_off_bessel_zero(double rho, const BeamParameters &beam, int ell) {
  if (rho > 0.0 && std::abs(bessel_j(ell, beam.kappa() * rho)) < 1e-12)
    return rho * (1.0 + 1e-6);
  return rho;
}

struct ProfileSample {
  double rho = 0;
  double value = 0;
};

struct SlopeWindow {
  /// 0 means "from the smallest sample"
  double rho_min = 0;
  double rho_max = 0;
};

enum class Regime { Bucket, Whirlpool, Transitional };

inline std::string to_string(Regime r) {
  switch (r) {
  case Regime::Bucket:
    return "bucket";
  case Regime::Whirlpool:
    return "whirlpool";
  case Regime::Transitional:
    return "transitional";
  }
  return "unknown";
}

struct RegimeReport {
  SlopeWindow window;
  double fitted_slope = 0;
  Regime regime = Regime::Transitional;
  double r2 = 0;
  int n_samples = 0;
};

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

inline LineFit fit_line(const std::vector<double> &x, const std::vector<double> &y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2)
    throw InsufficientSamples("line fit needs at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double ss_res = syy - f.slope * sxy;
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

inline constexpr double regime_slope_tolerance = 0.15;
inline constexpr double regime_min_r2 = 0.99;

inline Regime regime_for(double slope, double r2) {
  if (r2 >= regime_min_r2 && std::abs(slope - 1.0) <= regime_slope_tolerance)
    return Regime::Bucket;
  if (r2 >= regime_min_r2 && std::abs(slope + 1.0) <= regime_slope_tolerance)
    return Regime::Whirlpool;
  return Regime::Transitional;
}

/// Log-log least-squares slope of |value| against rho within one window.
inline RegimeReport fit_window(const std::vector<ProfileSample> &profile, SlopeWindow w) {
  std::vector<double> x, y;
  double lo = 0, hi = 0;
  for (const auto &s : profile) {
    const bool inside = (w.rho_min <= 0.0 || s.rho >= w.rho_min * (1 - 1e-12)) && s.rho <= w.rho_max * (1 + 1e-12);
    if (!inside || !(std::abs(s.value) > 0.0))
      continue;
    if (x.empty())
      lo = s.rho;
    hi = s.rho;
    x.push_back(std::log(s.rho));
    y.push_back(std::log(std::abs(s.value)));
  }
  if (x.size() < 3)
    throw InsufficientSamples("fewer than three usable samples in window");
  const double decades = std::log10(hi / lo);
  if (static_cast<double>(x.size() - 1) + 1e-9 < 12.0 * decades)
    throw InsufficientSamples("profile has fewer than 12 samples per decade in window");
  const LineFit f = fit_line(x, y);
  return {w, f.slope, regime_for(f.slope, f.r2), f.r2, static_cast<int>(x.size())};
}

inline std::vector<RegimeReport> classify_profile(const std::vector<ProfileSample> &profile,
                                                  const std::vector<SlopeWindow> &windows) {
  std::vector<RegimeReport> out;
  out.reserve(windows.size());
  for (const auto &w : windows)
    out.push_back(fit_window(profile, w));
  return out;
}

/// d log|v| / d log rho at each interior sample (centred), one-sided at the ends.
inline std::vector<double> local_slopes(const std::vector<ProfileSample> &profile) {
  const std::size_t n = profile.size();
  if (n < 2)
    throw InsufficientSamples("local slopes need at least two samples");
  std::vector<double> out(n);
  auto lr = [&](std::size_t i) { return std::log(profile[i].rho); };
  auto lv = [&](std::size_t i) { return std::log(std::abs(profile[i].value)); };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? n - 1 : i + 1;
    out[i] = (lv(b) - lv(a)) / (lr(b) - lr(a));
  }
  return out;
}

/// Radii where the local slope changes sign, interpolated linearly in log rho.
/// Exactly-zero slopes are skipped so a sample on the peak counts once.
inline std::vector<double> slope_sign_changes(const std::vector<ProfileSample> &profile) {
  const auto slopes = local_slopes(profile);
  std::vector<double> out;
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    if (slopes[i] == 0.0)
      continue;
    if (prev && (slopes[*prev] > 0) != (slopes[i] > 0)) {
      const double la = std::log(profile[*prev].rho);
      const double lb = std::log(profile[i].rho);
      const double f = slopes[*prev] / (slopes[*prev] - slopes[i]);
      out.push_back(std::exp(la + f * (lb - la)));
    }
    prev = i;
  }
  return out;
}

/// Azimuthal mean of v_phi, circulation / (2 pi rho), on the given radii.
inline std::vector<ProfileSample> mean_azimuthal_profile(const SpinorField &field, VelocityDefinition def,
                                                         const std::vector<double> &radii, int n_points = 256) {
  std::vector<ProfileSample> out;
  out.reserve(radii.size());
  auto sampler = azimuthal_sampler(field, def);
  for (double r : radii) {
    const CirculationSample c = circulation(sampler, r, n_points);
    out.push_back({r, c.circulation / (2.0 * std::numbers::pi * r)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vortex-line verdict

enum class Verdict { Singular, Regular, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Singular:
    return "singular";
  case Verdict::Regular:
    return "regular";
  case Verdict::Inconclusive:
    return "inconclusive";
  }
  return "unknown";
}

struct VerdictOptions {
  /// smallest radius, in 1/m
  double rho_floor = 1e-4;
  int decades = 3;
  int points_per_decade = 12;
  int n_points = 256;
  /// upper end of the whirlpool-extent scan; 0 disables the scan
  double scan_max = 0;
};

struct VerdictRecord {
  Verdict verdict = Verdict::Inconclusive;
  VelocityDefinition definition = VelocityDefinition::DiracCurrent;
  /// fitted p in circulation ~ rho^p over the extrapolation decades
  double power = 0;
  /// circulation at the smallest radius
  double limiting_circulation = 0;
  /// (max - min) / |mean| of the circulation over the extrapolation decades
  double relative_spread = 0;
  /// radial band where the local slope of mean v_phi is -1 within tolerance
  std::optional<std::pair<double, double>> whirlpool_extent;
  std::vector<CirculationSample> samples;
};

namespace detail {

inline Verdict classify_power(double p) {
  if (std::abs(p) <= 0.05)
    return Verdict::Singular;
  if (p >= 1.9 && p <= 2.1)
    return Verdict::Regular;
  return Verdict::Inconclusive;
}

inline double fitted_power(const std::vector<CirculationSample> &s, std::size_t from, std::size_t to) {
  std::vector<double> x, y;
  for (std::size_t i = from; i < to; ++i) {
    x.push_back(std::log(s[i].radius));
    y.push_back(std::log(std::abs(s[i].circulation)));
  }
  return fit_line(x, y).slope;
}

} // namespace detail

/// Extrapolates the circulation towards the axis: a non-zero constant limit
/// means a singular vortex line, circulation ~ rho^2 means a regular one.
/// The two halves of the range are also fitted separately and must agree.
inline VerdictRecord vortex_line_verdict(const SpinorField &field, VelocityDefinition def,
                                         const VerdictOptions &opt = {}) {
  VerdictRecord rec;
  rec.definition = def;
  auto sampler = azimuthal_sampler(field, def);
  const auto radii = log_grid(opt.rho_floor, opt.rho_floor * std::pow(10.0, opt.decades), opt.points_per_decade);
  for (double r : radii)
    rec.samples.push_back(circulation(sampler, r, opt.n_points));
  if (std::any_of(rec.samples.begin(), rec.samples.end(), [](const auto &s) { return s.circulation == 0.0; })) {
    rec.verdict = Verdict::Inconclusive;
    return rec;
  }
  const std::size_t n = rec.samples.size();
  rec.power = detail::fitted_power(rec.samples, 0, n);
  const double p_inner = detail::fitted_power(rec.samples, 0, n / 2 + 1);
  const double p_outer = detail::fitted_power(rec.samples, n / 2, n);
  rec.limiting_circulation = rec.samples.front().circulation;
  double lo = rec.samples.front().circulation, hi = lo, mean = 0;
  for (const auto &s : rec.samples) {
    lo = std::min(lo, s.circulation);
    hi = std::max(hi, s.circulation);
    mean += s.circulation / static_cast<double>(n);
  }
  rec.relative_spread = (hi - lo) / std::abs(mean);
  const Verdict all = detail::classify_power(rec.power);
  const bool halves_agree =
      detail::classify_power(p_inner) == all && detail::classify_power(p_outer) == all;
  rec.verdict = halves_agree ? all : Verdict::Inconclusive;

  if (opt.scan_max > opt.rho_floor) {
    const auto scan = mean_azimuthal_profile(field, def, log_grid(opt.rho_floor, opt.scan_max, 24), 64);
    const auto slopes = local_slopes(scan);
    std::optional<std::pair<double, double>> best;
    std::optional<std::size_t> start;
    for (std::size_t i = 0; i <= slopes.size(); ++i) {
      const bool in = i < slopes.size() && std::abs(slopes[i] + 1.0) <= regime_slope_tolerance;
      if (in && !start)
        start = i;
      if (!in && start) {
        const std::pair<double, double> band{scan[*start].rho, scan[i - 1].rho};
        if (!best || band.second / band.first > best->second / best->first)
          best = band;
        start.reset();
      }
    }
    rec.whirlpool_extent = best;
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Transition radius

/// First radius, scanning outward from rho_lo, where the local log-log slope
/// of the azimuthal-mean v_phi turns from positive to negative.
inline double transition_radius_measured(const SpinorField &field, double rho_lo, double rho_hi,
                                         VelocityDefinition def = VelocityDefinition::DiracCurrent,
                                         int points_per_decade = 48) {
  const auto profile = mean_azimuthal_profile(field, def, log_grid(rho_lo, rho_hi, points_per_decade), 64);
  const auto slopes = local_slopes(profile);
  for (std::size_t i = 1; i < slopes.size(); ++i) {
    if (slopes[i - 1] > 0.0 && slopes[i] <= 0.0) {
      const double la = std::log(profile[i - 1].rho);
      const double lb = std::log(profile[i].rho);
      const double f = slopes[i - 1] / (slopes[i - 1] - slopes[i]);
      return std::exp(la + f * (lb - la));
    }
  }
  throw NoCrossover("no bucket-to-whirlpool crossover below rho = " + std::to_string(rho_hi));
}

/// Scans from 1e-4/m up to half the Bessel radius l/kappa.
inline double transition_radius_measured(const SolutionSpec &spec, const BeamParameters &beam) {
  if (beam.kappa() == 0.0)
    throw NoCrossover("plane wave has no vortex");
  const int ell = spec.vortex_index();
  return transition_radius_measured(make_field(spec, beam), 1e-4, 0.5 * std::max(ell, 1) / beam.kappa());
}

} // namespace twisted
