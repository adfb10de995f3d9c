#pragma once

/// \file
/// \brief Scenario files: one JSON object describing a beam, a solution, a
/// radial grid and which velocity definitions to evaluate.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "twisted/bilinear.hpp"

namespace twisted {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

inline std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

inline OutputFormat format_from_string(const std::string &s) {
  if (s == "csv")
    return OutputFormat::Csv;
  if (s == "json")
    return OutputFormat::Json;
  throw ConfigError("unknown output format '" + s + "'");
}

struct BeamInputs {
  double kappa = 0;
  double k_z = 1;
  double mass = 1;
  friend bool operator==(const BeamInputs &, const BeamInputs &) = default;
};

struct RadialGrid {
  double min = 1e-3;
  double max = 10;
  int points_per_decade = 12;
  friend bool operator==(const RadialGrid &, const RadialGrid &) = default;
};

struct Scenario {
  std::string name;
  BeamInputs beam;
  SolutionSpec solution;
  RadialGrid radii;
  std::vector<VelocityDefinition> definitions{VelocityDefinition::DiracCurrent, VelocityDefinition::Canonical,
                                              VelocityDefinition::Belinfante};
  OutputFormat format = OutputFormat::Csv;
  std::string output_path;
  int validation_points = 1000;
  double curl_step = 1e-3;

  BeamParameters beam_parameters() const { return BeamParameters(beam.kappa, beam.k_z, beam.mass); }
  bool uses(VelocityDefinition d) const {
    return std::find(definitions.begin(), definitions.end(), d) != definitions.end();
  }

  friend bool operator==(const Scenario &, const Scenario &) = default;
};

namespace detail {

inline nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const nlohmann::json &j, const char *what) {
  if (j.is_number())
    return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(std::string(what) + " must be a number or a [re, im] pair");
}

template <class T> T get_or(const nlohmann::json &obj, const char *key, T fallback) {
  if (!obj.contains(key))
    return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

} // namespace detail

inline void validate(const Scenario &s) {
  try {
    (void)s.beam_parameters();
    if (has_definite_jz(s.solution.family))
      (void)s.solution.orbital_index();
    (void)make_field(s.solution, s.beam_parameters());
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  if (!(s.radii.min > 0.0) || !(s.radii.max > s.radii.min))
    throw ConfigError("radii need 0 < min < max");
  if (s.radii.points_per_decade < 12)
    throw ConfigError("radii.points_per_decade must be >= 12");
  if (s.definitions.empty())
    throw ConfigError("at least one velocity definition is required");
  if (s.validation_points < 1)
    throw ConfigError("validation.points must be >= 1");
  if (!(s.curl_step > 0.0))
    throw ConfigError("curl_step must be > 0");
}

inline Scenario scenario_from_json(const nlohmann::json &j) {
  if (!j.is_object())
    throw ConfigError("scenario must be a JSON object");
  Scenario s;
  s.name = detail::get_or<std::string>(j, "name", "");
  if (!j.contains("beam") || !j.contains("solution"))
    throw ConfigError("scenario needs 'beam' and 'solution'");
  const auto &beam = j.at("beam");
  s.beam.kappa = detail::get_or<double>(beam, "kappa", 0.0);
  s.beam.k_z = detail::get_or<double>(beam, "k_z", 1.0);
  s.beam.mass = detail::get_or<double>(beam, "mass", 1.0);

  const auto &sol = j.at("solution");
  try {
    s.solution.family = family_from_string(detail::get_or<std::string>(sol, "family", "helicity_plus"));
    s.solution.j_z = HalfInteger::from_double(detail::get_or<double>(sol, "j_z", 0.5));
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  s.solution.ell = detail::get_or<int>(sol, "ell", 1);
  if (sol.contains("lambda")) {
    const double lambda = sol.at("lambda").get<double>();
    if (s.solution.helicity().twice == 0 || std::abs(lambda - s.solution.helicity().value()) > 1e-12)
      throw ConfigError("'lambda' disagrees with the solution family");
  }
  if (sol.contains("a"))
    s.solution.a = detail::complex_from_json(sol.at("a"), "a");
  if (sol.contains("b"))
    s.solution.b = detail::complex_from_json(sol.at("b"), "b");
  if (sol.contains("a0"))
    s.solution.a0 = detail::complex_from_json(sol.at("a0"), "a0");

  if (j.contains("radii")) {
    const auto &r = j.at("radii");
    s.radii.min = detail::get_or<double>(r, "min", s.radii.min);
    s.radii.max = detail::get_or<double>(r, "max", s.radii.max);
    s.radii.points_per_decade = detail::get_or<int>(r, "points_per_decade", s.radii.points_per_decade);
  }
  if (j.contains("definitions")) {
    s.definitions.clear();
    try {
      for (const auto &d : j.at("definitions"))
        s.definitions.push_back(definition_from_string(d.get<std::string>()));
    } catch (const std::exception &e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("output")) {
    const auto &o = j.at("output");
    s.format = format_from_string(detail::get_or<std::string>(o, "format", "csv"));
    s.output_path = detail::get_or<std::string>(o, "path", "");
  }
  if (j.contains("validation"))
    s.validation_points = detail::get_or<int>(j.at("validation"), "points", s.validation_points);
  s.curl_step = detail::get_or<double>(j, "curl_step", s.curl_step);
  validate(s);
  return s;
}

inline nlohmann::json scenario_to_json(const Scenario &s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["beam"] = {{"kappa", s.beam.kappa}, {"k_z", s.beam.k_z}, {"mass", s.beam.mass}};
  nlohmann::json sol = {{"family", to_string(s.solution.family)},
                        {"j_z", s.solution.j_z.value()},
                        {"ell", s.solution.ell},
                        {"a", detail::complex_to_json(s.solution.a)},
                        {"b", detail::complex_to_json(s.solution.b)},
                        {"a0", detail::complex_to_json(s.solution.a0)}};
  j["solution"] = sol;
  j["radii"] = {{"min", s.radii.min}, {"max", s.radii.max}, {"points_per_decade", s.radii.points_per_decade}};
  j["definitions"] = nlohmann::json::array();
  for (auto d : s.definitions)
    j["definitions"].push_back(to_string(d));
  j["output"] = {{"format", to_string(s.format)}, {"path", s.output_path}};
  j["validation"] = {{"points", s.validation_points}};
  j["curl_step"] = s.curl_step;
  return j;
}

inline Scenario parse_scenario(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

inline Scenario load_scenario(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

} // namespace twisted
