// Command-line front end: twisted <profile|vorticity|validate|classify> --scenario FILE

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "twisted/commands.hpp"

namespace {

struct Flags {
  std::string scenario;
  std::string out;
  std::string format;
  unsigned long long seed = twisted::ValidateOptions{}.seed;
};

void add_common(CLI::App *cmd, Flags &f) {
  cmd->add_option("--scenario", f.scenario, "scenario JSON file")->required();
  cmd->add_option("--out", f.out, "output path (default: scenario output.path, else stdout)");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", f.seed, "seed for random validation points");
}

int emit(const std::string &text, const std::string &path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return twisted::exit_ok;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return twisted::exit_config_error;
  }
  out << text;
  return twisted::exit_ok;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Velocity fields and vorticity of Bessel-mode Dirac spinors"};
  app.require_subcommand(1);
  Flags flags;
  auto *profile = app.add_subcommand("profile", "radial velocity profile for each definition");
  auto *vorticity = app.add_subcommand("vorticity", "circulation and curl per radius");
  auto *validate = app.add_subcommand("validate", "exactness and consistency checks (JSON report)");
  auto *classify = app.add_subcommand("classify", "regime slopes, transition radius and vortex-line verdicts");
  for (auto *cmd : {profile, vorticity, validate, classify})
    add_common(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : twisted::exit_config_error;
  }

  try {
    const twisted::Scenario s = twisted::load_scenario(flags.scenario);
    const twisted::OutputFormat format =
        flags.format.empty() ? s.format : twisted::format_from_string(flags.format);
    const std::string out_path = flags.out.empty() ? s.output_path : flags.out;

    twisted::CommandResult result;
    if (profile->parsed()) {
      result = twisted::cmd_profile(s, format);
    } else if (vorticity->parsed()) {
      result = twisted::cmd_vorticity(s, format);
    } else if (validate->parsed()) {
      result = twisted::cmd_validate(s, {flags.seed, std::nullopt});
    } else {
      result = twisted::cmd_classify(s);
    }
    const int write_rc = emit(result.output, out_path);
    if (write_rc != twisted::exit_ok)
      return write_rc;
    if (result.exit_code == twisted::exit_validation_failure) {
      std::cerr << "validation failed:";
      for (const auto &name : result.failures)
        std::cerr << " " << name;
      std::cerr << "\n";
    }
    return result.exit_code;
  } catch (const twisted::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return twisted::exit_config_error;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return twisted::exit_config_error;
  }
}
