#include "bgt/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericalGuard = 3 };

bgt::report::ExperimentConfig load(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream is(path);
  if (!is) throw bgt::report::ConfigError("cannot open config " + path);
  bgt::report::Json j;
  try {
    j = bgt::report::Json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw bgt::report::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return bgt::report::ExperimentConfig::from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-geometry function space experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> res;
  std::optional<std::string> out;
  std::optional<double> tolerance;
  app.add_option("--config", config_path, "JSON experiment config");
  app.add_option("--seed", seed, "trivialization seed");
  app.add_option("--res", res, "grid samples per axis (power of two)");
  app.add_option("--out", out, "output directory");
  app.add_option("--tolerance", tolerance, "acceptance tolerance");

  std::vector<std::string> commands = bgt::report::command_names();
  for (const auto& name : commands) app.add_subcommand(name, "run the " + name + " experiment");
  app.add_subcommand("all", "run every experiment that applies to the config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  bgt::report::ExperimentConfig config;
  try {
    config = load(config_path);
    if (seed) config.seed = *seed;
    if (res) config.res = *res;
    if (out) config.out = *out;
    if (tolerance) config.tolerance = *tolerance;
    config.validate();
  } catch (const bgt::report::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  if (cmd != "all") commands = {cmd};
  bool pass = true;
  for (const auto& name : commands) {
    try {
      const auto r = bgt::report::run_command(name, config);
      bgt::report::write_result(config.out, r);
      std::cout << name << ": " << (r.pass ? "pass" : "FAIL") << " -> " << config.out << "/" << name
                << ".json\n";
      pass = pass && r.pass;
    } catch (const bgt::report::ConfigError& e) {
      // `all` skips commands that do not apply to the configured manifold.
      if (cmd != "all") {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
      }
      std::cout << name << ": skipped (" << e.what() << ")\n";
    } catch (const bgt::Error& e) {
      std::cerr << name << ": numerical guard: " << e.what() << "\n";
      return kNumericalGuard;
    }
  }
  return pass ? kOk : kCheckFailed;
}
