#pragma once

#include "bgt/report.hpp"

#include <string>
#include <vector>

namespace bgt::report {

struct CommandResult {
  std::string name;
  Json report;      // embeds the config, its hash and the manifest ids
  std::string csv;  // function_id,s,p,trivialization,value,ratio
  bool pass = true;  // false when the command's acceptance check fails
};

// Geodesic chart radius used when the config leaves radius at 0.
double default_radius(const std::string& preset);

std::vector<spaces::ManifoldFunction> make_family(const ExperimentConfig& c, const geometry::Space& m);

CommandResult cmd_norm(const ExperimentConfig& c);
CommandResult cmd_equiv(const ExperimentConfig& c);
CommandResult cmd_trace(const ExperimentConfig& c);
CommandResult cmd_admissibility(const ExperimentConfig& c);
CommandResult cmd_symmetry(const ExperimentConfig& c);

const std::vector<std::string>& command_names();
// Runs one named command ("all" is handled by the caller).
CommandResult run_command(const std::string& name, const ExperimentConfig& c);

// Writes <dir>/<name>.json and <dir>/<name>.csv, creating dir when needed.
void write_result(const std::string& dir, const CommandResult& r);

}  // namespace bgt::report
