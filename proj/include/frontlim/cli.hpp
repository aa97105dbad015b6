#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frontlim {

struct CommandOptions {
  std::string spec;
  std::string out = "out";
  int jobs = 0;  // 0 keeps the value from the experiment file
  std::vector<std::string> overrides;
  /// Model file taking the place of [model] file.
  std::string model;
  /// Seed point "x[,y]" for arrival.
  std::string seed;
};

/// Runs one subcommand. Returns 0 on success, 2 for configuration or validation
/// errors and 3 for numerical failures; messages go to `err`.
int run_command(const std::string& subcommand, const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Full command line entry point (argv[1] is the subcommand).
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

std::vector<std::string> subcommands();

}  // namespace frontlim
