#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nceig::cli {

enum class Format { table, csv, json };

// Options shared by the solve and convergence subcommands.
struct RunConfig {
  std::string kernel;
  double alpha = 1.0;
  double a = 0.0;
  double b = 0.0;
  int order = 2;
  std::optional<int> n;              // solve
  std::vector<int> schedule;         // convergence
  int track_count = 2;
  std::optional<double> margin;
  std::optional<int> ref_n;          // fine-mesh reference size
  bool richardson = false;
  Format format = Format::table;
  std::string output;                // empty: standard output
};

// Runs the command line (args excludes the program name) and returns the
// process exit status: 0 ok, 2 config, 3 kernel, 4 eigensolver, 5 tracking.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses "key = value" lines ('#' starts a comment) into "--key value..."
// tokens, skipping keys already present in `given`. Throws ConfigError on
// malformed lines or unreadable files.
std::vector<std::string> config_file_args(const std::string& path,
                                          const std::vector<std::string>& given);

}  // namespace nceig::cli
