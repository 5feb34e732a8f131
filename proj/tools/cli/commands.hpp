#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace nlsprop::cli {

enum ExitCode { kOk = 0, kNumericalFailure = 1, kUsage = 2 };

/// Command-line values layered on top of the configuration file.
struct CommandLine {
  std::string command;
  std::optional<std::string> problem;
  std::optional<double> sigma;
  std::optional<double> gamma;
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<double> delta0;
  std::optional<double> tol;
  std::optional<double> rmax;
  std::optional<std::string> quantity;
  std::optional<std::pair<double, double>> bracket;
  std::optional<std::pair<double, double>> scan;
  std::optional<int> points;
  std::vector<int> only;
};

/// Defaults, then the config file, then the flags. Throws ConfigError.
CampaignConfig resolve_config(const CommandLine& cl);

/// Runs one subcommand, writing its CSV files and report.json into the output
/// directory. Returns the exit code; errors are reported, not thrown.
int run_command(const CommandLine& cl);

/// "%.16e" formatting used for every number written to CSV.
std::string csv_number(double v);

}  // namespace nlsprop::cli
