#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fibspec/spectrum.hpp"

namespace fibspec::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kIoError = 3,
  kEmptyResult = 4,
};

/// Everything a subcommand needs. Defaults < config file < flags.
struct RunConfig {
  std::filesystem::path piece_a;
  std::filesystem::path piece_b;
  double coupling = 1.0;
  std::vector<Interval> windows{{0.1, 50.0}};
  std::size_t samples = 10'000;
  unsigned max_steps = kDefaultMaxSteps;
  double radius = kDefaultRadius;
  double tol = 1e-10;
  bool log_spacing = false;
  bool fit = false;
  std::size_t fit_bins = 30;
  std::vector<double> lambdas{1.0, 0.1, 0.01, 0.001};
  std::optional<double> eps_min;
  std::optional<double> eps_max;
  std::size_t points = 12;
  double energy = 1.0;
  std::filesystem::path out = ".";
};

/// "LO:HI" -> Interval; throws ConfigError.
Interval parse_window(const std::string& text);

/// Merges a JSON config document into `cfg`. Keys mirror the long flag
/// names with '-' replaced by '_'. Throws ConfigError.
void apply_config_json(const std::string& json_text, RunConfig& cfg);

int cmd_spectrum(const RunConfig& cfg);
int cmd_invariant(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_dimension(const RunConfig& cfg);
int cmd_orbit(const RunConfig& cfg);

/// Full entry point: parses argv, dispatches, maps errors to exit codes.
int run(int argc, const char* const* argv);

}  // namespace fibspec::cli
