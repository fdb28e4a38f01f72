#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gausscurv::cli {

enum class Command {
  verify2d,
  bounds2d,
  stability2d,
  counterexample,
  second_variation,
  threshold_scan,
  calibration,
  moments,
};

std::string command_name(Command command);

enum ExitCode : int {
  kExitPass = 0,
  kExitFailed = 1,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitNumerical = 4,
};

/// Bad flags or an unknown command (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Out-of-range values or an unreadable config file (exit 3).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::verify2d;
  std::uint64_t seed = 0;
  int trials = 1000;
  int n = 3;
  double r = 1.0;
  int k = 2;
  double epsilon = 1e-3;
  double amplitude = 0.1;
  /// gaussian, rational, sech or all.
  std::string weight = "gaussian";
  std::optional<double> tolerance;
  /// Output path without extension; empty writes JSON to stdout.
  std::string output;
  /// Which of n, r, k were given explicitly (commands sweep otherwise).
  bool n_set = false;
  bool r_set = false;
  bool k_set = false;
  bool amplitude_set = false;
};

/// Parses argv (argv[0] is the program name). A --config file holds one
/// "key = value" per line with '#' comments; explicit flags take precedence.
/// Returns std::nullopt when help was requested and printed.
std::optional<RunConfig> parse_config(const std::vector<std::string>& args);

/// Range checks shared by the flag and file paths; throws ConfigError.
void validate(const RunConfig& config);

}  // namespace gausscurv::cli
