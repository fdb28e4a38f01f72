#include "gausscurv/cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <utility>

namespace gausscurv::cli {

namespace {

struct CommandInfo {
  Command command;
  const char* name;
  const char* help;
};

const std::array<CommandInfo, 8> kCommands{{
    {Command::verify2d, "verify2d", "Two-sided bound on random convex curves"},
    {Command::bounds2d, "bounds2d", "Inverse-weight inequality on random star-shaped curves"},
    {Command::stability2d, "stability2d", "Energy gap over Hausdorff distance for shrinking families"},
    {Command::counterexample, "counterexample", "Cylinder against ball of equal Gaussian volume"},
    {Command::second_variation, "second-variation", "Measured against predicted quadratic gap"},
    {Command::threshold_scan, "threshold-scan", "Locate the sign change of the quadratic gap"},
    {Command::calibration, "calibration", "Ball maximality on convex even perturbations"},
    {Command::moments, "moments", "Radial moment recurrences"},
}};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> values;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

template <typename T>
T convert(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  if (!(in >> value) || !(in >> std::ws).eof()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

std::string command_name(Command command) {
  for (const auto& info : kCommands) {
    if (info.command == command) return info.name;
  }
  return "unknown";
}

void validate(const RunConfig& c) {
  if (c.trials < 1 || c.trials > 1'000'000) throw ConfigError("trials must be in [1, 1e6]");
  if (c.n < 2 || c.n > 8) throw ConfigError("n must be in [2, 8]");
  if (!(c.r > 0.0) || !std::isfinite(c.r) || c.r > 20.0) {
    throw ConfigError("r must be in (0, 20]");
  }
  if (c.k < 2 || c.k % 2 != 0 || c.k > 64) throw ConfigError("k must be even in [2, 64]");
  if (!(c.epsilon >= 4e-4 && c.epsilon <= 1e-2)) {
    throw ConfigError("epsilon must be in [4e-4, 1e-2]");
  }
  if (!(c.amplitude > 0.0 && c.amplitude <= 0.5)) {
    throw ConfigError("amplitude must be in (0, 0.5]");
  }
  static const std::array<const char*, 4> weights{"gaussian", "rational", "sech", "all"};
  if (std::find(weights.begin(), weights.end(), c.weight) == weights.end()) {
    throw ConfigError("weight must be one of gaussian, rational, sech, all");
  }
  if (c.tolerance && !(*c.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Weighted curvature energy experiments", "gausscurv"};
  app.require_subcommand(1);
  RunConfig config;
  std::string config_path;
  double tolerance = 0.0;

  std::map<std::string, CLI::Option*> options;
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& info : kCommands) {
    auto* sub = app.add_subcommand(info.name, info.help);
    subs.emplace_back(info.command, sub);
  }
  // Options are shared by every subcommand.
  for (auto& [command, sub] : subs) {
    sub->fallthrough();
  }
  options["seed"] = app.add_option("--seed", config.seed, "Random seed");
  options["trials"] = app.add_option("--trials", config.trials, "Number of trials");
  options["n"] = app.add_option("--n", config.n, "Dimension")->check(CLI::Range(2, 8));
  options["r"] = app.add_option("--r", config.r, "Radius");
  options["k"] = app.add_option("--k", config.k, "Harmonic degree");
  options["epsilon"] = app.add_option("--epsilon", config.epsilon, "Perturbation size");
  options["amplitude"] = app.add_option("--amplitude", config.amplitude, "Shape amplitude");
  options["weight"] = app.add_option("--weight", config.weight, "gaussian|rational|sech|all");
  options["tolerance"] = app.add_option("--tolerance", tolerance, "Tolerance override");
  options["output"] = app.add_option("--output", config.output, "Output path prefix");
  app.add_option("--config", config_path, "key = value config file");

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::ConversionError& e) {
    throw ConfigError(e.what());
  } catch (const CLI::ValidationError& e) {
    throw ConfigError(e.what());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (const auto& [command, sub] : subs) {
    if (sub->parsed()) config.command = command;
  }
  if (options["tolerance"]->count() > 0) config.tolerance = tolerance;

  if (!config_path.empty()) {
    for (const auto& [key, value] : read_config_file(config_path)) {
      const auto it = options.find(key);
      if (it == options.end()) throw ConfigError("unknown config key '" + key + "'");
      if (it->second->count() > 0) continue;
      if (key == "seed") config.seed = convert<std::uint64_t>(key, value);
      else if (key == "trials") config.trials = convert<int>(key, value);
      else if (key == "n") config.n = convert<int>(key, value);
      else if (key == "r") config.r = convert<double>(key, value);
      else if (key == "k") config.k = convert<int>(key, value);
      else if (key == "epsilon") config.epsilon = convert<double>(key, value);
      else if (key == "amplitude") config.amplitude = convert<double>(key, value);
      else if (key == "weight") config.weight = value;
      else if (key == "tolerance") config.tolerance = convert<double>(key, value);
      else if (key == "output") config.output = value;
      if (key == "n") config.n_set = true;
      if (key == "r") config.r_set = true;
      if (key == "k") config.k_set = true;
      if (key == "amplitude") config.amplitude_set = true;
    }
  }
  config.n_set = config.n_set || options["n"]->count() > 0;
  config.r_set = config.r_set || options["r"]->count() > 0;
  config.k_set = config.k_set || options["k"]->count() > 0;
  config.amplitude_set = config.amplitude_set || options["amplitude"]->count() > 0;
  validate(config);
  return config;
}

}  // namespace gausscurv::cli
