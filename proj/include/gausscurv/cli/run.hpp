#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gausscurv/cli/config.hpp"

namespace gausscurv::cli {

struct RunReport {
  nlohmann::ordered_json json;  ///< {config, entries, summary}
  std::string csv;              ///< empty unless the command emits a table
  bool all_passed = false;
  bool numerical_failure = false;
};

/// Dispatches the command. Trials run on GAUSSCURV_THREADS threads (0 or
/// unset: hardware concurrency); entries are ordered by trial index.
RunReport run(const RunConfig& config);

/// Full command-line entry point: parse, run, write outputs, map errors to
/// exit codes.
int main_entry(const std::vector<std::string>& args);

}  // namespace gausscurv::cli
