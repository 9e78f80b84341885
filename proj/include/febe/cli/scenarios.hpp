#pragma once

#include <string>

#include "febe/cli/config.hpp"
#include "febe/cli/table.hpp"

namespace febe::cli {

struct ScenarioResult {
  ResultTable table;
  std::string json;  ///< extra JSON document, empty when the scenario has none
};

/// Validates every physical input of the scenario, then runs it.
ScenarioResult run_scenario(const RunConfig& config);

}  // namespace febe::cli
