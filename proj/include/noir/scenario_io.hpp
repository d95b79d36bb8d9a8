#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "noir/sim.hpp"

namespace noir {

/// Scenario documents are a single JSON object with sections graph / actions
/// / spec / mpc / run. Parse errors and schema violations throw
/// Error{InvalidScenario} naming the offending field path.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json graph_to_json(const NoirGraph& g);
NoirGraph graph_from_json(const nlohmann::json& doc, const std::string& path_prefix);

}  // namespace noir
