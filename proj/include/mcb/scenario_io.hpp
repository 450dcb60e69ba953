#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mcb/schedule.hpp"

namespace mcb {

/// Scenario file layout:
///   arms: {"means": [..]} or {"random": {"k", "min_gap", "seed"}}, optional "reward_model"
///   horizon, initial_players, seeds
///   algorithm: {"name": "mc"|"dmc"|"mega"|"random", "params": {t0, t1, c, d, alpha, p0, beta, no_arm}}
///   events: [{"round", "kind": "enter"|"leave", "who": "oldest"|"newest"|"random"|{"id": n}}]
///   meta (optional): {"preset", "f", "lambda"}
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Throws ConfigError on missing or malformed fields and on unknown keys.
Scenario scenario_from_json(const nlohmann::json& doc);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Applies "a.b.c=value" to `doc`. The value is parsed as JSON, falling back to a plain string.
/// Missing objects along the path are created; numeric segments index arrays.
void apply_override(nlohmann::json& doc, std::string_view assignment);

}  // namespace mcb
