#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rp3p/scenario.hpp"

namespace rp3p {

/// Scenario from JSON text. Keys mirror ScenarioConfig; angles are given in
/// degrees (`*_deg`). Missing keys keep the reference defaults, unknown keys
/// and wrongly typed values throw Config.
ScenarioConfig parse_config(std::string_view json_text);

ScenarioConfig load_config(const std::filesystem::path& path);

/// Pretty-printed JSON that parse_config reads back to an equal scenario.
std::string dump_config(const ScenarioConfig& cfg);

}  // namespace rp3p
