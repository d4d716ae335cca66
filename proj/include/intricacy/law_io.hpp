#pragma once

#include <filesystem>
#include <string>

#include "intricacy/information.hpp"
#include "json.hpp"

namespace intricacy {

// SystemLaw JSON:
//   sparse: {"d": 2, "N": 3, "support": [{"config": [0,1,1], "p": 0.5}, ...]}
//   dense:  {"d": 2, "N": 3, "dense": [p_000, p_001, ...]}   (mixed-radix order)

nlohmann::json law_to_json(const SystemLaw& law);

/// Throws ValidationError on missing fields, wrong types or invalid laws.
SystemLaw law_from_json(const nlohmann::json& doc);

SystemLaw read_law_file(const std::filesystem::path& path);
void write_law_file(const SystemLaw& law, const std::filesystem::path& path);

}  // namespace intricacy
