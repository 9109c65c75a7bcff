#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "fpsz/density.hpp"
#include "fpsz/freemoments.hpp"
#include "fpsz/laws.hpp"

namespace fpsz {

// JSON ingestion. Every function throws ConfigError (or a subclass) on
// malformed input, unknown keys, or laws that fail validation.
//
// Family:   {"backend": "rational"|"float", "n": 2, "variables": [<variable>, ...]}
//           A single variable together with "n" is replicated n times.
// Variable: {"kind": "selfadjoint"|"unitary", "law": <name>, "params": {...},
//            "moments": [...], "tail": "zero"|"unsupported"}
// Density:  {"density": "arcsine"|"uniform"|"semicircle"|"jacobi"|"zero", "params": {...}}
//
// Scalar parameters: integers and decimal literals are exact; strings are
// parsed as "p/q" or decimals; {"float": x} is float-only.

Backend parse_backend(const std::string& text);
Param parse_param(const nlohmann::json& j);
MarginalLaw parse_law(const nlohmann::json& variable);
FreeFamily parse_family(const nlohmann::json& j, std::optional<Backend> override_backend = std::nullopt);
DensitySpec parse_density(const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);

// A law file holds either one variable object or a family whose first
// variable is used.
MarginalLaw load_law(const std::filesystem::path& path);
FreeFamily load_family(const std::filesystem::path& path, std::optional<Backend> override_backend = std::nullopt);
DensitySpec load_density(const std::filesystem::path& path);

}  // namespace fpsz
