#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "ringlab/jordan.hpp"
#include "ringlab/mc.hpp"
#include "ringlab/profiles.hpp"

namespace ringlab::json_io {

using nlohmann::json;

// Profiles: {"kind": "uniform"|"quarter_circle"|"point_mass"|"explicit", ...}
json to_json(const profiles::SingularProfile& profile);
profiles::SingularProfile profile_from_json(const json& j);

// Jordan data: {"groups": [{"theta": [re, im], "blocks": [[p, beta], ...]}, ...]}
json to_json(const jordan::JordanSpec& spec);
jordan::JordanSpec spec_from_json(const json& j);

// Basis: "identity" or a row-major array of [re, im] pairs.
json basis_to_json(const jordan::BasisSpec& basis);
jordan::BasisSpec basis_from_json(const json& j, int r);

json to_json(const mc::ExperimentConfig& config);
mc::ExperimentConfig config_from_json(const json& j);

json to_json(const mc::SummaryStats& stats);
json to_json(const mc::ScalingResult& result);

/// Structural validation against the subset of JSON Schema the shipped
/// schema files use: type, properties, required, items, enum, minimum.
/// Throws std::runtime_error naming the offending path.
void validate_schema(const json& value, const json& schema, const std::string& path = "$");

}  // namespace ringlab::json_io
