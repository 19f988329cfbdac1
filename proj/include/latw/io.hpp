#pragma once

// JSON encodings of states and polygons.
//
// State:   {"m": 3, "N": 4, "normalization": "SL", "a": {"1": [...], "2": [...]}}
// Polygon: {"m": 3, "N": 4, "vertices": [[...], ...], "monodromy": [[...], ...]}

#include <json.hpp>

#include "latw/invariants.hpp"
#include "latw/polygon.hpp"

namespace latw {

nlohmann::json state_to_json(const InvariantState& a);
InvariantState state_from_json(const nlohmann::json& j);

nlohmann::json polygon_to_json(const TwistedPolygon& g);
TwistedPolygon polygon_from_json(const nlohmann::json& j);

nlohmann::json table_to_json(const CoordTable& t);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace latw
