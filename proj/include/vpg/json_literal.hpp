#pragma once

#include "vpg/value.hpp"

#include <json.hpp>

#include <optional>

namespace vpg {

// Triples are [x, y, z]; named planes are {"plane": "xy"}. JSON integers
// map to integer literals and JSON reals to real literals.
nlohmann::json literal_to_json(const Literal& lit);
std::optional<Literal> literal_from_json(const nlohmann::json& j);

} // namespace vpg
