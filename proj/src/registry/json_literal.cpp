#include "vpg/json_literal.hpp"

namespace vpg {

nlohmann::json literal_to_json(const Literal& lit) {
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Triple>) {
                return nlohmann::json::array({v.x, v.y, v.z});
            } else if constexpr (std::is_same_v<T, NamedPlane>) {
                return nlohmann::json{{"plane", format_literal(v).substr(6)}};
            } else {
                return v;
            }
        },
        lit);
}

std::optional<Literal> literal_from_json(const nlohmann::json& j) {
    if (j.is_boolean()) {
        return Literal{j.get<bool>()};
    }
    if (j.is_number_integer()) {
        return Literal{j.get<std::int64_t>()};
    }
    if (j.is_number_float()) {
        return Literal{j.get<double>()};
    }
    if (j.is_string()) {
        return Literal{j.get<std::string>()};
    }
    if (j.is_array() && j.size() == 3 && std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_number(); })) {
        return Literal{Triple{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()}};
    }
    if (j.is_object() && j.size() == 1 && j.contains("plane") && j["plane"].is_string()) {
        return parse_literal("plane." + j["plane"].get<std::string>());
    }
    return std::nullopt;
}

} // namespace vpg
