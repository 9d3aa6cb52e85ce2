#pragma once

#include "vpg/registry.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

namespace vpg::testing {

// Independent term-frequency oracle: split each field on non-alphanumerics,
// lowercase, and count whole-word matches of every query word.
inline double oracle_score(const ComponentDescriptor& d, const std::vector<std::string>& query) {
    auto words = [](const std::string& s) {
        std::vector<std::string> out;
        std::string w;
        for (char c : s + " ") {
            if (std::isalnum(static_cast<unsigned char>(c))) {
                w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            } else if (!w.empty()) {
                out.push_back(w);
                w.clear();
            }
        }
        return out;
    };
    auto count = [&](const std::string& field, const std::string& q) {
        const auto ws = words(field);
        return static_cast<double>(std::count(ws.begin(), ws.end(), q));
    };
    double s = 0;
    for (const auto& q : query) {
        s += 3 * (count(d.name, q) + count(d.nickname, q));
        s += count(d.category, q) + count(d.description, q);
        for (const auto& p : d.inputs) {
            s += count(p.name, q);
        }
        for (const auto& p : d.outputs) {
            s += count(p.name, q);
        }
    }
    return s;
}

inline std::vector<std::string> oracle_ranking(const Registry& reg, const std::vector<std::string>& query) {
    std::vector<std::pair<double, std::string>> scored;
    for (const auto& d : reg.all()) {
        scored.emplace_back(-oracle_score(d, query), d.type_id);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::string> ids;
    for (auto& [s, id] : scored) {
        ids.push_back(id);
    }
    return ids;
}

} // namespace vpg::testing
