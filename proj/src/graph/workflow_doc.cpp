#include "vpg/workflow_doc.hpp"

#include "vpg/error.hpp"
#include "vpg/json_literal.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace vpg {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
    throw Error(Errc::MalformedDocument, "at " + where + ": " + what, where);
}

const json& member(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        malformed(where, std::string("missing '") + key + "'");
    }
    return obj.at(key);
}

std::pair<std::string, int> endpoint(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_number_integer()) {
        malformed(where, "expected [node_id, port_index]");
    }
    return {j[0].get<std::string>(), j[1].get<int>()};
}

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace

std::string save_workflow_json(const WorkflowGraph& graph) {
    std::vector<const Node*> nodes;
    for (const auto& n : graph.nodes()) {
        nodes.push_back(&n);
    }
    std::sort(nodes.begin(), nodes.end(), [](const Node* a, const Node* b) { return a->id < b->id; });

    json doc;
    doc["format_version"] = kWorkflowFormatVersion;
    doc["nodes"] = json::array();
    for (const Node* n : nodes) {
        json j;
        j["id"] = n->id;
        j["type"] = n->type_id();
        j["position"] = {n->position.x, n->position.y};
        j["state"] = json::object();
        for (const auto& [k, v] : n->state) {
            j["state"][k] = v;
        }
        j["literals"] = json::object();
        for (const auto& [index, lit] : n->literals) {
            j["literals"][std::to_string(index)] = literal_to_json(lit);
        }
        j["preview"] = n->preview;
        if (n->label) {
            j["label"] = *n->label;
        }
        doc["nodes"].push_back(std::move(j));
    }
    std::vector<Wire> wires = graph.wires();
    std::sort(wires.begin(), wires.end(), [](const Wire& a, const Wire& b) {
        return std::tie(a.to.node, a.to.port, a.from.node, a.from.port) <
               std::tie(b.to.node, b.to.port, b.from.node, b.from.port);
    });
    doc["wires"] = json::array();
    for (const auto& w : wires) {
        doc["wires"].push_back({{"from", {w.from.node, w.from.port}}, {"to", {w.to.node, w.to.port}}});
    }
    return doc.dump(2) + "\n";
}

WorkflowGraph load_workflow_json(std::string_view text, std::shared_ptr<const Registry> registry) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::MalformedDocument, line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": invalid JSON",
                    line_column(text, e.byte == 0 ? 0 : e.byte - 1));
    }
    if (!doc.is_object()) {
        malformed("/", "document must be an object");
    }
    const json& version = member(doc, "format_version", "/");
    if (!version.is_number_integer()) {
        malformed("/format_version", "must be an integer");
    }
    if (version.get<long long>() != kWorkflowFormatVersion) {
        throw Error(Errc::UnsupportedVersion,
                    "workflow format_version " + version.dump() + " is not supported (expected " +
                        std::to_string(kWorkflowFormatVersion) + ")",
                    version.dump());
    }
    const json& nodes = member(doc, "nodes", "/");
    const json& wires = member(doc, "wires", "/");
    if (!nodes.is_array()) {
        malformed("/nodes", "must be an array");
    }
    if (!wires.is_array()) {
        malformed("/wires", "must be an array");
    }

    WorkflowGraph graph(std::move(registry));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "/nodes/" + std::to_string(i);
        const json& n = nodes[i];
        const json& id = member(n, "id", where);
        const json& type = member(n, "type", where);
        if (!id.is_string() || !type.is_string()) {
            malformed(where, "'id' and 'type' must be strings");
        }
        const json& pos = member(n, "position", where);
        if (!pos.is_array() || pos.size() != 2 || !pos[0].is_number() || !pos[1].is_number()) {
            malformed(where + "/position", "expected [x, y]");
        }
        State state;
        if (n.contains("state")) {
            if (!n["state"].is_object()) {
                malformed(where + "/state", "must be an object");
            }
            for (const auto& [k, v] : n["state"].items()) {
                if (!v.is_number()) {
                    malformed(where + "/state/" + k, "must be a number");
                }
                state[k] = v.get<double>();
            }
        }
        std::map<int, Literal> literals;
        if (n.contains("literals")) {
            if (!n["literals"].is_object()) {
                malformed(where + "/literals", "must be an object");
            }
            for (const auto& [k, v] : n["literals"].items()) {
                int index = -1;
                try {
                    std::size_t used = 0;
                    index = std::stoi(k, &used);
                    if (used != k.size()) {
                        index = -1;
                    }
                } catch (const std::exception&) {
                }
                const auto lit = literal_from_json(v);
                if (index < 0 || !lit) {
                    malformed(where + "/literals/" + k, "expected an input index and a literal value");
                }
                literals[index] = *lit;
            }
        }
        try {
            graph.add_node(type.get<std::string>(), id.get<std::string>(),
                           Position{pos[0].get<double>(), pos[1].get<double>()}, state, literals);
        } catch (const Error& e) {
            malformed(where, e.what());
        }
        if (n.contains("preview")) {
            if (!n["preview"].is_boolean()) {
                malformed(where + "/preview", "must be a boolean");
            }
            graph.set_preview(id.get<std::string>(), n["preview"].get<bool>());
        }
        if (n.contains("label")) {
            if (!n["label"].is_string()) {
                malformed(where + "/label", "must be a string");
            }
            graph.set_label(id.get<std::string>(), n["label"].get<std::string>());
        }
    }
    for (std::size_t i = 0; i < wires.size(); ++i) {
        const std::string where = "/wires/" + std::to_string(i);
        const auto [from_node, from_port] = endpoint(member(wires[i], "from", where), where + "/from");
        const auto [to_node, to_port] = endpoint(member(wires[i], "to", where), where + "/to");
        try {
            graph.connect({from_node, from_port}, {to_node, to_port});
        } catch (const Error& e) {
            malformed(where, e.what());
        }
    }
    return graph;
}

void save_workflow(const WorkflowGraph& graph, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(Errc::InvalidArgument, "cannot write '" + path.string() + "'", path.string());
    }
    out << save_workflow_json(graph);
}

WorkflowGraph load_workflow(const std::filesystem::path& path, std::shared_ptr<const Registry> registry) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::InvalidArgument, "cannot read '" + path.string() + "'", path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_workflow_json(buf.str(), std::move(registry));
}

} // namespace vpg
