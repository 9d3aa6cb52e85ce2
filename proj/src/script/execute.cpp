#include "vpg/script.hpp"

#include <map>
#include <set>

namespace vpg::script {

namespace {

Error at_line(const Error& e, Location loc) {
    return Error(e.code(), "line " + std::to_string(loc.line) + ": " + e.what(), e.subject());
}

} // namespace

WorkflowGraph execute(const Ast& ast, std::shared_ptr<const Registry> registry) {
    WorkflowGraph graph(std::move(registry));
    bool layout_requested = false;
    bool any_explicit = false;
    std::vector<std::string> unplaced;

    for (const Statement& s : ast.statements) {
        try {
            std::visit(
                [&](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, AddStmt>) {
                        State state;
                        std::map<int, Literal> literals;
                        for (const BlockEntry& e : x.block) {
                            if (e.is_input()) {
                                literals[e.input_index()] = e.value;
                                continue;
                            }
                            const auto v = literal_as_number(e.value);
                            if (!v) {
                                throw Error(Errc::BadLiteral, "state field '" + e.key + "' needs a number", e.key);
                            }
                            state[e.key] = *v;
                        }
                        graph.add_node(x.type_id, x.node_id, x.at, state, literals);
                        if (x.at) {
                            any_explicit = true;
                        } else {
                            unplaced.push_back(x.node_id);
                        }
                    } else if constexpr (std::is_same_v<T, ConnectStmt>) {
                        graph.connect({x.from.node, x.from.port}, {x.to.node, x.to.port});
                    } else if constexpr (std::is_same_v<T, AssignStmt>) {
                        graph.set_literal(x.target.node, x.target.port, x.value);
                    } else if constexpr (std::is_same_v<T, PreviewStmt>) {
                        graph.set_preview(x.node, x.show);
                    } else {
                        layout_requested = true;
                    }
                },
                s);
        } catch (const Error& e) {
            throw at_line(e, location_of(s));
        }
    }

    if (layout_requested || !any_explicit) {
        graph.auto_layout();
    } else if (!unplaced.empty()) {
        std::map<std::string, Position> keep;
        for (const Node& n : graph.nodes()) {
            keep[n.id] = n.position;
        }
        graph.auto_layout();
        std::set<std::string_view> auto_ids(unplaced.begin(), unplaced.end());
        for (const auto& [id, p] : keep) {
            if (!auto_ids.contains(id)) {
                graph.set_position(id, p);
            }
        }
    }
    return graph;
}

} // namespace vpg::script
