#pragma once

// Workflow graph: component instances wired output-to-input, evaluated in
// topological order with per-node output caching.

#include "vpg/data_tree.hpp"
#include "vpg/registry.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace vpg {

struct Position {
    double x = 0, y = 0;
    friend bool operator==(const Position&, const Position&) = default;
};

struct PortRef {
    std::string node;
    int port = 0;
    friend bool operator==(const PortRef&, const PortRef&) = default;
};

struct Wire {
    PortRef from;  // output port
    PortRef to;    // input port
    friend bool operator==(const Wire&, const Wire&) = default;
};

using State = std::map<std::string, double, std::less<>>;

struct Node {
    std::string id;
    const ComponentDescriptor* descriptor = nullptr;
    Position position;
    State state;
    std::map<int, Literal> literals;
    bool preview = false;
    std::optional<std::string> label;

    const std::string& type_id() const { return descriptor->type_id; }
};

// One output tree per output port.
using NodeOutputs = std::vector<DataTree>;

struct PreviewMesh {
    std::string node;
    int output = 0;
    Path path;
    int item = 0;
    geo::Mesh mesh;
};

// Rounds half away from zero on the shortest decimal representation of v,
// so 0.7495 (stored as 0.74950000000000005...) still reads as 0.7495.
double round_decimal(double v, int decimals);

class WorkflowGraph {
public:
    explicit WorkflowGraph(std::shared_ptr<const Registry> registry = builtin_registry());

    const Registry& registry() const { return *registry_; }
    std::shared_ptr<const Registry> registry_ptr() const { return registry_; }

    // ---- mutation. Every mutating call either succeeds or leaves the graph
    // unchanged.

    // Missing state fields take schema defaults; slider state is normalized.
    // Errors: UnknownComponent, DuplicateNodeId, NotStateful, UnknownField,
    // UnknownPort, BadLiteral, InvalidArgument.
    const Node& add_node(std::string_view type_id, std::string node_id, std::optional<Position> position = {},
                         const State& state = {}, const std::map<int, Literal>& literals = {});

    // Errors, checked in this order: UnknownNode, SliderMisuse, UnknownPort,
    // KindMismatch, InputOccupied, CycleCreated. Clears a literal on the
    // target input.
    void connect(const PortRef& from, const PortRef& to);

    // Errors: UnknownNode, UnknownPort, InputOccupied (input is wired), BadLiteral.
    void set_literal(std::string_view node, int input, const Literal& value);

    // Errors: UnknownNode, NotStateful, UnknownField, InvalidArgument.
    // Returns the stored value after clamping and rounding.
    double set_param(std::string_view node, std::string_view field, double value);

    void set_preview(std::string_view node, bool on);
    void set_position(std::string_view node, Position p);
    void set_label(std::string_view node, std::optional<std::string> label);

    // x = 240 * longest-path depth; equal depths stacked at y pitch 120 in
    // insertion order.
    void auto_layout();

    // ---- evaluation

    // Drops the cache and evaluates every node.
    void evaluate();
    // Evaluates only nodes whose cache was invalidated since the last run.
    void reevaluate_dirty();

    bool evaluated() const;
    // Throws NotEvaluated when the node has no cached result.
    const NodeOutputs& outputs(std::string_view node) const;
    std::map<std::string, NodeOutputs> results() const;

    std::size_t last_recomputed() const { return last_recomputed_.size(); }
    const std::vector<std::string>& last_recomputed_nodes() const { return last_recomputed_; }

    // Tessellated geometry of every previewed node, in node order.
    // Throws NotEvaluated if a previewed node has no cached result.
    std::vector<PreviewMesh> preview_geometry(double chord_tolerance) const;

    // ---- inspection

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Wire>& wires() const { return wires_; }
    const Node* find(std::string_view node) const;
    const Node& node(std::string_view node) const;  // throws UnknownNode
    // Wire feeding the input, if any.
    const Wire* wire_into(std::string_view node, int input) const;
    std::vector<std::string> topological_order() const;

private:
    std::size_t index_of(std::string_view node) const;
    void invalidate_from(std::size_t index);
    bool reaches(std::size_t from, std::size_t to) const;
    const std::vector<std::size_t>& order() const;
    void run(bool full);
    NodeOutputs solve_node(std::size_t index) const;
    std::string upstream_chain(std::size_t index) const;

    std::shared_ptr<const Registry> registry_;
    std::vector<Node> nodes_;
    std::vector<Wire> wires_;
    std::unordered_map<std::string, std::size_t> index_;
    // per node: wire index feeding each input (-1 if none)
    std::vector<std::vector<int>> incoming_;
    // per node: downstream node indices (one entry per wire)
    std::vector<std::vector<std::size_t>> outgoing_;
    std::vector<std::optional<NodeOutputs>> cache_;
    mutable std::optional<std::vector<std::size_t>> order_;
    std::vector<std::string> last_recomputed_;
};

} // namespace vpg
