#include "vpg/graph.hpp"

#include "vpg/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace vpg {

namespace {

constexpr double kColumnPitch = 240;
constexpr double kRowPitch = 120;
constexpr int kMaxDecimals = 12;

std::string port_label(const PortDescriptor& p) { return std::to_string(p.index) + " (" + p.name + ")"; }

// Clamp, round, clamp: rounding may step just past a bound whose own
// precision exceeds `decimals`.
void normalize_slider(State& s, const std::string& node) {
    const double lo = s.at("min"), hi = s.at("max"), dec = s.at("decimals");
    if (!(lo <= hi)) {
        throw Error(Errc::InvalidArgument, "slider '" + node + "': min must not exceed max", node);
    }
    if (dec != std::floor(dec) || dec < 0 || dec > kMaxDecimals) {
        throw Error(Errc::InvalidArgument,
                    "slider '" + node + "': decimals must be a whole number in 0.." + std::to_string(kMaxDecimals), node);
    }
    double v = std::clamp(s.at("value"), lo, hi);
    v = std::clamp(round_decimal(v, static_cast<int>(dec)), lo, hi);
    s["value"] = v;
}

} // namespace

double round_decimal(double v, int decimals) {
    if (!std::isfinite(v) || decimals < 0) {
        return v;
    }
    char buf[512];
    const auto res = std::to_chars(buf, buf + sizeof buf, std::abs(v), std::chars_format::fixed);
    const std::string_view s(buf, static_cast<std::size_t>(res.ptr - buf));
    const auto dot = s.find('.');
    if (dot == std::string_view::npos || s.size() - dot - 1 <= static_cast<std::size_t>(decimals)) {
        return v;
    }
    std::string digits(s.substr(0, dot));
    digits += s.substr(dot + 1, static_cast<std::size_t>(decimals));
    if (s[dot + 1 + static_cast<std::size_t>(decimals)] >= '5') {
        std::size_t i = digits.size();
        while (i > 0 && digits[i - 1] == '9') {
            digits[--i] = '0';
        }
        if (i == 0) {
            digits.insert(digits.begin(), '1');
        } else {
            ++digits[i - 1];
        }
    }
    if (decimals > 0) {
        digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
    }
    double out = 0;
    std::from_chars(digits.data(), digits.data() + digits.size(), out);
    return v < 0 && out != 0 ? -out : out;
}

WorkflowGraph::WorkflowGraph(std::shared_ptr<const Registry> registry) : registry_(std::move(registry)) {
    if (!registry_) {
        throw Error(Errc::InvalidArgument, "graph needs a registry");
    }
}

std::size_t WorkflowGraph::index_of(std::string_view node) const {
    const auto it = index_.find(std::string(node));
    if (it == index_.end()) {
        throw Error(Errc::UnknownNode, "unknown node '" + std::string(node) + "'", std::string(node));
    }
    return it->second;
}

const Node* WorkflowGraph::find(std::string_view node) const {
    const auto it = index_.find(std::string(node));
    return it == index_.end() ? nullptr : &nodes_[it->second];
}

const Node& WorkflowGraph::node(std::string_view node) const { return nodes_[index_of(node)]; }

const Wire* WorkflowGraph::wire_into(std::string_view node, int input) const {
    const std::size_t i = index_of(node);
    if (input < 0 || static_cast<std::size_t>(input) >= incoming_[i].size() || incoming_[i][input] < 0) {
        return nullptr;
    }
    return &wires_[static_cast<std::size_t>(incoming_[i][input])];
}

const Node& WorkflowGraph::add_node(std::string_view type_id, std::string node_id, std::optional<Position> position,
                                    const State& state, const std::map<int, Literal>& literals) {
    const ComponentDescriptor* d = registry_->find(type_id);
    if (!d) {
        throw Error(Errc::UnknownComponent, "unknown component '" + std::string(type_id) + "'", std::string(type_id));
    }
    if (index_.contains(node_id)) {
        throw Error(Errc::DuplicateNodeId, "node id '" + node_id + "' is already in use", node_id);
    }
    Node n;
    n.id = node_id;
    n.descriptor = d;
    n.position = position.value_or(Position{});
    n.preview = d->default_preview;
    if (!state.empty() && !d->stateful()) {
        throw Error(Errc::NotStateful, "component '" + d->type_id + "' has no state", node_id);
    }
    for (const auto& f : d->state_schema) {
        n.state[f.name] = f.default_value;
    }
    for (const auto& [field, value] : state) {
        if (!d->state_field(field)) {
            throw Error(Errc::UnknownField, "'" + d->type_id + "' has no state field '" + field + "'", field);
        }
        n.state[field] = value;
    }
    if (d->is_slider()) {
        normalize_slider(n.state, node_id);
    }
    for (const auto& [index, lit] : literals) {
        if (index < 0 || static_cast<std::size_t>(index) >= d->inputs.size()) {
            throw Error(Errc::UnknownPort,
                        "'" + d->type_id + "' has no input " + std::to_string(index), node_id + "." + std::to_string(index));
        }
        const auto& port = d->inputs[static_cast<std::size_t>(index)];
        if (!literal_to_value(lit, port.kind)) {
            throw Error(Errc::BadLiteral,
                        "literal " + format_literal(lit) + " does not fit input " + port_label(port) + " of kind " +
                            std::string(to_string(port.kind)),
                        node_id + "." + std::to_string(index));
        }
        n.literals[index] = lit;
    }

    index_.emplace(node_id, nodes_.size());
    nodes_.push_back(std::move(n));
    incoming_.emplace_back(d->inputs.size(), -1);
    outgoing_.emplace_back();
    cache_.emplace_back();
    order_.reset();
    return nodes_.back();
}

bool WorkflowGraph::reaches(std::size_t from, std::size_t to) const {
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
        const std::size_t n = stack.back();
        stack.pop_back();
        if (n == to) {
            return true;
        }
        if (seen[n]) {
            continue;
        }
        seen[n] = 1;
        for (std::size_t m : outgoing_[n]) {
            stack.push_back(m);
        }
    }
    return false;
}

void WorkflowGraph::connect(const PortRef& from, const PortRef& to) {
    const std::size_t src = index_of(from.node);
    const std::size_t dst = index_of(to.node);
    const ComponentDescriptor& sd = *nodes_[src].descriptor;
    const ComponentDescriptor& dd = *nodes_[dst].descriptor;
    if (dd.is_slider()) {
        throw Error(Errc::SliderMisuse,
                    "'" + to.node + "' is a " + dd.name +
                        " with no inputs; a slider can only be the source of a connection (" + to.node + ".0 -> ...)",
                    to.node);
    }
    if (from.port < 0 || static_cast<std::size_t>(from.port) >= sd.outputs.size()) {
        throw Error(Errc::UnknownPort,
                    "'" + sd.type_id + "' has no output " + std::to_string(from.port) + " (it has " +
                        std::to_string(sd.outputs.size()) + ")",
                    from.node + "." + std::to_string(from.port));
    }
    if (to.port < 0 || static_cast<std::size_t>(to.port) >= dd.inputs.size()) {
        throw Error(Errc::UnknownPort,
                    "'" + dd.type_id + "' has no input " + std::to_string(to.port) + " (it has " +
                        std::to_string(dd.inputs.size()) + ")",
                    to.node + "." + std::to_string(to.port));
    }
    const auto& out = sd.outputs[static_cast<std::size_t>(from.port)];
    const auto& in = dd.inputs[static_cast<std::size_t>(to.port)];
    if (!kind_accepts(in.kind, out.kind)) {
        throw Error(Errc::KindMismatch,
                    "output " + port_label(out) + " of '" + from.node + "' is " + std::string(to_string(out.kind)) +
                        " but input " + port_label(in) + " of '" + to.node + "' expects " +
                        std::string(to_string(in.kind)),
                    to.node + "." + std::to_string(to.port));
    }
    if (incoming_[dst][static_cast<std::size_t>(to.port)] >= 0) {
        throw Error(Errc::InputOccupied, "input " + port_label(in) + " of '" + to.node + "' is already connected",
                    to.node + "." + std::to_string(to.port));
    }
    if (src == dst || reaches(dst, src)) {
        throw Error(Errc::CycleCreated, "connecting '" + from.node + "' to '" + to.node + "' would create a cycle",
                    to.node);
    }
    incoming_[dst][static_cast<std::size_t>(to.port)] = static_cast<int>(wires_.size());
    wires_.push_back({from, to});
    outgoing_[src].push_back(dst);
    nodes_[dst].literals.erase(to.port);
    order_.reset();
    invalidate_from(dst);
}

void WorkflowGraph::set_literal(std::string_view node, int input, const Literal& value) {
    const std::size_t i = index_of(node);
    const ComponentDescriptor& d = *nodes_[i].descriptor;
    const std::string subject = std::string(node) + "." + std::to_string(input);
    if (input < 0 || static_cast<std::size_t>(input) >= d.inputs.size()) {
        throw Error(Errc::UnknownPort, "'" + d.type_id + "' has no input " + std::to_string(input), subject);
    }
    const auto& port = d.inputs[static_cast<std::size_t>(input)];
    if (incoming_[i][static_cast<std::size_t>(input)] >= 0) {
        throw Error(Errc::InputOccupied, "input " + port_label(port) + " of '" + std::string(node) + "' is connected",
                    subject);
    }
    if (!literal_to_value(value, port.kind)) {
        throw Error(Errc::BadLiteral,
                    "literal " + format_literal(value) + " does not fit input " + port_label(port) + " of kind " +
                        std::string(to_string(port.kind)),
                    subject);
    }
    nodes_[i].literals[input] = value;
    invalidate_from(i);
}

double WorkflowGraph::set_param(std::string_view node, std::string_view field, double value) {
    const std::size_t i = index_of(node);
    Node& n = nodes_[i];
    const ComponentDescriptor& d = *n.descriptor;
    if (!d.stateful()) {
        throw Error(Errc::NotStateful, "'" + n.id + "' (" + d.type_id + ") has no parameters", n.id);
    }
    if (!d.state_field(field)) {
        throw Error(Errc::UnknownField, "'" + d.type_id + "' has no field '" + std::string(field) + "'",
                    std::string(field));
    }
    if (!std::isfinite(value)) {
        throw Error(Errc::InvalidArgument, "parameter value must be finite", std::string(field));
    }
    State next = n.state;
    next[std::string(field)] = value;
    if (d.is_slider()) {
        normalize_slider(next, n.id);
    }
    // Unchanged state leaves the cache intact.
    if (next != n.state) {
        n.state = std::move(next);
        invalidate_from(i);
    }
    return n.state.at(std::string(field));
}

void WorkflowGraph::set_preview(std::string_view node, bool on) { nodes_[index_of(node)].preview = on; }

void WorkflowGraph::set_position(std::string_view node, Position p) { nodes_[index_of(node)].position = p; }

void WorkflowGraph::set_label(std::string_view node, std::optional<std::string> label) {
    nodes_[index_of(node)].label = std::move(label);
}

void WorkflowGraph::invalidate_from(std::size_t index) {
    // An uncached node never has cached descendants, so the walk stops there.
    std::vector<std::size_t> stack{index};
    bool first = true;
    while (!stack.empty()) {
        const std::size_t n = stack.back();
        stack.pop_back();
        if (!cache_[n] && !first) {
            continue;
        }
        first = false;
        cache_[n].reset();
        for (std::size_t m : outgoing_[n]) {
            stack.push_back(m);
        }
    }
}

const std::vector<std::size_t>& WorkflowGraph::order() const {
    if (order_) {
        return *order_;
    }
    // Kahn's algorithm; the ready set is drained lowest insertion index first.
    std::vector<std::size_t> indegree(nodes_.size(), 0);
    for (const auto& out : outgoing_) {
        for (std::size_t m : out) {
            ++indegree[m];
        }
    }
    std::vector<std::size_t> heap;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (indegree[i] == 0) {
            heap.push_back(i);
        }
    }
    std::make_heap(heap.begin(), heap.end(), std::greater<>{});
    std::vector<std::size_t> out;
    out.reserve(nodes_.size());
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), std::greater<>{});
        const std::size_t n = heap.back();
        heap.pop_back();
        out.push_back(n);
        for (std::size_t m : outgoing_[n]) {
            if (--indegree[m] == 0) {
                heap.push_back(m);
                std::push_heap(heap.begin(), heap.end(), std::greater<>{});
            }
        }
    }
    order_ = std::move(out);
    return *order_;
}

std::vector<std::string> WorkflowGraph::topological_order() const {
    std::vector<std::string> ids;
    for (std::size_t i : order()) {
        ids.push_back(nodes_[i].id);
    }
    return ids;
}

void WorkflowGraph::auto_layout() {
    std::vector<int> depth(nodes_.size(), 0);
    for (std::size_t n : order()) {
        for (std::size_t m : outgoing_[n]) {
            depth[m] = std::max(depth[m], depth[n] + 1);
        }
    }
    std::map<int, int> rows;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const int row = rows[depth[i]]++;
        nodes_[i].position = {kColumnPitch * depth[i], kRowPitch * row};
    }
}

} // namespace vpg
