#include "vpg/script.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

namespace vpg::script {

namespace {

std::string lower_alnum(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
        row[j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

// Closest registered id, compared on lowercase alphanumerics so that
// "Component_Extrude" and "extrude" are near each other.
std::string suggestion(std::string_view type_id, const Registry& registry) {
    const std::string want = lower_alnum(type_id);
    const std::string tail = lower_alnum(type_id.substr(type_id.rfind('.') == std::string_view::npos ? 0 : type_id.rfind('.') + 1));
    std::string best;
    std::size_t best_d = std::string::npos;
    for (const auto& d : registry.all()) {
        const std::string id = lower_alnum(d.type_id);
        std::size_t dist = edit_distance(want, id);
        const std::string short_id = lower_alnum(std::string_view(d.type_id).substr(d.type_id.find('.') + 1));
        if (!short_id.empty() && tail.find(short_id) != std::string::npos) {
            dist = std::min(dist, tail.size() - short_id.size());
        }
        if (dist < best_d) {
            best_d = dist;
            best = d.type_id;
        }
    }
    return best_d <= std::max<std::size_t>(3, want.size() / 2) ? best : std::string{};
}

struct Symbol {
    const ComponentDescriptor* descriptor = nullptr;  // null: unknown component, diagnostics suppressed
    Location declared;
    std::set<int> wired;
    std::set<int> assigned;
    std::size_t index = 0;
};

class Validator {
public:
    Validator(const Registry& registry) : registry_(registry) {}

    std::vector<Diagnostic> run(const Ast& ast) {
        for (const Statement& s : ast.statements) {
            std::visit([&](const auto& x) { check(x); }, s);
        }
        if (!has_errors(out_)) {
            for (const auto& id : order_) {
                const Symbol& sym = symbols_.at(id);
                for (const auto& p : sym.descriptor->inputs) {
                    if (p.required() && !sym.wired.contains(p.index) && !sym.assigned.contains(p.index)) {
                        error(Errc::MissingRequiredInput, sym.declared,
                              "input " + std::to_string(p.index) + " (" + p.name + ") of '" + id + "' (" +
                                  sym.descriptor->type_id + ") must be connected or set",
                              id + "." + std::to_string(p.index));
                    }
                }
            }
        }
        std::stable_sort(out_.begin(), out_.end(), [](const Diagnostic& a, const Diagnostic& b) {
            return std::tie(a.loc.line, a.loc.column) < std::tie(b.loc.line, b.loc.column);
        });
        return std::move(out_);
    }

private:
    void check(const AddStmt& a) {
        if (symbols_.contains(a.node_id)) {
            error(Errc::DuplicateNodeId, a.id_loc,
                  "node id '" + a.node_id + "' was already declared on line " +
                      std::to_string(symbols_.at(a.node_id).declared.line),
                  a.node_id);
            return;
        }
        const ComponentDescriptor* d = registry_.find(a.type_id);
        Symbol sym;
        sym.declared = a.loc;
        sym.index = adjacency_.size();
        adjacency_.emplace_back();
        if (!d) {
            std::string msg = "unknown component '" + a.type_id + "'";
            if (const auto hint = suggestion(a.type_id, registry_); !hint.empty()) {
                msg += "; did you mean '" + hint + "'?";
            }
            error(Errc::UnknownComponent, a.type_loc, msg, a.type_id);
            symbols_.emplace(a.node_id, sym);
            return;
        }
        sym.descriptor = d;
        State state;
        for (const auto& f : d->state_schema) {
            state[f.name] = f.default_value;
        }
        bool state_ok = true;
        for (const BlockEntry& e : a.block) {
            if (e.is_input()) {
                const int index = e.input_index();
                if (index < 0 || static_cast<std::size_t>(index) >= d->inputs.size()) {
                    error(d->is_slider() ? Errc::SliderMisuse : Errc::UnknownPort, e.loc,
                          "'" + d->type_id + "' has " + std::to_string(d->inputs.size()) + " inputs; there is no input " +
                              e.key,
                          a.node_id + "." + e.key);
                    continue;
                }
                const auto& port = d->inputs[static_cast<std::size_t>(index)];
                if (!literal_to_value(e.value, port.kind)) {
                    error(Errc::BadLiteral, e.loc,
                          "literal " + format_literal(e.value) + " does not fit input " + e.key + " (" + port.name +
                              ") of kind " + std::string(to_string(port.kind)),
                          a.node_id + "." + e.key);
                    continue;
                }
                sym.assigned.insert(index);
                continue;
            }
            if (!d->stateful()) {
                error(Errc::NotStateful, e.loc, "'" + d->type_id + "' has no state; '" + e.key + "' cannot be set",
                      e.key);
                state_ok = false;
                continue;
            }
            if (!d->state_field(e.key)) {
                error(Errc::UnknownField, e.loc, "'" + d->type_id + "' has no state field '" + e.key + "'", e.key);
                state_ok = false;
                continue;
            }
            const auto v = literal_as_number(e.value);
            if (!v) {
                error(Errc::BadLiteral, e.loc, "state field '" + e.key + "' needs a number", e.key);
                state_ok = false;
                continue;
            }
            state[e.key] = *v;
        }
        if (state_ok && d->is_slider()) {
            const double lo = state["min"], hi = state["max"], dec = state["decimals"];
            if (!(lo <= hi)) {
                error(Errc::BadLiteral, a.loc, "slider '" + a.node_id + "' has min greater than max", a.node_id);
            }
            if (dec != std::floor(dec) || dec < 0 || dec > 12) {
                error(Errc::BadLiteral, a.loc, "slider '" + a.node_id + "' needs whole-number decimals in 0..12",
                      a.node_id);
            }
        }
        symbols_.emplace(a.node_id, sym);
        order_.push_back(a.node_id);
    }

    void check(const ConnectStmt& c) {
        Symbol* from = lookup(c.from.node, c.from.loc);
        Symbol* to = lookup(c.to.node, c.to.loc);
        if (!from || !to || !from->descriptor || !to->descriptor) {
            return;
        }
        const ComponentDescriptor& sd = *from->descriptor;
        const ComponentDescriptor& dd = *to->descriptor;
        if (dd.is_slider()) {
            error(Errc::SliderMisuse, c.to.loc,
                  "'" + c.to.node + "' is a " + dd.name + " and has no inputs; use it only as a source: connect " +
                      c.to.node + ".0 -> <node>.<input>",
                  c.to.node);
            return;
        }
        if (c.from.port >= static_cast<int>(sd.outputs.size())) {
            error(Errc::UnknownPort, c.from.loc,
                  "'" + c.from.node + "' (" + sd.type_id + ") has " + std::to_string(sd.outputs.size()) +
                      " outputs; there is no output " + std::to_string(c.from.port),
                  c.from.node + "." + std::to_string(c.from.port));
            return;
        }
        if (c.to.port >= static_cast<int>(dd.inputs.size())) {
            error(Errc::UnknownPort, c.to.loc,
                  "'" + c.to.node + "' (" + dd.type_id + ") has " + std::to_string(dd.inputs.size()) +
                      " inputs; there is no input " + std::to_string(c.to.port),
                  c.to.node + "." + std::to_string(c.to.port));
            return;
        }
        const auto& out = sd.outputs[static_cast<std::size_t>(c.from.port)];
        const auto& in = dd.inputs[static_cast<std::size_t>(c.to.port)];
        name_check(c.from, out);
        name_check(c.to, in);
        if (!kind_accepts(in.kind, out.kind)) {
            error(Errc::KindMismatch, c.to.loc,
                  "output " + std::to_string(out.index) + " (" + out.name + ") of '" + c.from.node + "' is " +
                      std::string(to_string(out.kind)) + " but input " + std::to_string(in.index) + " (" + in.name +
                      ") of '" + c.to.node + "' expects " + std::string(to_string(in.kind)),
                  c.to.node + "." + std::to_string(c.to.port));
            return;
        }
        if (to->wired.contains(c.to.port)) {
            error(Errc::InputOccupied, c.to.loc,
                  "input " + std::to_string(in.index) + " (" + in.name + ") of '" + c.to.node + "' is already connected",
                  c.to.node + "." + std::to_string(c.to.port));
            return;
        }
        if (from == to || reaches(to->index, from->index)) {
            error(Errc::CycleCreated, c.loc, "connecting '" + c.from.node + "' to '" + c.to.node + "' creates a cycle",
                  c.to.node);
            return;
        }
        adjacency_[from->index].push_back(to->index);
        to->wired.insert(c.to.port);
        to->assigned.erase(c.to.port);
    }

    void check(const AssignStmt& a) {
        Symbol* sym = lookup(a.target.node, a.target.loc);
        if (!sym || !sym->descriptor) {
            return;
        }
        const ComponentDescriptor& d = *sym->descriptor;
        const std::string subject = a.target.node + "." + std::to_string(a.target.port);
        if (d.is_slider()) {
            error(Errc::SliderMisuse, a.target.loc,
                  "'" + a.target.node + "' is a " + d.name + " and has no inputs; give its value in the add block ({ value: ... })",
                  a.target.node);
            return;
        }
        if (a.target.port >= static_cast<int>(d.inputs.size())) {
            error(Errc::UnknownPort, a.target.loc,
                  "'" + a.target.node + "' (" + d.type_id + ") has " + std::to_string(d.inputs.size()) +
                      " inputs; there is no input " + std::to_string(a.target.port),
                  subject);
            return;
        }
        const auto& port = d.inputs[static_cast<std::size_t>(a.target.port)];
        name_check(a.target, port);
        if (sym->wired.contains(a.target.port)) {
            error(Errc::InputOccupied, a.target.loc,
                  "input " + std::to_string(port.index) + " (" + port.name + ") of '" + a.target.node +
                      "' is connected and cannot also be set",
                  subject);
            return;
        }
        if (!literal_to_value(a.value, port.kind)) {
            error(Errc::BadLiteral, a.loc,
                  "literal " + format_literal(a.value) + " does not fit input " + std::to_string(port.index) + " (" +
                      port.name + ") of kind " + std::string(to_string(port.kind)),
                  subject);
            return;
        }
        sym->assigned.insert(a.target.port);
    }

    void check(const PreviewStmt& p) { lookup(p.node, p.loc); }

    void check(const LayoutStmt&) {}

    Symbol* lookup(const std::string& id, Location loc) {
        const auto it = symbols_.find(id);
        if (it == symbols_.end()) {
            error(Errc::UnknownNode, loc, "node '" + id + "' is not declared by an earlier add statement", id);
            return nullptr;
        }
        return &it->second;
    }

    void name_check(const PortAddr& addr, const PortDescriptor& port) {
        if (addr.name && lower_alnum(*addr.name) != lower_alnum(port.name)) {
            out_.push_back({Severity::Warning, Errc::PortNameMismatch,
                            "port " + std::to_string(port.index) + " of '" + addr.node + "' is named '" + port.name +
                                "', not '" + *addr.name + "'",
                            addr.loc, addr.node + "." + std::to_string(addr.port)});
        }
    }

    bool reaches(std::size_t from, std::size_t to) const {
        std::vector<char> seen(adjacency_.size(), 0);
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
            stack.insert(stack.end(), adjacency_[n].begin(), adjacency_[n].end());
        }
        return false;
    }

    void error(Errc code, Location loc, std::string message, std::string subject) {
        out_.push_back({Severity::Error, code, std::move(message), loc, std::move(subject)});
    }

    const Registry& registry_;
    std::map<std::string, Symbol, std::less<>> symbols_;
    std::vector<std::string> order_;  // known-component nodes, declaration order
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<Diagnostic> out_;
};

} // namespace

std::vector<Diagnostic> validate(const Ast& ast, const Registry& registry) { return Validator(registry).run(ast); }

} // namespace vpg::script
