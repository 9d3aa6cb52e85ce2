#include "script_gen.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace vpg::testing {

using namespace vpg::script;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& one_of(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(v.size()) - 1))];
}

// Coarse values keep most generated graphs evaluable; the odd long
// fraction exercises number printing.
double random_number(std::mt19937_64& rng) {
    switch (pick(rng, 0, 3)) {
    case 0: return pick(rng, -20, 20);
    case 1: return pick(rng, -400, 400) / 8.0;
    case 2: return uniform(rng, -100, 100);
    default: return pick(rng, 1, 9) * 1e-7;
    }
}

struct GenNode {
    std::string id;
    const ComponentDescriptor* d = nullptr;
};

struct Source {
    std::string node;
    int port;
};

const std::vector<std::string> kNames = {"radius", "z", "h", "count", "factor", "c", "m", "pt", "layer", "srf", "base",
                                         "n", "Top_2", "x"};

} // namespace

std::optional<Literal> random_literal(std::mt19937_64& rng, ValueKind kind) {
    switch (kind) {
    case ValueKind::Number:
        if (chance(rng, 0.3)) {
            return Literal{static_cast<std::int64_t>(pick(rng, -10, 30))};
        }
        return Literal{random_number(rng)};
    case ValueKind::Integer: return Literal{static_cast<std::int64_t>(pick(rng, -3, 12))};
    case ValueKind::Boolean: return Literal{chance(rng, 0.5)};
    case ValueKind::Text: {
        static const std::vector<std::string> texts = {"x",       "2*x + y - z", "z/(cos(x)+sin(x))^y", "sqrt(x)",
                                                       "",        "a \"quoted\" word", "tab\there", "back\\slash",
                                                       "line\nbreak", "caf\xc3\xa9"};
        return Literal{one_of(rng, texts)};
    }
    case ValueKind::Vector:
    case ValueKind::Point: return Literal{Triple{random_number(rng), random_number(rng), random_number(rng)}};
    case ValueKind::Plane: return Literal{one_of(rng, std::vector<NamedPlane>{NamedPlane::XY, NamedPlane::YZ, NamedPlane::XZ})};
    case ValueKind::Any: return random_literal(rng, one_of(rng, std::vector<ValueKind>{ValueKind::Number, ValueKind::Point}));
    default: return std::nullopt;
    }
}

Ast random_valid_script(std::mt19937_64& rng, const Registry& registry, const ScriptGenOptions& opt) {
    Ast ast;
    std::vector<GenNode> nodes;
    std::vector<Statement> pending;
    const bool positioned = chance(rng, 0.5);

    std::vector<const ComponentDescriptor*> sliders, others;
    for (const auto& d : registry.all()) {
        (d.is_slider() ? sliders : others).push_back(&d);
    }

    const auto flush = [&] {
        std::shuffle(pending.begin(), pending.end(), rng);
        for (auto& s : pending) {
            ast.statements.push_back(std::move(s));
        }
        pending.clear();
    };

    const auto sources_for = [&](ValueKind kind) {
        std::vector<Source> out;
        for (const GenNode& n : nodes) {
            for (const auto& p : n.d->outputs) {
                if (kind_accepts(kind, p.kind)) {
                    out.push_back({n.id, p.index});
                }
            }
        }
        return out;
    };

    const int count = pick(rng, std::max(1, opt.min_nodes), std::max(opt.min_nodes, opt.max_nodes));
    for (int i = 0; i < count; ++i) {
        const ComponentDescriptor* d = nullptr;
        if (i == 0 || chance(rng, 0.2)) {
            d = one_of(rng, sliders);
        } else {
            // Only pick components whose required inputs can be satisfied.
            for (int attempt = 0; attempt < 20 && !d; ++attempt) {
                const ComponentDescriptor* c = one_of(rng, others);
                const bool ok = std::all_of(c->inputs.begin(), c->inputs.end(), [&](const PortDescriptor& p) {
                    return !p.required() || random_literal(rng, p.kind) || !sources_for(p.kind).empty();
                });
                if (ok) {
                    d = c;
                }
            }
            if (!d) {
                d = one_of(rng, sliders);
            }
        }

        AddStmt add;
        add.type_id = d->type_id;
        add.node_id = one_of(rng, kNames) + std::to_string(i);
        if (positioned && chance(rng, 0.8)) {
            add.at = Position{static_cast<double>(pick(rng, -10, 100)) * 12, static_cast<double>(pick(rng, 0, 40)) * 7.5};
        }
        if (d->is_slider()) {
            const bool integer = d->outputs.front().kind == ValueKind::Integer;
            if (chance(rng, 0.7)) {
                double lo = integer ? pick(rng, -5, 5) : random_number(rng);
                double hi = integer ? pick(rng, 0, 20) : random_number(rng);
                if (lo > hi) {
                    std::swap(lo, hi);
                }
                add.block.push_back({"min", Literal{lo}, {}});
                add.block.push_back({"max", Literal{hi}, {}});
            }
            if (chance(rng, 0.8)) {
                add.block.push_back({"value", Literal{random_number(rng)}, {}});
            }
            if (!integer && chance(rng, 0.6)) {
                add.block.push_back({"decimals", Literal{static_cast<std::int64_t>(pick(rng, 0, 12))}, {}});
            }
            std::shuffle(add.block.begin(), add.block.end(), rng);
        }

        std::vector<Statement> wiring;
        for (const auto& p : d->inputs) {
            const auto sources = sources_for(p.kind);
            auto lit = random_literal(rng, p.kind);
            const bool can_wire = !sources.empty();
            bool wire = can_wire && (chance(rng, opt.connect_rate) || (p.required() && !lit));
            if (wire) {
                const Source& s = one_of(rng, sources);
                ConnectStmt c;
                c.from = {s.node, s.port, std::nullopt, {}};
                c.to = {add.node_id, p.index, std::nullopt, {}};
                const bool plain_name = std::all_of(p.name.begin(), p.name.end(), [](char ch) {
                    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
                });
                if (plain_name && chance(rng, 0.2)) {
                    c.to.name = p.name;
                }
                if (lit && chance(rng, 0.1)) {
                    // literal first, then overridden by the wire
                    add.block.push_back({std::to_string(p.index), *lit, {}});
                }
                wiring.emplace_back(std::move(c));
            } else if (lit && (p.required() || chance(rng, opt.literal_rate))) {
                if (chance(rng, 0.5)) {
                    add.block.push_back({std::to_string(p.index), *lit, {}});
                } else {
                    wiring.emplace_back(AssignStmt{{add.node_id, p.index, std::nullopt, {}}, *lit, {}});
                }
            }
        }

        ast.statements.emplace_back(std::move(add));
        nodes.push_back({std::get<AddStmt>(ast.statements.back()).node_id, d});
        for (auto& w : wiring) {
            pending.push_back(std::move(w));
        }
        if (chance(rng, 0.15)) {
            pending.emplace_back(PreviewStmt{one_of(rng, nodes).id, chance(rng, 0.5), {}});
        }
        if (chance(rng, 0.5)) {
            flush();
        }
    }
    flush();
    if (chance(rng, 0.2)) {
        ast.statements.emplace_back(LayoutStmt{});
    }
    return ast;
}

Errc expected_code(Mutation m) {
    switch (m) {
    case Mutation::TruncateComponent: return Errc::UnknownComponent;
    case Mutation::BumpPortIndex: return Errc::UnknownPort;
    case Mutation::RetargetToSlider: return Errc::SliderMisuse;
    }
    return Errc::ParseError;
}

const char* to_string(Mutation m) {
    switch (m) {
    case Mutation::TruncateComponent: return "component-name truncation";
    case Mutation::BumpPortIndex: return "port-index bump";
    case Mutation::RetargetToSlider: return "slider-target rewrite";
    }
    return "?";
}

std::optional<Ast> mutate(const Ast& ast, Mutation m, std::mt19937_64& rng, const Registry& registry) {
    Ast out = ast;
    std::map<std::string, const ComponentDescriptor*> types;
    std::vector<std::size_t> adds, connects;
    for (std::size_t i = 0; i < out.statements.size(); ++i) {
        if (const auto* a = std::get_if<AddStmt>(&out.statements[i])) {
            types[a->node_id] = registry.find(a->type_id);
            adds.push_back(i);
        } else if (std::holds_alternative<ConnectStmt>(out.statements[i])) {
            connects.push_back(i);
        }
    }

    switch (m) {
    case Mutation::TruncateComponent: {
        if (adds.empty()) {
            return std::nullopt;
        }
        auto& a = std::get<AddStmt>(out.statements[one_of(rng, adds)]);
        const std::string ns = a.type_id.substr(0, a.type_id.find('.'));
        const std::string name = a.type_id.substr(a.type_id.find('.') + 1);
        std::string camel;
        bool up = true;
        for (char c : name) {
            if (c == '_') {
                up = true;
                continue;
            }
            camel += up ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
            up = false;
        }
        const std::vector<std::string> variants = {
            name,                                                         // namespace dropped
            ns + ".Component_" + camel,                                   // vendor-style name
            a.type_id.substr(0, a.type_id.size() - static_cast<std::size_t>(pick(rng, 1, 3))),  // chopped tail
            ns + "." + name.substr(0, name.size() / 2)};
        std::string chosen = one_of(rng, variants);
        if (registry.find(chosen) || chosen.empty() || chosen.back() == '.') {
            chosen = name;
        }
        a.type_id = chosen;
        return out;
    }
    case Mutation::BumpPortIndex: {
        if (connects.empty()) {
            return std::nullopt;
        }
        auto& c = std::get<ConnectStmt>(out.statements[one_of(rng, connects)]);
        if (chance(rng, 0.5)) {
            c.to.port = static_cast<int>(types.at(c.to.node)->inputs.size()) + pick(rng, 0, 2);
            c.to.name.reset();
        } else {
            c.from.port = static_cast<int>(types.at(c.from.node)->outputs.size()) + pick(rng, 0, 2);
            c.from.name.reset();
        }
        return out;
    }
    case Mutation::RetargetToSlider: {
        // Needs a slider declared before the rewritten statement.
        std::vector<std::pair<std::size_t, std::string>> sites;
        std::vector<std::string> sliders_so_far;
        for (std::size_t i = 0; i < out.statements.size(); ++i) {
            if (const auto* a = std::get_if<AddStmt>(&out.statements[i])) {
                if (types.at(a->node_id)->is_slider()) {
                    sliders_so_far.push_back(a->node_id);
                }
            } else if (std::holds_alternative<ConnectStmt>(out.statements[i]) && !sliders_so_far.empty()) {
                sites.emplace_back(i, one_of(rng, sliders_so_far));
            }
        }
        if (sites.empty()) {
            return std::nullopt;
        }
        const auto& [at, slider] = one_of(rng, sites);
        auto& c = std::get<ConnectStmt>(out.statements[at]);
        if (chance(rng, 0.7)) {
            c.to = {slider, pick(rng, 0, 2), std::nullopt, c.to.loc};
        } else {
            // the value pushed straight into the slider
            out.statements[at] = AssignStmt{{slider, 0, std::nullopt, c.to.loc}, Literal{std::int64_t{5}}, c.loc};
        }
        return out;
    }
    }
    return std::nullopt;
}

std::vector<Errc> error_codes(const std::vector<Diagnostic>& diagnostics) {
    std::set<Errc> codes;
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::Error) {
            codes.insert(d.code);
        }
    }
    return {codes.begin(), codes.end()};
}

} // namespace vpg::testing
