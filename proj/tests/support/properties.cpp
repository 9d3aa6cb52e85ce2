#include "properties.hpp"

#include "script_gen.hpp"
#include "vpg/error.hpp"
#include "vpg/expression.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace vpg::testing {

namespace {

constexpr std::size_t kKeepFailures = 5;

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

struct Outcome {
    bool threw = false;
    Errc code = Errc::InvalidArgument;
    std::string subject;
};

template <class F>
Outcome attempt(F&& f) {
    try {
        f();
        return {};
    } catch (const Error& e) {
        return {true, e.code(), e.subject()};
    }
}

// One random edit: a slider value (often out of range, so clamping is
// exercised), a slider bound, or a literal on an unwired input.
std::string random_edit(std::mt19937_64& rng, WorkflowGraph& g) {
    std::vector<const Node*> sliders;
    std::vector<std::pair<const Node*, int>> inputs;
    for (const auto& n : g.nodes()) {
        if (n.descriptor->is_slider()) {
            sliders.push_back(&n);
        }
        for (int i = 0; i < static_cast<int>(n.descriptor->inputs.size()); ++i) {
            if (!g.wire_into(n.id, i) && random_literal(rng, n.descriptor->inputs[i].kind)) {
                inputs.emplace_back(&n, i);
            }
        }
    }
    const int roll = pick(rng, 0, 9);
    if (roll < 7 && !sliders.empty()) {
        const Node& s = *sliders[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(sliders.size()) - 1))];
        const double lo = s.state.at("min"), hi = s.state.at("max");
        const double span = std::max(hi - lo, 1.0);
        const double v = std::uniform_real_distribution<double>(lo - 0.2 * span, hi + 0.2 * span)(rng);
        const std::string id = s.id;
        g.set_param(id, "value", v);
        return id + ".value=" + std::to_string(v);
    }
    if (roll < 8 && !sliders.empty()) {
        const Node& s = *sliders[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(sliders.size()) - 1))];
        const std::string id = s.id;
        const double v = s.state.at("min") - pick(rng, 0, 5);
        g.set_param(id, "min", v);
        return id + ".min=" + std::to_string(v);
    }
    if (!inputs.empty()) {
        const auto [n, i] = inputs[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(inputs.size()) - 1))];
        const std::string id = n->id;
        const auto lit = random_literal(rng, n->descriptor->inputs[static_cast<std::size_t>(i)].kind);
        g.set_literal(id, i, *lit);
        return id + "." + std::to_string(i) + "=" + format_literal(*lit);
    }
    return "none";
}

std::vector<double> numbers(const Branch& b) {
    std::vector<double> out;
    for (const auto& v : b) {
        out.push_back(v.as_number());
    }
    return out;
}

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? "," : "") << v[i];
    }
    return "[" + os.str() + "]";
}

Literal count_literal(int n) { return Literal{static_cast<std::int64_t>(n)}; }

// series with integer-valued start and step, so every item is exact
std::vector<double> series_oracle(double start, double step, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(start + step * i);
    }
    return out;
}

} // namespace

void PropertyResult::fail(std::string what) {
    ++failed;
    if (failures.size() < kKeepFailures) {
        failures.push_back(std::move(what));
    }
}

std::string summary(const PropertyResult& r) {
    std::ostringstream os;
    os << r.name << " " << (r.cases - r.failed) << "/" << r.cases;
    return os.str();
}

PropertyResult incremental_equivalence(int sequences, std::uint64_t seed) {
    PropertyResult r{"incremental==full"};
    const auto registry = builtin_registry();
    std::mt19937_64 rng(seed);
    int scripts = 0;
    while (r.cases < sequences && scripts < sequences * 50) {
        ++scripts;
        const auto ast = random_valid_script(rng, *registry);
        WorkflowGraph g;
        try {
            g = script::execute(ast, registry);
            g.evaluate();
        } catch (const Error&) {
            continue;  // only graphs that evaluate start a sequence
        }
        ++r.cases;
        const int steps = pick(rng, 1, 6);
        std::string trail;
        for (int s = 0; s < steps; ++s) {
            std::string edit;
            try {
                edit = random_edit(rng, g);
            } catch (const Error& e) {
                edit = std::string("rejected ") + std::string(to_string(e.code()));
            }
            trail += edit + "; ";
            const auto nodes_before = g.nodes().size();
            const auto wires_before = g.wires();

            WorkflowGraph full = g;
            const Outcome inc = attempt([&] { g.reevaluate_dirty(); });
            const Outcome ref = attempt([&] { full.evaluate(); });
            if (g.nodes().size() != nodes_before || g.wires() != wires_before) {
                r.fail("topology changed after " + trail);
                break;
            }
            if (inc.threw != ref.threw || (inc.threw && (inc.code != ref.code || inc.subject != ref.subject))) {
                r.fail("error mismatch after " + trail + "\n" + script::print_script(ast));
                break;
            }
            if (!inc.threw && g.results() != full.results()) {
                r.fail("results differ after " + trail + "\n" + script::print_script(ast));
                break;
            }
        }
    }
    if (r.cases < sequences) {
        r.fail("only " + std::to_string(r.cases) + " of " + std::to_string(scripts) + " scripts evaluated");
    }
    return r;
}

PropertyResult validator_soundness(int per_family, std::uint64_t seed) {
    PropertyResult r{"mutation codes"};
    const auto registry = builtin_registry();
    std::mt19937_64 rng(seed);
    for (auto m : {Mutation::TruncateComponent, Mutation::BumpPortIndex, Mutation::RetargetToSlider}) {
        int generated = 0, tries = 0;
        while (generated < per_family && tries < per_family * 50) {
            ++tries;
            const auto mutated = mutate(random_valid_script(rng, *registry), m, rng, *registry);
            if (!mutated) {
                continue;
            }
            ++generated;
            ++r.cases;
            const auto codes = error_codes(script::validate(*mutated, *registry));
            if (codes != std::vector{expected_code(m)}) {
                std::string got;
                for (auto c : codes) {
                    got += std::string(to_string(c)) + " ";
                }
                r.fail(std::string(to_string(m)) + " gave [" + got + "]\n" + script::print_script(*mutated));
            }
        }
        if (generated < per_family) {
            r.fail(std::string(to_string(m)) + ": only " + std::to_string(generated) + " sites found");
        }
    }
    return r;
}

PropertyResult validator_completeness(int scripts, std::uint64_t seed) {
    PropertyResult r{"valid scripts execute"};
    const auto registry = builtin_registry();
    std::mt19937_64 rng(seed);
    for (int i = 0; i < scripts; ++i) {
        const auto ast = random_valid_script(rng, *registry);
        ++r.cases;
        const auto diags = script::validate(ast, *registry);
        if (script::has_errors(diags)) {
            r.fail("validator rejects: " + script::format_diagnostic(diags.front()) + "\n" + script::print_script(ast));
            continue;
        }
        const Outcome o = attempt([&] { script::execute(ast, registry); });
        if (o.threw) {
            r.fail("execute threw " + std::string(to_string(o.code)) + "\n" + script::print_script(ast));
        }
    }
    return r;
}

PropertyResult tree_laws(int cases, std::uint64_t seed) {
    PropertyResult r{"tree laws"};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i) {
        // two flat lists into an item-access add
        {
            ++r.cases;
            const int n1 = pick(rng, 0, 6), n2 = pick(rng, 0, 6);
            const double s1 = pick(rng, -9, 9), t1 = pick(rng, -3, 3), s2 = pick(rng, -9, 9), t2 = pick(rng, -3, 3);
            WorkflowGraph g;
            g.add_node("sets.series", "a", {}, {}, {{0, Literal{s1}}, {1, Literal{t1}}, {2, count_literal(n1)}});
            g.add_node("sets.series", "b", {}, {}, {{0, Literal{s2}}, {1, Literal{t2}}, {2, count_literal(n2)}});
            g.add_node("maths.add", "sum");
            g.connect({"a", 0}, {"sum", 0});
            g.connect({"b", 0}, {"sum", 1});
            g.evaluate();
            const auto a = series_oracle(s1, t1, n1), b = series_oracle(s2, t2, n2);
            std::vector<double> want;
            if (n1 > 0 && n2 > 0) {
                for (int k = 0; k < std::max(n1, n2); ++k) {
                    want.push_back(a[static_cast<std::size_t>(std::min(k, n1 - 1))] +
                                   b[static_cast<std::size_t>(std::min(k, n2 - 1))]);
                }
            }
            const Branch* got = g.outputs("sum")[0].find({0});
            if (!got || numbers(*got) != want) {
                r.fail("add " + join(a) + " + " + join(b) + " gave " + (got ? join(numbers(*got)) : "nothing"));
            }
        }
        // a radius list drives one circle per item
        {
            ++r.cases;
            const int n = pick(rng, 1, 6);
            const double r0 = pick(rng, 1, 100), f = pick(rng, 1, 4) / 4.0;
            std::vector<double> radii{r0};
            for (int k = 1; k < n; ++k) {
                radii.push_back(radii.back() * f);
            }
            WorkflowGraph g;
            g.add_node("sets.series", "k", {}, {}, {{0, Literal{0.0}}, {1, Literal{1.0}}, {2, count_literal(n)}});
            g.add_node("maths.power", "p", {}, {}, {{0, Literal{f}}});
            g.add_node("maths.multiply", "rad", {}, {}, {{0, Literal{r0}}});
            g.add_node("curve.circle", "c");
            g.connect({"k", 0}, {"p", 1});
            g.connect({"p", 0}, {"rad", 1});
            g.connect({"rad", 0}, {"c", 1});
            g.evaluate();
            const Branch* got = g.outputs("c")[0].find({0});
            bool ok = got && got->size() == radii.size();
            for (std::size_t k = 0; ok && k < radii.size(); ++k) {
                const auto& circle = (*got)[k].as_curve().as_circle();
                ok = std::abs(circle.radius - radii[k]) <= 1e-12 * radii[k];
            }
            if (!ok) {
                r.fail("circles for radii " + join(radii));
            }
        }
        // list-access repetition builds a tree; two trees on the same paths
        // match per branch; flatten concatenates in path order
        {
            ++r.cases;
            const int m = pick(rng, 1, 4), n1 = pick(rng, 1, 5), n2 = pick(rng, 1, 5);
            const double step = pick(rng, 1, 20);
            WorkflowGraph g;
            g.add_node("sets.series", "starts", {}, {}, {{0, Literal{0.0}}, {1, Literal{step}}, {2, count_literal(m)}});
            g.add_node("sets.series", "s", {}, {}, {{1, Literal{1.0}}, {2, count_literal(n1)}});
            g.add_node("sets.series", "t", {}, {}, {{1, Literal{-1.0}}, {2, count_literal(n2)}});
            g.add_node("maths.add", "sum");
            g.add_node("sets.flatten_tree", "flat");
            g.connect({"starts", 0}, {"s", 0});
            g.connect({"starts", 0}, {"t", 0});
            g.connect({"s", 0}, {"sum", 0});
            g.connect({"t", 0}, {"sum", 1});
            g.connect({"sum", 0}, {"flat", 0});
            g.evaluate();
            const DataTree& sum = g.outputs("sum")[0];
            std::vector<double> concat;
            bool ok = sum.branch_count() == static_cast<std::size_t>(m);
            for (int j = 0; ok && j < m; ++j) {
                const auto s = series_oracle(step * j, 1, n1), t = series_oracle(step * j, -1, n2);
                // a single evaluation keeps its list on the parent path
                const Branch* got = sum.find(m == 1 ? Path{0} : Path{0, j});
                std::vector<double> want;
                for (int k = 0; k < std::max(n1, n2); ++k) {
                    want.push_back(s[static_cast<std::size_t>(std::min(k, n1 - 1))] +
                                   t[static_cast<std::size_t>(std::min(k, n2 - 1))]);
                }
                ok = got && numbers(*got) == want;
                concat.insert(concat.end(), want.begin(), want.end());
            }
            const DataTree& flat = g.outputs("flat")[0];
            ok = ok && flat.branch_count() == 1 && flat.find({0}) && numbers(*flat.find({0})) == concat;
            if (!ok) {
                r.fail("tree add/flatten with m=" + std::to_string(m) + " n1=" + std::to_string(n1) +
                       " n2=" + std::to_string(n2));
            }
        }
        // flatten on an arbitrary tree
        {
            ++r.cases;
            DataTree t;
            std::map<Path, std::vector<double>> oracle;
            const int branches = pick(rng, 0, 5);
            for (int b = 0; b < branches; ++b) {
                Path p;
                for (int d = pick(rng, 1, 3); d > 0; --d) {
                    p.push_back(pick(rng, 0, 3));
                }
                for (int k = pick(rng, 0, 3); k > 0; --k) {
                    const double v = pick(rng, -50, 50);
                    t.branch(p).push_back(Value::number(v));
                    oracle[p].push_back(v);
                }
                t.branch(p);
                oracle[p];
            }
            std::vector<double> want;
            for (const auto& [p, items] : oracle) {
                want.insert(want.end(), items.begin(), items.end());
            }
            const DataTree f = t.flattened();
            const bool ok = branches == 0 ? f.item_count() == 0
                                          : f.branch_count() == 1 && f.find({0}) && numbers(*f.find({0})) == want;
            if (!ok) {
                r.fail("flatten of " + std::to_string(branches) + " branches");
            }
        }
    }
    return r;
}

PropertyResult expression_table(const std::filesystem::path& table, double tol) {
    PropertyResult r{"expression table"};
    std::ifstream in(table);
    if (!in) {
        r.fail("cannot read " + table.string());
        return r;
    }
    const auto cases = nlohmann::json::parse(in);
    for (const auto& c : cases) {
        ++r.cases;
        const std::string text = c["expr"];
        expr::Bindings b;
        for (const auto& [k, v] : c["bindings"].items()) {
            b[k] = v.get<double>();
        }
        try {
            const double got = expr::Expression::parse(text).evaluate(b);
            if (c.contains("error")) {
                r.fail(text + ": expected an evaluation error, got " + std::to_string(got));
                continue;
            }
            const double want = c["value"].get<double>();
            if (!(std::abs(got - want) <= tol * std::max(1.0, std::abs(want)))) {
                std::ostringstream os;
                os.precision(17);
                os << text << ": got " << got << " want " << want;
                r.fail(os.str());
            }
        } catch (const Error& e) {
            if (!c.contains("error") || e.code() != Errc::EvaluationError) {
                r.fail(text + ": " + e.what());
            }
        }
    }
    return r;
}

PropertyResult docs_round_trip() {
    PropertyResult r{"docs round trip"};
    const auto& reg = *builtin_registry();
    const auto parsed = parse_docs(export_docs(reg));
    if (parsed.size() != reg.size()) {
        r.fail("parsed " + std::to_string(parsed.size()) + " of " + std::to_string(reg.size()) + " components");
        return r;
    }
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        ++r.cases;
        if (!(parsed[i] == reg.all()[i])) {
            r.fail(reg.all()[i].type_id + " differs after the round trip");
        }
    }
    return r;
}

} // namespace vpg::testing
