#include "vpg/bench.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace vpg {
namespace detail {
extern const char* const kScriptsText[];
extern const char* const kScriptsName[];
extern const std::size_t kScriptsCount;
} // namespace detail

namespace bench {

namespace {

using geo::Point3;
using geo::Vector3;
constexpr double kPi = std::numbers::pi;

struct Checks {
    const OracleOptions& opt;
    std::vector<Check> out;

    // absolute deviation
    void near(std::string what, double got, double want, std::string detail = {}) {
        const double d = std::abs(got - want);
        out.push_back({std::move(what), d <= opt.tolerance, d, std::move(detail)});
    }
    // relative deviation
    void rel(std::string what, double got, double want, std::string detail = {}) {
        const double d = std::abs(got - want) / std::max(std::abs(want), 1e-300);
        out.push_back({std::move(what), d <= opt.tolerance, d, std::move(detail)});
    }
    void dist(std::string what, const Point3& got, const Point3& want) {
        near(std::move(what), (got - want).norm(), 0);
    }
    bool require(std::string what, bool ok, std::string detail = {}) {
        out.push_back({std::move(what), ok, 0, std::move(detail)});
        return ok;
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double volume_of(const OracleOptions& opt, const geo::Solid& s) { return opt.volume ? opt.volume(s) : geo::volume(s); }

std::vector<const geo::Solid*> solids(const std::vector<Value>& shown) {
    std::vector<const geo::Solid*> out;
    for (const auto& v : shown) {
        if (v.kind() == ValueKind::Solid) {
            out.push_back(&v.as_solid());
        }
    }
    return out;
}

Point3 mean(const std::vector<Point3>& pts) {
    Point3 c = Point3::Zero();
    for (const auto& p : pts) {
        c += p;
    }
    return c / static_cast<double>(pts.size());
}

double segment_distance_2d(const Point3& p, const Point3& a, const Point3& b) {
    const Eigen::Vector2d P(p.x(), p.y()), A(a.x(), a.y()), B(b.x(), b.y());
    const Eigen::Vector2d ab = B - A;
    const double t = std::clamp((P - A).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (P - (A + t * ab)).norm();
}

// ---------------------------------------------------------------- oracles

std::vector<Check> circle_oracle(const std::vector<Value>& shown, const Params& p, const OracleOptions& opt) {
    Checks c{opt, {}};
    const double r = p.at("radius"), z = p.at("z");
    std::vector<const geo::Circle*> circles;
    for (const auto& v : shown) {
        if (v.kind() == ValueKind::Curve && v.as_curve().is_circle()) {
            circles.push_back(&v.as_curve().as_circle());
        }
    }
    if (!c.require("one circle shown", circles.size() == 1 && shown.size() == 1,
                   std::to_string(shown.size()) + " geometry items shown")) {
        return c.out;
    }
    const geo::Circle& k = *circles.front();
    c.dist("circle center at (0,0,z)", k.center(), Point3(0, 0, z));
    c.near("circle radius", k.radius, r);
    c.near("circle normal along z", k.plane.normal().cross(Vector3::UnitZ()).norm(), 0);
    return c.out;
}

std::vector<Check> frustum_oracle(const std::vector<Value>& shown, const Params& p, const OracleOptions& opt) {
    Checks c{opt, {}};
    const double r1 = p.at("r_bottom"), r2 = p.at("r_top"), h = p.at("height");
    const auto ss = solids(shown);
    if (!c.require("one solid shown", ss.size() == 1 && shown.size() == 1,
                   std::to_string(shown.size()) + " geometry items shown")) {
        return c.out;
    }
    const geo::Solid& s = *ss.front();
    c.require("solid is capped", s.capped());
    c.require("tessellation is watertight", geo::is_watertight(geo::tessellate(s, 0.05)));
    const double want = kPi * h / 3.0 * (r1 * r1 + r1 * r2 + r2 * r2);
    c.rel("frustum volume", volume_of(opt, s), want, "oracle " + num(want));
    if (const auto* loft = std::get_if<geo::Loft>(&s.shape()); loft && loft->bottom.is_circle() && loft->top.is_circle()) {
        const auto& b = loft->bottom.as_circle();
        const auto& t = loft->top.as_circle();
        c.near("bottom radius", b.radius, r1);
        c.near("top radius", t.radius, r2);
        c.dist("bottom center", b.center(), Point3(0, 0, 0));
        c.dist("top center", t.center(), Point3(0, 0, h));
    }
    return c.out;
}

std::vector<Check> round_tower_oracle(const std::vector<Value>& shown, const Params& p, const OracleOptions& opt) {
    Checks c{opt, {}};
    const double R = p.at("radius"), h = p.at("height"), f = p.at("factor");
    const auto n = static_cast<std::size_t>(std::llround(p.at("layers")));
    auto ss = solids(shown);
    if (!c.require("layer count", ss.size() == n && shown.size() == n,
                   std::to_string(shown.size()) + " items shown, want " + std::to_string(n) + " solids")) {
        return c.out;
    }
    std::vector<std::pair<const geo::Extrusion*, const geo::Solid*>> layers;
    for (const auto* s : ss) {
        const auto* e = std::get_if<geo::Extrusion>(&s->shape());
        if (!c.require("layer is an extruded circle", e && e->base.is_circle())) {
            return c.out;
        }
        layers.emplace_back(e, s);
    }
    std::stable_sort(layers.begin(), layers.end(), [](const auto& a, const auto& b) {
        return a.first->base.as_circle().center().z() < b.first->base.as_circle().center().z();
    });
    double top = -INFINITY, rmin = INFINITY, rmax = -INFINITY;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& e = *layers[k].first;
        const auto& circle = e.base.as_circle();
        const std::string tag = "layer " + std::to_string(k) + " ";
        const double want_r = R * std::pow(f, static_cast<double>(k));
        c.near(tag + "radius", circle.radius, want_r, "oracle " + num(want_r));
        c.dist(tag + "base center", circle.center(), Point3(0, 0, static_cast<double>(k) * h));
        c.dist(tag + "extrusion vector", e.direction, Vector3(0, 0, h));
        c.require(tag + "capped", e.capped);
        c.rel(tag + "volume", volume_of(opt, *layers[k].second), kPi * want_r * want_r * h);
        top = std::max(top, circle.center().z() + e.direction.z());
        rmin = std::min(rmin, circle.radius);
        rmax = std::max(rmax, circle.radius);
    }
    c.near("total height", top - layers.front().first->base.as_circle().center().z(), static_cast<double>(n) * h);
    if (f == 1.0) {
        c.near("equal radii at factor 1", rmax - rmin, 0);
    }
    return c.out;
}

std::vector<Check> square_tower_oracle(const std::vector<Value>& shown, const Params& p, const OracleOptions& opt) {
    Checks c{opt, {}};
    const double R = p.at("radius"), h = p.at("height");
    const double theta = p.at("rotation") * kPi;
    const auto n = static_cast<std::size_t>(std::llround(p.at("layers")));
    const double ratio = 1.0 / (std::cos(theta) + std::sin(theta));

    auto ss = solids(shown);
    if (!c.require("layer count", ss.size() == n && shown.size() == n,
                   std::to_string(shown.size()) + " items shown, want " + std::to_string(n) + " solids")) {
        return c.out;
    }
    struct Layer {
        const geo::Extrusion* e;
        const geo::Solid* s;
        std::vector<Point3> v;
        Point3 center;
    };
    std::vector<Layer> layers;
    for (const auto* s : ss) {
        const auto* e = std::get_if<geo::Extrusion>(&s->shape());
        if (!c.require("layer is an extruded square", e && !e->base.is_circle() && e->base.as_polyline().closed &&
                                                          e->base.as_polyline().vertices.size() == 4)) {
            return c.out;
        }
        const auto& vs = e->base.as_polyline().vertices;
        layers.push_back({e, s, vs, mean(vs)});
    }
    std::stable_sort(layers.begin(), layers.end(), [](const Layer& a, const Layer& b) { return a.center.z() < b.center.z(); });

    double identical = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Layer& L = layers[k];
        const std::string tag = "layer " + std::to_string(k) + " ";
        const double want_r = R * std::pow(ratio, static_cast<double>(k));
        c.dist(tag + "center", L.center, Point3(0, 0, static_cast<double>(k) * h));
        double r_dev = 0, a_dev = 0;
        for (const auto& v : L.v) {
            const Vector3 d = v - L.center;
            r_dev = std::max(r_dev, std::abs(d.norm() - want_r));
            // corners sit at k*theta + j*pi/2
            a_dev = std::max(a_dev, std::abs(std::remainder(std::atan2(d.y(), d.x()) - static_cast<double>(k) * theta, kPi / 2)) * want_r);
            identical = std::max(identical, std::hypot(v.x() - layers[0].v[&v - L.v.data()].x(),
                                                       v.y() - layers[0].v[&v - L.v.data()].y()));
        }
        c.near(tag + "circumradius", r_dev, 0, "oracle " + num(want_r));
        c.near(tag + "rotation k*theta (arc length)", a_dev, 0);
        c.dist(tag + "extrusion vector", L.e->direction, Vector3(0, 0, h));
        c.require(tag + "capped", L.e->capped);
        c.rel(tag + "volume", volume_of(opt, *L.s), 2.0 * want_r * want_r * h);
        if (k > 0) {
            // every corner of this square lies on an edge of the one below
            const auto& below = layers[k - 1].v;
            double worst = 0;
            for (const auto& v : L.v) {
                double best = INFINITY;
                for (std::size_t i = 0; i < below.size(); ++i) {
                    best = std::min(best, segment_distance_2d(v, below[i], below[(i + 1) % below.size()]));
                }
                worst = std::max(worst, best);
            }
            c.near(tag + "corners on edges of layer " + std::to_string(k - 1), worst, 0);
        }
    }
    if (theta == 0) {
        c.near("identical stacked prisms at zero rotation", identical, 0);
    }
    return c.out;
}

std::vector<TestCase> build_cases() {
    std::vector<TestCase> v;
    v.push_back({"single_object_2d",
                 "Circle on the XY plane. Number slider for the radius: 2 to 20, default 20. Second number slider to "
                 "move the circle along Z: -10 to 10, default 0.",
                 "test1",
                 {{"radius", 2, 20, 20, 0, false}, {"z", -10, 10, 0, 0, false}},
                 {{{"radius", 20}, {"z", 0}}, {{"radius", 10}, {"z", 10}}, {{"radius", 2}, {"z", -10}},
                  {{"radius", 15}, {"z", 8}}},
                 circle_oracle});
    v.push_back({"single_object_3d",
                 "Closed cone with a flat top (a capped frustum). Number sliders: bottom radius 1 to 20, default 20, "
                 "2 decimals; top radius 1 to 20, default 10, 3 decimals; height 5 to 10, default 7, 1 decimal.",
                 "test2",
                 {{"r_bottom", 1, 20, 20, 2, false}, {"r_top", 1, 20, 10, 3, false}, {"height", 5, 10, 7, 1, false}},
                 {{{"r_bottom", 20}, {"r_top", 10}, {"height", 7}},
                  {{"r_bottom", 20}, {"r_top", 1}, {"height", 9.5}},
                  {{"r_bottom", 4}, {"r_top", 15}, {"height", 9.5}},
                  {{"r_bottom", 10}, {"r_top", 10}, {"height", 5}}},
                 frustum_oracle});
    v.push_back({"multi_object_3d",
                 "Round tower of stacked closed cylinders, every layer the same height. Each layer's radius is the "
                 "radius of the layer below times a reduction factor. Sliders: bottom radius 20 to 200, default 100, "
                 "1 decimal; layer height 1 to 20, default 10, 2 decimals; number of layers 1 to 20, default 10; "
                 "reduction factor 0.1 to 1.0, default 0.75, 3 decimals.",
                 "test3",
                 {{"radius", 20, 200, 100, 1, false},
                  {"height", 1, 20, 10, 2, false},
                  {"layers", 1, 20, 10, 0, true},
                  {"factor", 0.1, 1, 0.75, 3, false}},
                 {{{"radius", 100}, {"height", 10}, {"layers", 10}, {"factor", 0.75}},
                  {{"radius", 35.7}, {"height", 20}, {"layers", 4}, {"factor", 1}},
                  {{"radius", 200}, {"height", 20}, {"layers", 20}, {"factor", 0.9}},
                  {{"radius", 200}, {"height", 1}, {"layers", 10}, {"factor", 0.55}}},
                 round_tower_oracle});
    v.push_back({"recursive_multi_object_3d",
                 "Tower of stacked closed square prisms of equal height. Each layer's square is turned by a constant "
                 "angle against the one below and shrunk so its corners touch the edges of the square below (nested "
                 "squares). Sliders: bottom square circumradius 20 to 200, default 100, 1 decimal; layer height 1 to "
                 "20, default 10, 2 decimals; number of layers 1 to 20, default 10; rotation per layer 0 to 0.5 in "
                 "multiples of pi, default 0.25, 3 decimals.",
                 "test4",
                 {{"radius", 20, 200, 100, 1, false},
                  {"height", 1, 20, 10, 2, false},
                  {"layers", 1, 20, 10, 0, true},
                  {"rotation", 0, 0.5, 0.25, 3, false}},
                 {{{"radius", 100}, {"height", 10}, {"layers", 10}, {"rotation", 0.25}},
                  {{"radius", 50}, {"height", 20}, {"layers", 4}, {"rotation", 0}},
                  {{"radius", 200}, {"height", 15}, {"layers", 20}, {"rotation", 0.01}},
                  {{"radius", 200}, {"height", 1}, {"layers", 20}, {"rotation", 0.36}}},
                 square_tower_oracle});
    return v;
}

} // namespace

Params TestCase::defaults() const {
    Params p;
    for (const auto& s : sliders) {
        p[s.node] = s.value;
    }
    return p;
}

const std::vector<TestCase>& cases() {
    static const std::vector<TestCase> all = build_cases();
    return all;
}

const TestCase* find_case(std::string_view name) {
    for (const auto& c : cases()) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

const std::string& reference_script(std::string_view name) {
    static const std::map<std::string, std::string, std::less<>> scripts = [] {
        std::map<std::string, std::string, std::less<>> m;
        for (std::size_t i = 0; i < detail::kScriptsCount; ++i) {
            m.emplace(detail::kScriptsName[i], detail::kScriptsText[i]);
        }
        return m;
    }();
    const auto it = scripts.find(name);
    if (it == scripts.end()) {
        throw Error(Errc::InvalidArgument, "no reference script '" + std::string(name) + "'", std::string(name));
    }
    return it->second;
}

std::vector<Value> shown_geometry(const WorkflowGraph& graph) {
    std::vector<Value> out;
    for (const Node& n : graph.nodes()) {
        if (!n.preview) {
            continue;
        }
        for (const DataTree& tree : graph.outputs(n.id)) {
            for (const auto& [path, branch] : tree.branches()) {
                for (const Value& v : branch) {
                    if (v.is_geometry()) {
                        out.push_back(v);
                    }
                }
            }
        }
    }
    return out;
}

bool RowReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool CaseReport::pass() const {
    return std::all_of(setup.begin(), setup.end(), [](const Check& c) { return c.pass; }) &&
           std::all_of(rows.begin(), rows.end(), [](const RowReport& r) { return r.pass(); }) &&
           elapsed.count() < time_limit_s;
}

double CaseReport::max_delta() const {
    double d = 0;
    for (const auto& r : rows) {
        for (const auto& c : r.checks) {
            d = std::max(d, c.delta);
        }
    }
    return d;
}

CaseReport run_case(const TestCase& tc, const BenchOptions& options) {
    CaseReport report;
    report.name = tc.name;
    const auto start = std::chrono::steady_clock::now();
    const auto setup_fail = [&](std::string what, std::string detail) {
        report.setup.push_back({std::move(what), false, 0, std::move(detail)});
        report.elapsed = std::chrono::steady_clock::now() - start;
        return report;
    };

    const auto parsed = script::parse_script(reference_script(tc.script));
    if (!parsed.ok()) {
        return setup_fail("reference script parses", script::format_diagnostic(parsed.diagnostics.front()));
    }
    const auto diags = script::validate(parsed.ast, *builtin_registry());
    if (!diags.empty()) {
        return setup_fail("reference script validates clean", script::format_diagnostic(diags.front()));
    }
    std::optional<WorkflowGraph> graph;
    try {
        graph = script::execute(parsed.ast);
    } catch (const Error& e) {
        return setup_fail("reference script executes", e.what());
    }
    report.setup.push_back({"reference script executes", true, 0, {}});

    for (const auto& s : tc.sliders) {
        const Node* n = graph->find(s.node);
        const bool ok = n && n->descriptor->is_slider() &&
                        (n->descriptor->outputs.front().kind == ValueKind::Integer) == s.integer &&
                        n->state.at("min") == s.min && n->state.at("max") == s.max && n->state.at("value") == s.value &&
                        n->state.at("decimals") == s.decimals;
        std::string got = "missing";
        if (n && n->descriptor->is_slider()) {
            got = n->type_id() + " min " + num(n->state.at("min")) + " max " + num(n->state.at("max")) + " value " +
                  num(n->state.at("value")) + " decimals " + num(n->state.at("decimals"));
        }
        report.setup.push_back({"slider " + s.node + " spec", ok, 0, got});
    }

    for (const Params& row : tc.rows) {
        RowReport rr;
        rr.params = row;
        try {
            for (const auto& [node, value] : row) {
                const double stored = graph->set_param(node, "value", value);
                if (stored != value) {
                    rr.checks.push_back({"slider " + node + " accepts " + num(value), false, std::abs(stored - value),
                                         "stored " + num(stored)});
                }
            }
            graph->reevaluate_dirty();
            auto checks = tc.oracle(shown_geometry(*graph), row, options.oracle);
            rr.checks.insert(rr.checks.end(), checks.begin(), checks.end());
        } catch (const std::exception& e) {
            rr.checks.push_back({"evaluation", false, 0, e.what()});
        }
        report.rows.push_back(std::move(rr));
    }
    report.elapsed = std::chrono::steady_clock::now() - start;
    return report;
}

std::vector<CaseReport> run_benchmarks(const BenchOptions& options) {
    std::vector<CaseReport> out;
    for (const auto& tc : cases()) {
        if (!options.only || *options.only == tc.name) {
            out.push_back(run_case(tc, options));
        }
    }
    if (options.only && out.empty()) {
        throw Error(Errc::InvalidArgument, "unknown case '" + *options.only + "'", *options.only);
    }
    return out;
}

std::string format_report(const std::vector<CaseReport>& reports) {
    std::string out;
    char line[256];
    for (const auto& r : reports) {
        const auto passed = std::count_if(r.rows.begin(), r.rows.end(), [](const RowReport& x) { return x.pass(); });
        std::snprintf(line, sizeof line, "%s %-26s rows %zu/%zu  max delta %.2e  %.3f s\n", r.pass() ? "PASS" : "FAIL",
                      r.name.c_str(), static_cast<std::size_t>(passed), r.rows.size(), r.max_delta(), r.elapsed.count());
        out += line;
        for (const auto& c : r.setup) {
            if (!c.pass) {
                out += "    setup: " + c.what + (c.detail.empty() ? "" : " (" + c.detail + ")") + "\n";
            }
        }
        if (r.elapsed.count() >= r.time_limit_s) {
            out += "    runtime over " + num(r.time_limit_s) + " s\n";
        }
        for (const auto& row : r.rows) {
            for (const auto& c : row.checks) {
                if (c.pass) {
                    continue;
                }
                std::string params;
                for (const auto& [k, v] : row.params) {
                    params += (params.empty() ? "" : ", ") + k + "=" + num(v);
                }
                std::snprintf(line, sizeof line, "    {%s} %s: delta %.3e", params.c_str(), c.what.c_str(), c.delta);
                out += line;
                out += c.detail.empty() ? "\n" : " (" + c.detail + ")\n";
            }
        }
    }
    return out;
}

AcceptanceCheck acceptance_check(const TestCase& tc, OracleOptions options) {
    return [&tc, options](const WorkflowGraph& graph) {
        std::vector<script::Diagnostic> out;
        std::size_t failed = 0;
        for (const auto& c : tc.oracle(shown_geometry(graph), tc.defaults(), options)) {
            // a few concrete misses are enough feedback
            if (!c.pass && ++failed <= 3) {
                char delta[32];
                std::snprintf(delta, sizeof delta, "%.3g", c.delta);
                out.push_back({script::Severity::Warning, Errc::OracleMismatch,
                               "at default slider values, " + c.what + " is off (delta " + delta + ")" +
                                   (c.detail.empty() ? "" : "; " + c.detail),
                               {1, 1}, tc.name});
            }
        }
        if (failed > 3) {
            out.push_back({script::Severity::Warning, Errc::OracleMismatch,
                           std::to_string(failed - 3) + " more geometry checks fail", {1, 1}, tc.name});
        }
        return out;
    };
}

GenerationConfig fixture_config(const TestCase& tc) {
    GenerationConfig config;
    config.acceptance = acceptance_check(tc);
    return config;
}

Transcript record_fixture(const TestCase& tc, std::vector<std::string> responses) {
    ScriptedProvider scripted(std::move(responses));
    RecordingProvider recorder(scripted);
    generate_workflow(tc.request, recorder, builtin_registry(), fixture_config(tc));
    Transcript t = recorder.transcript();
    t.request = tc.request;
    t.case_name = tc.name;
    return t;
}

Transcript record_fixture_dir(const std::filesystem::path& dir) {
    const auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) {
            throw Error(Errc::InvalidArgument, "cannot read '" + p.string() + "'", p.string());
        }
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string name = slurp(dir / "case.txt");
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) {
        name.pop_back();
    }
    const TestCase* tc = find_case(name);
    if (!tc) {
        throw Error(Errc::InvalidArgument, dir.string() + ": unknown case '" + name + "'", name);
    }
    std::vector<std::string> responses;
    for (int i = 1; std::filesystem::exists(dir / (std::to_string(i) + ".txt")); ++i) {
        responses.push_back(slurp(dir / (std::to_string(i) + ".txt")));
    }
    return record_fixture(*tc, std::move(responses));
}

GenerationOutcome replay_fixture(const Transcript& transcript) {
    const TestCase* tc = transcript.case_name ? find_case(*transcript.case_name) : nullptr;
    if (!tc) {
        throw Error(Errc::InvalidArgument, "transcript does not name a known case");
    }
    ReplayProvider replay(transcript);
    return generate_workflow(transcript.request.value_or(tc->request), replay, builtin_registry(), fixture_config(*tc));
}

} // namespace bench
} // namespace vpg
