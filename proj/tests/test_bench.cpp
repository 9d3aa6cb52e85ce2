#include "doctest.h"

#include "vpg/bench.hpp"

#include <cmath>
#include <numbers>

using namespace vpg;
using namespace vpg::bench;

namespace {

WorkflowGraph reference_graph(const TestCase& tc) {
    const auto parsed = script::parse_script(reference_script(tc.script));
    REQUIRE(parsed.ok());
    auto g = script::execute(parsed.ast);
    g.evaluate();
    return g;
}

bool any_failed(const std::vector<Check>& checks) {
    for (const auto& c : checks) {
        if (!c.pass) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("reference scripts pass all four cases") {
    const auto reports = run_benchmarks();
    REQUIRE(reports.size() == 4);
    INFO(format_report(reports));
    for (const auto& r : reports) {
        CHECK_MESSAGE(r.pass(), r.name);
        CHECK(r.rows.size() == 4);
        CHECK(r.max_delta() < 1e-9);
        CHECK(r.elapsed.count() < 1.0);
    }
    CHECK(format_report(reports).find("PASS single_object_2d") == 0);
}

TEST_CASE("case table") {
    REQUIRE(cases().size() == 4);
    CHECK(cases()[0].name == "single_object_2d");
    CHECK(cases()[3].name == "recursive_multi_object_3d");
    for (const auto& tc : cases()) {
        // first row holds the slider defaults, every row stays in range
        CHECK(tc.rows.front() == tc.defaults());
        for (const auto& row : tc.rows) {
            for (const auto& s : tc.sliders) {
                REQUIRE(row.count(s.node) == 1);
                CHECK(row.at(s.node) >= s.min);
                CHECK(row.at(s.node) <= s.max);
            }
        }
    }
    CHECK(find_case("multi_object_3d") == &cases()[2]);
    CHECK(find_case("nope") == nullptr);
    CHECK_THROWS_AS(reference_script("test9"), Error);
}

TEST_CASE("closed forms at the defaults") {
    const double pi = std::numbers::pi;
    OracleOptions opt;
    // frustum r1=20, r2=10, h=7: V = pi*h/3*(r1^2 + r1 r2 + r2^2) = 4900 pi / 3
    {
        const auto& tc = *find_case("single_object_3d");
        const auto shown = shown_geometry(reference_graph(tc));
        REQUIRE(shown.size() == 1);
        CHECK(geo::volume(shown[0].as_solid()) == doctest::Approx(5131.268001).epsilon(1e-9));
        CHECK(4900 * pi / 3 == doctest::Approx(5131.268001).epsilon(1e-9));
    }
    // tower: top layer radius 100*0.75^9, total volume pi*h*sum r_k^2
    {
        const auto& tc = *find_case("multi_object_3d");
        const auto shown = shown_geometry(reference_graph(tc));
        REQUIRE(shown.size() == 10);
        double total = 0, expect = 0, r = 100;
        for (const auto& v : shown) {
            total += geo::volume(v.as_solid());
        }
        for (int k = 0; k < 10; ++k, r *= 0.75) {
            expect += pi * r * r * 10;
        }
        CHECK(total == doctest::Approx(expect).epsilon(1e-12));
        const auto& top = std::get<geo::Extrusion>(shown.back().as_solid().shape());
        CHECK(top.base.as_circle().radius == doctest::Approx(7.5084686279296875).epsilon(1e-12));
    }
    // nested squares at 45 degrees: each circumradius shrinks by 1/sqrt(2)
    {
        const auto& tc = *find_case("recursive_multi_object_3d");
        const auto shown = shown_geometry(reference_graph(tc));
        REQUIRE(shown.size() == 10);
        const auto& last = std::get<geo::Extrusion>(shown.back().as_solid().shape());
        const auto& v = last.base.as_polyline().vertices;
        REQUIRE(v.size() == 4);
        const double cx = (v[0].x() + v[1].x() + v[2].x() + v[3].x()) / 4;
        const double cy = (v[0].y() + v[1].y() + v[2].y() + v[3].y()) / 4;
        CHECK(std::hypot(v[0].x() - cx, v[0].y() - cy) == doctest::Approx(100.0 / std::pow(std::sqrt(2.0), 9)));
        CHECK(v[0].z() == doctest::Approx(90));
    }
    (void)opt;
}

TEST_CASE("shown geometry follows preview flags") {
    auto g = reference_graph(*find_case("single_object_2d"));
    auto shown = shown_geometry(g);
    REQUIRE(shown.size() == 1);
    CHECK(shown[0].kind() == ValueKind::Curve);
    g.set_preview("c", true);
    g.evaluate();
    CHECK(shown_geometry(g).size() == 2);
    g.set_preview("m", false);
    g.set_preview("c", false);
    CHECK(shown_geometry(g).empty());
}

TEST_CASE("oracles reject wrong geometry") {
    const auto& t1 = *find_case("single_object_2d");
    const auto shown = shown_geometry(reference_graph(t1));
    CHECK_FALSE(any_failed(t1.oracle(shown, {{"radius", 20}, {"z", 0}}, {})));
    auto checks = t1.oracle(shown, {{"radius", 19}, {"z", 0}}, {});
    CHECK(any_failed(checks));
    double worst = 0;
    for (const auto& c : checks) {
        worst = std::max(worst, c.delta);
    }
    CHECK(worst == doctest::Approx(1.0));
    CHECK(any_failed(t1.oracle(shown, {{"radius", 20}, {"z", 1e-6}}, {})));
    CHECK(any_failed(t1.oracle({}, t1.defaults(), {})));

    // square tower seen through the round-tower oracle
    const auto& t3 = *find_case("multi_object_3d");
    const auto& t4 = *find_case("recursive_multi_object_3d");
    CHECK(any_failed(t3.oracle(shown_geometry(reference_graph(t4)), t3.defaults(), {})));
    CHECK(any_failed(t4.oracle(shown_geometry(reference_graph(t3)), t4.defaults(), {})));
}

TEST_CASE("a broken volume is caught") {
    BenchOptions broken;
    broken.oracle.volume = [](const geo::Solid& s) { return geo::volume(s) * (1 + 1e-6); };
    for (const auto& r : run_benchmarks(broken)) {
        if (r.name == "single_object_2d") {
            CHECK(r.pass());
        } else {
            CHECK_MESSAGE(!r.pass(), r.name);
        }
    }
    const auto text = format_report(run_benchmarks(broken));
    CHECK(text.find("FAIL single_object_3d") != std::string::npos);
    CHECK(text.find("frustum volume") != std::string::npos);
}

TEST_CASE("case filter") {
    BenchOptions only;
    only.only = "single_object_3d";
    const auto reports = run_benchmarks(only);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].name == "single_object_3d");
    only.only = "bogus";
    CHECK_THROWS_AS(run_benchmarks(only), Error);
}

TEST_CASE("slider spec mismatch fails setup") {
    TestCase tc = *find_case("single_object_2d");
    tc.sliders[0].decimals = 2;
    const auto r = run_case(tc);
    CHECK_FALSE(r.pass());
    CHECK(format_report({r}).find("setup: slider radius spec") != std::string::npos);
}

TEST_CASE("acceptance check") {
    const auto& t3 = *find_case("multi_object_3d");
    auto g = reference_graph(t3);
    const auto accept = acceptance_check(t3);
    CHECK(accept(g).empty());

    g.set_param("factor", "value", 0.8);
    g.evaluate();
    const auto diags = accept(g);
    REQUIRE_FALSE(diags.empty());
    for (const auto& d : diags) {
        CHECK(d.code == Errc::OracleMismatch);
        CHECK(d.severity == script::Severity::Warning);
        CHECK(d.subject == "multi_object_3d");
    }
    CHECK(diags[0].message.find("default slider values") != std::string::npos);
}
