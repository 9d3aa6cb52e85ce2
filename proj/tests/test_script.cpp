#include "doctest.h"

#include "support/script_gen.hpp"
#include "vpg/script.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

using namespace vpg;
using namespace vpg::script;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string reference(int n) { return read_file(std::string(VPG_SCRIPT_DIR) + "/test" + std::to_string(n) + ".gfs"); }

Ast parse_ok(std::string_view text) {
    auto r = parse_script(text);
    for (const auto& d : r.diagnostics) {
        INFO(format_diagnostic(d));
    }
    REQUIRE(r.ok());
    return r.ast;
}

std::vector<Errc> codes_of(std::string_view text) {
    return testing::error_codes(validate(parse_ok(text), *builtin_registry()));
}

} // namespace

TEST_CASE("parse: add with position and state block") {
    const Ast ast = parse_ok("add params.number_slider radius at (0,0) { min: 2, max: 20, value: 20, decimals: 0 }");
    REQUIRE(ast.statements.size() == 1);
    const auto& a = std::get<AddStmt>(ast.statements[0]);
    CHECK(a.type_id == "params.number_slider");
    CHECK(a.node_id == "radius");
    REQUIRE(a.at);
    CHECK(a.at->x == 0);
    CHECK(a.at->y == 0);
    REQUIRE(a.block.size() == 4);
    CHECK(a.block[0].key == "min");
    CHECK(literal_as_number(a.block[0].value) == 2.0);
    CHECK(a.block[1].key == "max");
    CHECK(literal_as_number(a.block[1].value) == 20.0);
    CHECK(a.block[2].key == "value");
    CHECK(a.block[3].key == "decimals");
    CHECK_FALSE(a.block[0].is_input());
    CHECK(a.loc.line == 1);
    CHECK(a.loc.column == 1);
    CHECK(a.id_loc.column == 26);
}

TEST_CASE("parse: every statement form") {
    const Ast ast = parse_ok(R"(# header comment
add curve.circle c at (-240.5, 1e2) {
  0: plane.xz,
  1: 3   # trailing comment
}
add transform.move m
connect c.0:circle -> m.0
set m.1 = (0, 0, -1.5)
set m.1 = "a \"b\"\n"
show m
hide c
layout auto
)");
    REQUIRE(ast.statements.size() == 8);
    const auto& a = std::get<AddStmt>(ast.statements[0]);
    CHECK(a.loc.line == 2);
    CHECK(a.at->x == -240.5);
    CHECK(a.at->y == 100);
    REQUIRE(a.block.size() == 2);
    CHECK(a.block[0].is_input());
    CHECK(a.block[0].input_index() == 0);
    CHECK(std::get<NamedPlane>(a.block[0].value) == NamedPlane::XZ);
    CHECK(std::get<std::int64_t>(a.block[1].value) == 3);
    CHECK(a.block[1].loc.line == 4);

    const auto& c = std::get<ConnectStmt>(ast.statements[2]);
    CHECK(c.from.node == "c");
    CHECK(c.from.port == 0);
    CHECK(c.from.name == "circle");
    CHECK(c.to.node == "m");
    CHECK_FALSE(c.to.name);
    CHECK(c.loc.line == 7);
    CHECK(c.to.loc.column == 23);

    CHECK(std::get<Triple>(std::get<AssignStmt>(ast.statements[3]).value) == Triple{0, 0, -1.5});
    CHECK(std::get<std::string>(std::get<AssignStmt>(ast.statements[4]).value) == "a \"b\"\n");
    CHECK(std::get<PreviewStmt>(ast.statements[5]).show);
    CHECK_FALSE(std::get<PreviewStmt>(ast.statements[6]).show);
    CHECK(std::holds_alternative<LayoutStmt>(ast.statements[7]));
}

TEST_CASE("parse: empty and comment-only input") {
    CHECK(parse_ok("").statements.empty());
    CHECK(parse_ok("\n\n# nothing here\n   \n").statements.empty());
}

TEST_CASE("parse errors carry locations and never yield a partial AST") {
    const auto r = parse_script("add curve.circle c\nconnect c.0 -> \nadd params.number_slider s { min 1 }\nshow\n");
    CHECK_FALSE(r.ok());
    REQUIRE(r.diagnostics.size() == 3);
    for (const auto& d : r.diagnostics) {
        CHECK(d.code == Errc::ParseError);
        CHECK(d.severity == Severity::Error);
        CHECK(d.loc.line > 0);
        CHECK(d.loc.column > 0);
    }
    CHECK(r.diagnostics[0].loc.line == 2);
    CHECK(r.diagnostics[1].loc.line == 3);
    CHECK(r.diagnostics[1].loc.column == 34);
    CHECK(r.diagnostics[2].loc.line == 4);
    CHECK(format_diagnostic(r.diagnostics[1]).rfind("line 3, column 34: error ParseError: ", 0) == 0);

    for (const char* bad : {"frobnicate x", "add", "add curve.circle", "connect a.0 b.1", "connect a -> b.1",
                            "set a.1 = ", "set a.1 = (1,2)", "layout manual", "add curve.circle c { 1: 2",
                            "show a b", "set a.1 = \"open", "connect a.9999999 -> b.0", "add curve.circle c at (1)",
                            "set a.1 = @"}) {
        CAPTURE(bad);
        const auto res = parse_script(bad);
        CHECK_FALSE(res.ok());
        CHECK(res.diagnostics.front().code == Errc::ParseError);
    }
}

TEST_CASE("column counts characters, not bytes") {
    const auto r = parse_script("set a.1 = \"\xc3\xa9\xc3\xa9\" @");
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].loc.column == 16);
}

TEST_CASE("print/parse round trip") {
    for (int n = 1; n <= 4; ++n) {
        const Ast a = parse_ok(reference(n));
        const Ast b = parse_ok(print_script(a));
        CHECK(same_structure(a, b));
        CHECK(print_script(b) == print_script(a));
    }
    std::mt19937_64 rng(7);
    const auto registry = builtin_registry();
    for (int i = 0; i < 300; ++i) {
        const Ast a = testing::random_valid_script(rng, *registry);
        const std::string text = print_script(a);
        CAPTURE(text);
        const auto r = parse_script(text);
        REQUIRE(r.ok());
        CHECK(same_structure(a, r.ast));
    }
}

TEST_CASE("validator: forward reference and unknown nodes") {
    const auto r = parse_script("connect radius.0 -> c.1\nadd curve.circle c\nadd params.number_slider radius\n");
    REQUIRE(r.ok());
    const auto diags = validate(r.ast, *builtin_registry());
    REQUIRE_FALSE(diags.empty());
    CHECK(diags[0].code == Errc::UnknownNode);
    CHECK(diags[0].loc.line == 1);
    CHECK(diags[0].subject == "radius");
    CHECK(codes_of("show ghost") == std::vector{Errc::UnknownNode});
}

TEST_CASE("validator: each failure kind") {
    using V = std::vector<Errc>;
    const auto r = parse_script("add params.number_slider r\nadd surface.Component_Extrude e\nconnect r.0 -> e.0\n");
    REQUIRE(r.ok());
    const auto diags = validate(r.ast, *builtin_registry());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == Errc::UnknownComponent);
    CHECK(diags[0].loc.line == 2);
    CHECK(diags[0].loc.column == 5);
    CHECK(diags[0].subject == "surface.Component_Extrude");
    CHECK(diags[0].message.find("surface.extrude") != std::string::npos);

    CHECK(codes_of("add params.number_slider r\nadd params.number_slider s\nconnect r.0 -> s.0") == V{Errc::SliderMisuse});
    CHECK(codes_of("add params.number_slider s\nset s.0 = 4") == V{Errc::SliderMisuse});
    CHECK(codes_of("add curve.circle c\nadd curve.circle c") == V{Errc::DuplicateNodeId});
    CHECK(codes_of("add curve.circle c\nadd transform.move m\nconnect c.1 -> m.0") == V{Errc::UnknownPort});
    CHECK(codes_of("add curve.circle c\nset c.2 = 1") == V{Errc::UnknownPort});
    CHECK(codes_of("add curve.circle c { 5: 1 }") == V{Errc::UnknownPort});
    CHECK(codes_of("add curve.circle c\nadd curve.circle d\nconnect c.0 -> d.1") == V{Errc::KindMismatch});
    CHECK(codes_of("add curve.circle c { 1: true }") == V{Errc::BadLiteral});
    CHECK(codes_of("add curve.circle c\nset c.0 = 3") == V{Errc::BadLiteral});
    CHECK(codes_of("add curve.polygon p { 2: 4.5 }") == V{Errc::BadLiteral});
    CHECK(codes_of("add params.number_slider s { min: 3, max: 1 }") == V{Errc::BadLiteral});
    CHECK(codes_of("add params.number_slider s { decimals: 2.5 }") == V{Errc::BadLiteral});
    CHECK(codes_of("add params.number_slider s { value: \"big\" }") == V{Errc::BadLiteral});
    CHECK(codes_of("add params.number_slider s { step: 1 }") == V{Errc::UnknownField});
    CHECK(codes_of("add curve.circle c { radius: 1 }") == V{Errc::NotStateful});
    CHECK(codes_of("add maths.add a\nadd maths.add b\nconnect a.0 -> b.0\nconnect b.0 -> a.0\nset a.1 = 1\nset b.1 = 1") ==
          V{Errc::CycleCreated});
    CHECK(codes_of("add maths.add a\nset a.1 = 1\nconnect a.0 -> a.0") == V{Errc::CycleCreated});
    CHECK(codes_of("add maths.add a { 0: 1, 1: 2 }\nadd maths.add b { 1: 1 }\nconnect a.0 -> b.0\nconnect a.0 -> b.0") ==
          V{Errc::InputOccupied});
    CHECK(codes_of("add maths.add a { 0: 1, 1: 2 }\nadd maths.add b { 1: 1 }\nconnect a.0 -> b.0\nset b.0 = 2") ==
          V{Errc::InputOccupied});
}

TEST_CASE("validator: unbound required inputs only without other errors") {
    auto diags = validate(parse_ok("add maths.add a\nadd surface.extrude e { 2: false }"), *builtin_registry());
    REQUIRE(diags.size() == 3);
    for (const auto& d : diags) {
        CHECK(d.code == Errc::MissingRequiredInput);
    }
    CHECK(diags[0].subject == "a.0");
    CHECK(diags[1].subject == "a.1");
    CHECK(diags[2].subject == "e.0");
    CHECK(diags[2].loc.line == 2);

    diags = validate(parse_ok("add maths.add a\nadd ghost.thing g"), *builtin_registry());
    CHECK(testing::error_codes(diags) == std::vector{Errc::UnknownComponent});

    // literal later overridden by a wire still counts as bound
    CHECK(codes_of("add maths.add a { 0: 1, 1: 1 }\nadd maths.add b { 0: 1 }\nconnect a.0 -> b.1").empty());
}

TEST_CASE("validator: port name suffix is a checked comment") {
    auto diags = validate(parse_ok(reference(1)), *builtin_registry());
    CHECK(diags.empty());

    diags = validate(parse_ok("add params.number_slider r\nadd curve.circle c\nconnect r.0:value -> c.1:diameter"),
                     *builtin_registry());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Warning);
    CHECK(diags[0].code == Errc::PortNameMismatch);
    CHECK(diags[0].subject == "c.1");
    CHECK_FALSE(has_errors(diags));
    CHECK_NOTHROW(execute(parse_ok("add params.number_slider r\nadd curve.circle c\nconnect r.0:value -> c.1:diameter")));
}

TEST_CASE("shipped reference scripts validate clean") {
    for (int n = 1; n <= 4; ++n) {
        CAPTURE(n);
        const auto diags = validate(parse_ok(reference(n)), *builtin_registry());
        for (const auto& d : diags) {
            INFO(format_diagnostic(d));
        }
        CHECK(diags.empty());
    }
}

TEST_CASE("execute: first reference script") {
    WorkflowGraph g = execute(parse_ok(reference(1)));
    CHECK(g.nodes().size() == 5);
    CHECK(g.wires().size() == 4);
    CHECK(g.node("radius").state.at("value") == 20);
    CHECK(g.node("z").state.at("min") == -10);
    CHECK_FALSE(g.node("c").preview);
    CHECK(g.node("m").preview);
    // layout auto: depth columns
    CHECK(g.node("radius").position == Position{0, 0});
    CHECK(g.node("z").position == Position{0, 120});
    CHECK(g.node("c").position == Position{240, 0});
    CHECK(g.node("m").position == Position{480, 0});

    g.evaluate();
    const auto& out = g.outputs("m")[0];
    REQUIRE(out.item_count() == 1);
    const auto circle = out.items().front().as_curve().as_circle();
    CHECK(circle.radius == 20);
    CHECK(circle.plane.origin().norm() == 0);
}

TEST_CASE("execute: layout rules") {
    // explicit positions are kept; the rest get auto-layout positions
    WorkflowGraph g = execute(parse_ok("add maths.pi p at (500, 500)\nadd maths.pi q\nconnect p.0 -> q.0"));
    CHECK(g.node("p").position == Position{500, 500});
    CHECK(g.node("q").position == Position{240, 0});
    g = execute(parse_ok("add maths.pi p at (500, 500)\nadd maths.pi q\nlayout auto"));
    CHECK(g.node("p").position == Position{0, 0});
    CHECK(g.node("q").position == Position{0, 120});

    g = execute(parse_ok("add maths.pi p\nadd curve.circle c\nadd vector.unit_z u"));
    CHECK(g.nodes().size() == 3);
    CHECK(g.wires().empty());
}

TEST_CASE("execute: errors carry the script line") {
    try {
        execute(parse_ok("add maths.pi p\n\nadd ghost.x g\n"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownComponent);
        CHECK(std::string(e.what()).rfind("line 3: ", 0) == 0);
    }
    try {
        execute(parse_ok("add params.number_slider s\nadd curve.circle c\nconnect c.0 -> s.0"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SliderMisuse);
        CHECK(std::string(e.what()).rfind("line 3: ", 0) == 0);
    }
}

TEST_CASE("execute: third reference script builds the tower") {
    WorkflowGraph g = execute(parse_ok(reference(3)));
    g.evaluate();
    const auto& tower = g.outputs("tower")[0];
    REQUIRE(tower.item_count() == 10);
    const auto items = tower.items();
    for (int k = 0; k < 10; ++k) {
        CAPTURE(k);
        const auto& ex = std::get<geo::Extrusion>(items[static_cast<std::size_t>(k)].as_solid().shape());
        const double want = 100 * std::pow(0.75, k);
        CHECK(std::abs(ex.base.as_circle().radius - want) <= 1e-9 * want);
        CHECK(ex.base.as_circle().plane.origin().z() == doctest::Approx(10.0 * k));
    }
}

TEST_CASE("mutation families trigger exactly their code") {
    const auto registry = builtin_registry();
    std::mt19937_64 rng(20240611);
    for (auto m : {testing::Mutation::TruncateComponent, testing::Mutation::BumpPortIndex,
                   testing::Mutation::RetargetToSlider}) {
        int generated = 0;
        while (generated < 200) {
            const Ast base = testing::random_valid_script(rng, *registry);
            const auto mutated = testing::mutate(base, m, rng, *registry);
            if (!mutated) {
                continue;
            }
            ++generated;
            const auto codes = testing::error_codes(validate(*mutated, *registry));
            CAPTURE(testing::to_string(m));
            CAPTURE(print_script(*mutated));
            REQUIRE(codes == std::vector{testing::expected_code(m)});
        }
    }
}

TEST_CASE("valid scripts execute without structural errors") {
    const auto registry = builtin_registry();
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        const Ast ast = testing::random_valid_script(rng, *registry);
        CAPTURE(print_script(ast));
        const auto diags = validate(ast, *registry);
        for (const auto& d : diags) {
            INFO(format_diagnostic(d));
        }
        REQUIRE_FALSE(has_errors(diags));
        REQUIRE_NOTHROW(execute(ast, registry));
    }
}
