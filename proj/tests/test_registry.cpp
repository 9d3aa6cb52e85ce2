#include "doctest.h"

#include "vpg/error.hpp"
#include "vpg/registry.hpp"
#include "support/search_oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

using namespace vpg;
using vpg::testing::oracle_ranking;
using vpg::testing::oracle_score;

namespace {

std::size_t count_lines_starting(const std::string& text, const std::string& prefix) {
    std::size_t n = 0, pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        if (line.rfind(prefix, 0) == 0) {
            ++n;
        }
        if (nl == std::string::npos) {
            break;
        }
        pos = nl + 1;
    }
    return n;
}

} // namespace

TEST_CASE("builtin registry contents") {
    const auto reg = builtin_registry();
    for (const char* id : {"params.number_slider", "params.integer_slider", "vector.unit_z", "vector.construct_plane",
                           "curve.circle", "curve.polygon", "transform.move", "transform.rotate", "sets.series",
                           "sets.flatten_tree", "maths.power", "maths.multiply", "maths.add", "maths.divide",
                           "maths.expression", "surface.extrude", "surface.loft", "analysis.area"}) {
        CHECK_MESSAGE(reg->find(id) != nullptr, id);
    }
    std::set<std::string> categories;
    for (const auto& d : reg->all()) {
        categories.insert(d.category);
        CHECK_FALSE(d.nickname.empty());
    }
    CHECK(categories == std::set<std::string>{"Analysis", "Curve", "Maths", "Params", "Sets", "Surface", "Transform",
                                              "Vector"});
    CHECK(reg->find("nonexistent.id") == nullptr);
    CHECK(reg->find("surface.Component_Extrude") == nullptr);
}

TEST_CASE("move descriptor") {
    const auto* move = builtin_registry()->find("transform.move");
    REQUIRE(move);
    REQUIRE(move->inputs.size() == 2);
    CHECK(move->inputs[0].name == "Geometry");
    CHECK(move->inputs[0].index == 0);
    CHECK(move->inputs[0].required());
    CHECK(move->inputs[1].index == 1);
    CHECK(move->inputs[1].kind == ValueKind::Vector);
    CHECK(move->inputs[1].default_value == Literal{Triple{0, 0, 0}});
    REQUIRE(move->outputs.size() == 1);
    CHECK(move->outputs[0].name == "Geometry");
}

TEST_CASE("slider descriptor") {
    const auto* s = builtin_registry()->find("params.number_slider");
    REQUIRE(s);
    CHECK(s->inputs.empty());
    REQUIRE(s->outputs.size() == 1);
    CHECK(s->outputs[0].kind == ValueKind::Number);
    CHECK(s->is_slider());
    std::set<std::string> fields;
    for (const auto& f : s->state_schema) {
        fields.insert(f.name);
    }
    CHECK(fields == std::set<std::string>{"min", "max", "value", "decimals"});
    CHECK(builtin_registry()->find("params.integer_slider")->outputs[0].kind == ValueKind::Integer);
}

TEST_CASE("registry invariants are enforced") {
    ComponentDescriptor d;
    d.type_id = "x.y";
    d.nickname = "Y";
    CHECK_NOTHROW(Registry({d}));
    CHECK_THROWS_AS(Registry({d, d}), Error);
    ComponentDescriptor gap = d;
    PortDescriptor a;
    a.index = 1;
    a.name = "A";
    gap.inputs.push_back(a);
    CHECK_THROWS_AS(Registry({gap}), Error);
    ComponentDescriptor nonick = d;
    nonick.nickname.clear();
    CHECK_THROWS_AS(Registry({nonick}), Error);
    ComponentDescriptor bad_default = d;
    a.index = 0;
    a.kind = ValueKind::Integer;
    a.default_value = Literal{2.5};
    bad_default.inputs.push_back(a);
    CHECK_THROWS_AS(Registry({bad_default}), Error);
}

TEST_CASE("export_docs") {
    const auto reg = builtin_registry();
    const std::string doc = export_docs(*reg);
    CHECK(count_lines_starting(doc, "## ") == reg->size());
    CHECK(export_docs(Registry{}).empty());

    SUBCASE("circle record carries every port field") {
        const auto* circle = reg->find("curve.circle");
        const std::string rec = render_record(*circle);
        for (const char* meta : {"- Name: Circle", "- Nickname: Cir", "- Category: Curve", "- Description: ",
                                 "- Default Preview Display: true"}) {
            CHECK_MESSAGE(rec.find(meta) != std::string::npos, meta);
        }
        for (const auto& p : circle->inputs) {
            const auto at = rec.find("#### Input " + std::to_string(p.index));
            REQUIRE(at != std::string::npos);
            const std::string section = rec.substr(at, rec.find("\n\n", at) - at);
            CHECK(section.find("- Name: " + p.name) != std::string::npos);
            CHECK(section.find("- Description: " + p.description) != std::string::npos);
            CHECK(section.find("- Type: " + std::string(to_string(p.kind))) != std::string::npos);
            CHECK(section.find("- Access: ") != std::string::npos);
            CHECK(section.find(std::string("- If optional: ") + (p.optional ? "true" : "false")) != std::string::npos);
            CHECK(section.find("- Default value: " + format_literal(*p.default_value)) != std::string::npos);
        }
        for (const auto& p : circle->outputs) {
            const auto at = rec.find("#### Output " + std::to_string(p.index));
            REQUIRE(at != std::string::npos);
            const std::string section = rec.substr(at);
            CHECK(section.find("- Name: " + p.name) != std::string::npos);
            CHECK(section.find("- Data structure: " + p.data_structure_note) != std::string::npos);
        }
        // Field order follows the record layout: metadata, inputs, outputs.
        CHECK(rec.find("- Default Preview Display") < rec.find("### Inputs"));
        CHECK(rec.find("### Inputs") < rec.find("### Outputs"));
    }

    SUBCASE("round trip") {
        const auto parsed = parse_docs(doc);
        REQUIRE(parsed.size() == reg->size());
        for (std::size_t i = 0; i < parsed.size(); ++i) {
            CHECK(parsed[i] == reg->all()[i]);
        }
    }

    SUBCASE("malformed documents are rejected with a line number") {
        std::string broken = doc;
        broken.replace(broken.find("- Type: Any"), 11, "- Type: Blob");
        try {
            parse_docs(broken);
            FAIL("expected MalformedDocument");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::MalformedDocument);
            CHECK(std::string(e.what()).find("line ") == 0);
        }
    }
}

TEST_CASE("json catalog") {
    const auto reg = builtin_registry();
    const auto j = nlohmann::json::parse(export_catalog_json(*reg));
    REQUIRE(j.size() == reg->size());
    const auto move = *std::find_if(j.begin(), j.end(), [](const auto& c) { return c["type_id"] == "transform.move"; });
    for (const char* key : {"type_id", "name", "nickname", "category", "description", "default_preview", "inputs",
                            "outputs", "state_schema"}) {
        CHECK(move.contains(key));
    }
    CHECK(move["inputs"][1]["default"] == nlohmann::json::array({0.0, 0.0, 0.0}));
    CHECK(move["inputs"][0]["default"].is_null());
    for (const char* key : {"index", "name", "description", "kind", "optional", "default", "access"}) {
        CHECK(move["inputs"][0].contains(key));
    }
    CHECK(move["outputs"][0].contains("data_structure_note"));
}

TEST_CASE("search") {
    const auto reg = builtin_registry();
    const SearchIndex index(*reg);

    SUBCASE("move geometry along vector") {
        const auto hits = index.search("move geometry along vector", 3);
        REQUIRE(hits.size() == 3);
        CHECK(hits[0].chunk.type_id == "transform.move");
        const auto expect = oracle_ranking(*reg, {"move", "geometry", "along", "vector"});
        for (std::size_t i = 0; i < hits.size(); ++i) {
            CHECK(hits[i].chunk.type_id == expect[i]);
        }
        CHECK(hits[0].score == oracle_score(*reg->find("transform.move"), {"move", "geometry", "along", "vector"}));
    }
    SUBCASE("slider") {
        const auto hits = index.search("slider", 2);
        std::set<std::string> ids = {hits[0].chunk.type_id, hits[1].chunk.type_id};
        CHECK(ids == std::set<std::string>{"params.integer_slider", "params.number_slider"});
    }
    SUBCASE("oracle agreement over many queries") {
        for (const char* q : {"circle radius", "extrude a closed curve", "flatten tree branches", "power exponent",
                              "unit z vector", "rotate plane angle", "series of numbers count", "loft two curves",
                              "area centroid", "polygon segments"}) {
            const auto hits = index.search(q, 5);
            const auto expect = oracle_ranking(*reg, tokenize(q));
            for (std::size_t i = 0; i < hits.size(); ++i) {
                CHECK_MESSAGE(hits[i].chunk.type_id == expect[i], q);
            }
        }
    }
    SUBCASE("stopword-only query still ranks k chunks by id") {
        const auto hits = index.search("the of and", 4);
        REQUIRE(hits.size() == 4);
        CHECK(hits[0].score == 0);
        CHECK(hits[0].chunk.type_id == reg->all()[0].type_id);
        CHECK(hits[3].chunk.type_id == reg->all()[3].type_id);
    }
    SUBCASE("determinism") {
        const auto a = index.search("draw a circle and move it", 8);
        const auto b = SearchIndex(*reg).search("draw a circle and move it", 8);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].chunk.type_id == b[i].chunk.type_id);
            CHECK(a[i].chunk.text == b[i].chunk.text);
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_WITH_AS(index.search("", 5), "search query is empty", Error);
        CHECK_THROWS_AS(index.search("circle", 0), Error);
    }
    SUBCASE("pluggable scorer") {
        struct Reverse final : Scorer {
            double score(const IndexedDoc& doc, const std::vector<std::string>&) const override {
                return -static_cast<double>(doc.chunk.type_id.size());
            }
        };
        const SearchIndex custom(*reg, std::make_shared<Reverse>());
        const auto hits = custom.search("anything", 1);
        CHECK(hits[0].chunk.type_id.size() ==
              std::min_element(reg->all().begin(), reg->all().end(), [](const auto& a, const auto& b) {
                  return a.type_id.size() < b.type_id.size();
              })->type_id.size());
    }
}
