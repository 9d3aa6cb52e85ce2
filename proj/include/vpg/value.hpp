#pragma once

#include "vpg/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace vpg {

enum class ValueKind { Number, Integer, Boolean, Text, Vector, Point, Plane, Curve, Solid, Any };

std::string_view to_string(ValueKind kind);
std::optional<ValueKind> kind_from_string(std::string_view name);

// Whether a port of kind `port` accepts data of kind `incoming`.
// Integer widens to Number; Any on either side defers the check to runtime.
bool kind_accepts(ValueKind port, ValueKind incoming);

// ---------------------------------------------------------------- literals

struct Triple {
    double x = 0, y = 0, z = 0;
    friend bool operator==(const Triple&, const Triple&) = default;
};

enum class NamedPlane { XY, YZ, XZ };

// Source-level constant: `20`, `0.75`, `true`, `"text"`, `(0,0,1)`, `plane.xy`.
// Integers and reals stay distinct so documents round-trip exactly.
using Literal = std::variant<std::int64_t, double, bool, std::string, Triple, NamedPlane>;

std::string format_number(double v);
std::string format_literal(const Literal& lit);
// Parses the whole string as one literal; nullopt on anything else.
std::optional<Literal> parse_literal(std::string_view text);
// Kind the literal has when nothing constrains it.
ValueKind natural_kind(const Literal& lit);
std::optional<double> literal_as_number(const Literal& lit);

// ---------------------------------------------------------------- values

// One item flowing along a wire, tagged with its kind. Vector and Point share
// a representation but stay distinct kinds.
class Value {
public:
    using Data = std::variant<double, std::int64_t, bool, std::string, geo::Vector3, geo::Plane, geo::Curve, geo::Solid>;

    static Value number(double v) { return Value(ValueKind::Number, v); }
    static Value integer(std::int64_t v) { return Value(ValueKind::Integer, v); }
    static Value boolean(bool v) { return Value(ValueKind::Boolean, v); }
    static Value text(std::string v) { return Value(ValueKind::Text, std::move(v)); }
    static Value vector(const geo::Vector3& v) { return Value(ValueKind::Vector, v); }
    static Value point(const geo::Point3& v) { return Value(ValueKind::Point, v); }
    static Value plane(const geo::Plane& v) { return Value(ValueKind::Plane, v); }
    static Value curve(geo::Curve v) { return Value(ValueKind::Curve, std::move(v)); }
    static Value solid(geo::Solid v) { return Value(ValueKind::Solid, std::move(v)); }

    ValueKind kind() const { return kind_; }
    const Data& data() const { return data_; }

    // Accessors throw vpg::Error(EvaluationError) on a kind mismatch.
    // as_number() also accepts Integer.
    double as_number() const;
    std::int64_t as_integer() const;
    bool as_boolean() const;
    const std::string& as_text() const;
    const geo::Vector3& as_vector() const;  // Vector or Point
    const geo::Plane& as_plane() const;
    const geo::Curve& as_curve() const;
    const geo::Solid& as_solid() const;

    bool is_geometry() const { return kind_ == ValueKind::Curve || kind_ == ValueKind::Solid; }

    friend bool operator==(const Value& a, const Value& b) { return a.kind_ == b.kind_ && a.data_ == b.data_; }

private:
    Value(ValueKind k, Data d) : kind_(k), data_(std::move(d)) {}
    ValueKind kind_;
    Data data_;
};

std::string describe(const Value& v);

// Converts a literal for a port of kind `port`; nullopt if the literal does
// not fit (e.g. `2.5` for an Integer port, a triple for a Plane port).
std::optional<Value> literal_to_value(const Literal& lit, ValueKind port);

} // namespace vpg
