#include "vpg/value.hpp"

#include "vpg/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace vpg {

namespace {

constexpr std::array<std::string_view, 10> kKindNames = {"Number", "Integer", "Boolean", "Text",  "Vector",
                                                         "Point",  "Plane",   "Curve",   "Solid", "Any"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::optional<Literal> parse_number(std::string_view s) {
    if (s.empty()) {
        return std::nullopt;
    }
    const bool integral = s.find_first_of(".eE") == std::string_view::npos;
    if (integral) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && p == s.data() + s.size()) {
            return Literal{v};
        }
        return std::nullopt;
    }
    double d = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(d)) {
        return std::nullopt;
    }
    // from_chars accepts "inf"/"nan" spellings without '.', but those were
    // excluded above; reject a leading '.' or '+' to keep one spelling.
    if (s.front() == '.' || s.front() == '+') {
        return std::nullopt;
    }
    return Literal{d};
}

std::optional<std::string> parse_quoted(std::string_view s) {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') {
        return std::nullopt;
    }
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        char c = s[i];
        if (c == '"') {
            return std::nullopt;
        }
        if (c == '\\') {
            if (i + 2 >= s.size()) {
                return std::nullopt;
            }
            switch (s[++i]) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            default: return std::nullopt;
            }
            continue;
        }
        out.push_back(c);
    }
    return out;
}

[[noreturn]] void kind_error(const Value& v, std::string_view wanted) {
    throw Error(Errc::EvaluationError,
                "expected " + std::string(wanted) + " but got " + std::string(to_string(v.kind())));
}

} // namespace

std::string_view to_string(ValueKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<ValueKind> kind_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) {
            return static_cast<ValueKind>(i);
        }
    }
    return std::nullopt;
}

bool kind_accepts(ValueKind port, ValueKind incoming) {
    if (port == incoming || port == ValueKind::Any || incoming == ValueKind::Any) {
        return true;
    }
    return port == ValueKind::Number && incoming == ValueKind::Integer;
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string s(buf.data(), p);
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string format_literal(const Literal& lit) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_number(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
                std::string out = "\"";
                for (char c : v) {
                    switch (c) {
                    case '"': out += "\\\""; break;
                    case '\\': out += "\\\\"; break;
                    case '\n': out += "\\n"; break;
                    case '\t': out += "\\t"; break;
                    default: out.push_back(c);
                    }
                }
                return out + "\"";
            } else if constexpr (std::is_same_v<T, Triple>) {
                return "(" + format_number(v.x) + "," + format_number(v.y) + "," + format_number(v.z) + ")";
            } else {
                switch (v) {
                case NamedPlane::XY: return "plane.xy";
                case NamedPlane::YZ: return "plane.yz";
                case NamedPlane::XZ: return "plane.xz";
                }
                return "plane.xy";
            }
        },
        lit);
}

std::optional<Literal> parse_literal(std::string_view text) {
    const std::string_view s = trim(text);
    if (s == "true") {
        return Literal{true};
    }
    if (s == "false") {
        return Literal{false};
    }
    if (s == "plane.xy") {
        return Literal{NamedPlane::XY};
    }
    if (s == "plane.yz") {
        return Literal{NamedPlane::YZ};
    }
    if (s == "plane.xz") {
        return Literal{NamedPlane::XZ};
    }
    if (!s.empty() && s.front() == '"') {
        if (auto q = parse_quoted(s)) {
            return Literal{std::move(*q)};
        }
        return std::nullopt;
    }
    if (!s.empty() && s.front() == '(') {
        if (s.back() != ')') {
            return std::nullopt;
        }
        std::string_view body = s.substr(1, s.size() - 2);
        std::array<double, 3> xyz{};
        for (int i = 0; i < 3; ++i) {
            const auto comma = body.find(',');
            if ((i < 2) != (comma != std::string_view::npos)) {
                return std::nullopt;
            }
            const auto part = parse_number(trim(body.substr(0, comma)));
            if (!part) {
                return std::nullopt;
            }
            xyz[i] = *literal_as_number(*part);
            body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
        }
        return Literal{Triple{xyz[0], xyz[1], xyz[2]}};
    }
    return parse_number(s);
}

ValueKind natural_kind(const Literal& lit) {
    switch (lit.index()) {
    case 0: return ValueKind::Integer;
    case 1: return ValueKind::Number;
    case 2: return ValueKind::Boolean;
    case 3: return ValueKind::Text;
    case 4: return ValueKind::Vector;
    default: return ValueKind::Plane;
    }
}

std::optional<double> literal_as_number(const Literal& lit) {
    if (const auto* i = std::get_if<std::int64_t>(&lit)) {
        return static_cast<double>(*i);
    }
    if (const auto* d = std::get_if<double>(&lit)) {
        return *d;
    }
    return std::nullopt;
}

double Value::as_number() const {
    if (const auto* d = std::get_if<double>(&data_)) {
        return *d;
    }
    if (const auto* i = std::get_if<std::int64_t>(&data_)) {
        return static_cast<double>(*i);
    }
    kind_error(*this, "Number");
}

std::int64_t Value::as_integer() const {
    if (const auto* i = std::get_if<std::int64_t>(&data_)) {
        return *i;
    }
    kind_error(*this, "Integer");
}

bool Value::as_boolean() const {
    if (const auto* b = std::get_if<bool>(&data_)) {
        return *b;
    }
    kind_error(*this, "Boolean");
}

const std::string& Value::as_text() const {
    if (const auto* s = std::get_if<std::string>(&data_)) {
        return *s;
    }
    kind_error(*this, "Text");
}

const geo::Vector3& Value::as_vector() const {
    if (const auto* v = std::get_if<geo::Vector3>(&data_)) {
        return *v;
    }
    kind_error(*this, "Vector");
}

const geo::Plane& Value::as_plane() const {
    if (const auto* p = std::get_if<geo::Plane>(&data_)) {
        return *p;
    }
    kind_error(*this, "Plane");
}

const geo::Curve& Value::as_curve() const {
    if (const auto* c = std::get_if<geo::Curve>(&data_)) {
        return *c;
    }
    kind_error(*this, "Curve");
}

const geo::Solid& Value::as_solid() const {
    if (const auto* s = std::get_if<geo::Solid>(&data_)) {
        return *s;
    }
    kind_error(*this, "Solid");
}

std::string describe(const Value& v) {
    std::ostringstream out;
    out << to_string(v.kind());
    switch (v.kind()) {
    case ValueKind::Number: out << ' ' << format_number(v.as_number()); break;
    case ValueKind::Integer: out << ' ' << v.as_integer(); break;
    case ValueKind::Boolean: out << ' ' << (v.as_boolean() ? "true" : "false"); break;
    case ValueKind::Text: out << ' ' << format_literal(Literal{v.as_text()}); break;
    case ValueKind::Vector:
    case ValueKind::Point: {
        const auto& p = v.as_vector();
        out << " (" << format_number(p.x()) << "," << format_number(p.y()) << "," << format_number(p.z()) << ")";
        break;
    }
    case ValueKind::Curve: out << (v.as_curve().is_circle() ? " circle" : " polyline"); break;
    default: break;
    }
    return out.str();
}

std::optional<Value> literal_to_value(const Literal& lit, ValueKind port) {
    const ValueKind natural = natural_kind(lit);
    if (port == ValueKind::Any) {
        port = natural;
    }
    switch (port) {
    case ValueKind::Number:
        if (auto n = literal_as_number(lit)) {
            return Value::number(*n);
        }
        return std::nullopt;
    case ValueKind::Integer:
        if (const auto* i = std::get_if<std::int64_t>(&lit)) {
            return Value::integer(*i);
        }
        return std::nullopt;
    case ValueKind::Boolean:
        if (const auto* b = std::get_if<bool>(&lit)) {
            return Value::boolean(*b);
        }
        return std::nullopt;
    case ValueKind::Text:
        if (const auto* s = std::get_if<std::string>(&lit)) {
            return Value::text(*s);
        }
        return std::nullopt;
    case ValueKind::Vector:
    case ValueKind::Point:
        if (const auto* t = std::get_if<Triple>(&lit)) {
            const geo::Vector3 v(t->x, t->y, t->z);
            return port == ValueKind::Vector ? Value::vector(v) : Value::point(v);
        }
        return std::nullopt;
    case ValueKind::Plane:
        if (const auto* p = std::get_if<NamedPlane>(&lit)) {
            switch (*p) {
            case NamedPlane::XY: return Value::plane(geo::Plane::world_xy());
            case NamedPlane::YZ: return Value::plane(geo::Plane::world_yz());
            case NamedPlane::XZ: return Value::plane(geo::Plane::world_xz());
            }
        }
        return std::nullopt;
    default:
        return std::nullopt;
    }
}

} // namespace vpg
