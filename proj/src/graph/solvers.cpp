#include "solvers.hpp"

#include "vpg/error.hpp"
#include "vpg/expression.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace vpg::detail {

const Value& SolveArgs::item(int i) const {
    if (!items[i]) {
        throw Error(Errc::EvaluationError, "input " + std::to_string(i) + " has no value");
    }
    return *items[i];
}

const Branch& SolveArgs::list(int i) const {
    static const Branch empty;
    return lists[i] ? *lists[i] : empty;
}

const DataTree& SolveArgs::tree(int i) const {
    static const DataTree empty;
    return trees[i] ? *trees[i] : empty;
}

double SolveArgs::state(std::string_view field) const {
    const auto it = node.state.find(field);
    if (it == node.state.end()) {
        throw Error(Errc::EvaluationError, "missing state field '" + std::string(field) + "'");
    }
    return it->second;
}

namespace {

using geo::RigidMotion;

std::vector<Branch> one(Value v) { return {Branch{std::move(v)}}; }

Value apply_motion(const Value& v, const RigidMotion& m) {
    switch (v.kind()) {
    case ValueKind::Curve:
        return Value::curve(geo::transform(v.as_curve(), m));
    case ValueKind::Solid:
        return Value::solid(geo::transform(v.as_solid(), m));
    case ValueKind::Plane:
        return Value::plane(geo::transform(v.as_plane(), m));
    case ValueKind::Point:
        return Value::point(m.apply_point(v.as_vector()));
    case ValueKind::Vector:
        return Value::vector(m.apply_vector(v.as_vector()));
    default:
        throw Error(Errc::EvaluationError, "cannot transform a " + std::string(to_string(v.kind())));
    }
}

double finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw Error(Errc::EvaluationError, std::string(what) + " is not finite");
    }
    return v;
}

int checked_int(std::int64_t v, const char* what) {
    if (v < -1'000'000 || v > 1'000'000) {
        throw Error(Errc::EvaluationError, std::string(what) + " out of range: " + std::to_string(v));
    }
    return static_cast<int>(v);
}

std::vector<Branch> number_slider(const SolveArgs& a) { return one(Value::number(a.state("value"))); }

std::vector<Branch> integer_slider(const SolveArgs& a) {
    return one(Value::integer(std::llround(a.state("value"))));
}

template <int Axis>
std::vector<Branch> unit_axis(const SolveArgs& a) {
    return one(Value::vector(geo::Vector3::Unit(Axis) * a.item(0).as_number()));
}

std::vector<Branch> construct_point(const SolveArgs& a) {
    return one(Value::point({a.item(0).as_number(), a.item(1).as_number(), a.item(2).as_number()}));
}

std::vector<Branch> construct_plane(const SolveArgs& a) {
    return one(Value::plane(geo::Plane::from_axes(a.item(0).as_vector(), a.item(1).as_vector(), a.item(2).as_vector())));
}

std::vector<Branch> xy_plane(const SolveArgs& a) { return one(Value::plane(geo::Plane::world_xy(a.item(0).as_vector()))); }

std::vector<Branch> circle(const SolveArgs& a) {
    return one(Value::curve(geo::circle_curve(a.item(0).as_plane(), a.item(1).as_number())));
}

std::vector<Branch> polygon(const SolveArgs& a) {
    const geo::Curve c =
        geo::polygon_curve(a.item(0).as_plane(), a.item(1).as_number(), checked_int(a.item(2).as_integer(), "segments"));
    const double len = geo::length(c);
    return {Branch{Value::curve(c)}, Branch{Value::number(len)}};
}

std::vector<Branch> move(const SolveArgs& a) {
    return one(apply_motion(a.item(0), RigidMotion::translation(a.item(1).as_vector())));
}

std::vector<Branch> rotate(const SolveArgs& a) {
    return one(apply_motion(a.item(0), RigidMotion::rotation(a.item(1).as_number(), a.item(2).as_plane())));
}

std::vector<Branch> series(const SolveArgs& a) {
    const double start = a.item(0).as_number();
    const double step = a.item(1).as_number();
    const std::int64_t count = a.item(2).as_integer();
    if (count < 0 || count > 1'000'000) {
        throw Error(Errc::EvaluationError, "series count out of range: " + std::to_string(count));
    }
    Branch out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        out.push_back(Value::number(finite(start + static_cast<double>(i) * step, "series value")));
    }
    return {std::move(out)};
}

std::vector<Branch> flatten_tree(const SolveArgs& a) { return {a.tree(0).items()}; }

std::vector<Branch> list_length(const SolveArgs& a) {
    return one(Value::integer(static_cast<std::int64_t>(a.list(0).size())));
}

std::vector<Branch> add(const SolveArgs& a) {
    return one(Value::number(finite(a.item(0).as_number() + a.item(1).as_number(), "sum")));
}

std::vector<Branch> subtract(const SolveArgs& a) {
    return one(Value::number(finite(a.item(0).as_number() - a.item(1).as_number(), "difference")));
}

std::vector<Branch> multiply(const SolveArgs& a) {
    return one(Value::number(finite(a.item(0).as_number() * a.item(1).as_number(), "product")));
}

std::vector<Branch> divide(const SolveArgs& a) {
    const double b = a.item(1).as_number();
    if (b == 0) {
        throw Error(Errc::EvaluationError, "division by zero");
    }
    return one(Value::number(finite(a.item(0).as_number() / b, "quotient")));
}

std::vector<Branch> power(const SolveArgs& a) {
    return one(Value::number(finite(std::pow(a.item(0).as_number(), a.item(1).as_number()), "power")));
}

std::vector<Branch> pi(const SolveArgs& a) {
    return one(Value::number(finite(std::numbers::pi * a.item(0).as_number(), "product")));
}

std::vector<Branch> expression(const SolveArgs& a) {
    // Parsed trees are cached per text; sessions may evaluate on several threads.
    thread_local std::map<std::string, expr::Expression, std::less<>> cache;
    const std::string& text = a.item(0).as_text();
    auto it = cache.find(text);
    if (it == cache.end()) {
        if (cache.size() > 256) {
            cache.clear();
        }
        it = cache.emplace(text, expr::Expression::parse(text)).first;
    }
    const expr::Bindings vars = {
        {"x", a.item(1).as_number()}, {"y", a.item(2).as_number()}, {"z", a.item(3).as_number()}};
    return one(Value::number(it->second.evaluate(vars)));
}

std::vector<Branch> extrude(const SolveArgs& a) {
    return one(Value::solid(geo::extrude(a.item(0).as_curve(), a.item(1).as_vector(), a.item(2).as_boolean())));
}

std::vector<Branch> loft(const SolveArgs& a) {
    return one(Value::solid(geo::loft(a.item(0).as_curve(), a.item(1).as_curve(), a.item(2).as_boolean())));
}

std::vector<Branch> area(const SolveArgs& a) {
    const Value& g = a.item(0);
    geo::AreaProperties props;
    if (g.kind() == ValueKind::Curve) {
        props = geo::area_properties(g.as_curve());
    } else if (g.kind() == ValueKind::Solid) {
        props = geo::area_properties(g.as_solid());
    } else {
        throw Error(Errc::EvaluationError, "area needs a curve or a solid, got " + std::string(to_string(g.kind())));
    }
    return {Branch{Value::number(props.area)}, Branch{Value::point(props.centroid)}};
}

std::vector<Branch> volume(const SolveArgs& a) { return one(Value::number(geo::volume(a.item(0).as_solid()))); }

const std::map<std::string, Solver, std::less<>>& table() {
    static const std::map<std::string, Solver, std::less<>> solvers = {
        {"params.number_slider", number_slider},
        {"params.integer_slider", integer_slider},
        {"vector.unit_x", unit_axis<0>},
        {"vector.unit_y", unit_axis<1>},
        {"vector.unit_z", unit_axis<2>},
        {"vector.construct_point", construct_point},
        {"vector.construct_plane", construct_plane},
        {"vector.xy_plane", xy_plane},
        {"curve.circle", circle},
        {"curve.polygon", polygon},
        {"transform.move", move},
        {"transform.rotate", rotate},
        {"sets.series", series},
        {"sets.flatten_tree", flatten_tree},
        {"sets.list_length", list_length},
        {"maths.add", add},
        {"maths.subtract", subtract},
        {"maths.multiply", multiply},
        {"maths.divide", divide},
        {"maths.power", power},
        {"maths.pi", pi},
        {"maths.expression", expression},
        {"surface.extrude", extrude},
        {"surface.loft", loft},
        {"analysis.area", area},
        {"analysis.volume", volume},
    };
    return solvers;
}

} // namespace

const Solver* find_solver(std::string_view type_id) {
    const auto it = table().find(type_id);
    return it == table().end() ? nullptr : &it->second;
}

} // namespace vpg::detail
