#include "vpg/registry.hpp"

namespace vpg {

namespace {

struct In {
    std::string name;
    std::string description;
    ValueKind kind;
    std::optional<Literal> def = std::nullopt;
    bool optional = false;
    Access access = Access::Item;
};

struct Out {
    std::string name;
    std::string description;
    ValueKind kind;
    std::string structure = "One item per evaluation, in the branch of the matched inputs.";
    Access access = Access::Item;
};

ComponentDescriptor make(std::string type_id, std::string name, std::string nickname, std::string category,
                         std::string description, bool preview, std::vector<In> ins, std::vector<Out> outs,
                         std::vector<StateField> state = {}) {
    ComponentDescriptor d;
    d.type_id = std::move(type_id);
    d.name = std::move(name);
    d.nickname = std::move(nickname);
    d.category = std::move(category);
    d.description = std::move(description);
    d.default_preview = preview;
    for (std::size_t i = 0; i < ins.size(); ++i) {
        auto& in = ins[i];
        PortDescriptor p;
        p.index = static_cast<int>(i);
        p.name = std::move(in.name);
        p.description = std::move(in.description);
        p.kind = in.kind;
        p.access = in.access;
        p.optional = in.optional;
        p.default_value = std::move(in.def);
        d.inputs.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < outs.size(); ++i) {
        auto& out = outs[i];
        PortDescriptor p;
        p.index = static_cast<int>(i);
        p.name = std::move(out.name);
        p.description = std::move(out.description);
        p.kind = out.kind;
        p.access = out.access;
        p.data_structure_note = std::move(out.structure);
        d.outputs.push_back(std::move(p));
    }
    d.state_schema = std::move(state);
    return d;
}

Literal num(double v) { return Literal{v}; }
Literal integer(std::int64_t v) { return Literal{v}; }
Literal triple(double x, double y, double z) { return Literal{Triple{x, y, z}}; }

std::vector<ComponentDescriptor> catalog() {
    using K = ValueKind;
    std::vector<ComponentDescriptor> all;

    // Params
    all.push_back(make("params.number_slider", "Number Slider", "Slider", "Params",
                       "Numeric slider holding one real value between min and max, rounded to a set number of decimals.",
                       false, {},
                       {{"Value", "Current slider value.", K::Number, "Single item in branch {0}."}},
                       {{"min", 0.0}, {"max", 1.0}, {"value", 0.25}, {"decimals", 3.0}}));
    all.push_back(make("params.integer_slider", "Integer Slider", "ISlider", "Params",
                       "Integer slider holding one whole number between min and max.", false, {},
                       {{"Value", "Current slider value.", K::Integer, "Single item in branch {0}."}},
                       {{"min", 0.0}, {"max", 10.0}, {"value", 5.0}, {"decimals", 0.0}}));

    // Vector
    for (const auto& [axis, letter, dir] : std::vector<std::tuple<std::string, std::string, Triple>>{
             {"x", "X", {1, 0, 0}}, {"y", "Y", {0, 1, 0}}, {"z", "Z", {0, 0, 1}}}) {
        all.push_back(make("vector.unit_" + axis, "Unit " + letter, letter, "Vector",
                           "Unit vector parallel to the world " + letter + " axis, scaled by a factor.", false,
                           {{"Factor", "Length of the vector.", K::Number, num(1.0), true}},
                           {{"Unit vector", "World " + letter + " vector multiplied by the factor.", K::Vector}}));
    }
    all.push_back(make("vector.construct_point", "Construct Point", "Pt", "Vector",
                       "Create a point from its x, y and z coordinates.", true,
                       {{"X coordinate", "Position along x.", K::Number, num(0.0), true},
                        {"Y coordinate", "Position along y.", K::Number, num(0.0), true},
                        {"Z coordinate", "Position along z.", K::Number, num(0.0), true}},
                       {{"Point", "Constructed point.", K::Point}}));
    all.push_back(make("vector.construct_plane", "Construct Plane", "Pl", "Vector",
                       "Create a plane from an origin point and two axis vectors; the y axis is made orthogonal to x.",
                       false,
                       {{"Origin", "Origin of the plane.", K::Point, triple(0, 0, 0), true},
                        {"X-Axis", "Direction of the plane x axis.", K::Vector, triple(1, 0, 0), true},
                        {"Y-Axis", "Approximate direction of the plane y axis.", K::Vector, triple(0, 1, 0), true}},
                       {{"Plane", "Constructed plane.", K::Plane}}));
    all.push_back(make("vector.xy_plane", "XY Plane", "XY", "Vector",
                       "World XY plane placed at an origin point.", false,
                       {{"Origin", "Origin of the plane.", K::Point, triple(0, 0, 0), true}},
                       {{"Plane", "World XY plane through the origin.", K::Plane}}));

    // Curve
    all.push_back(make("curve.circle", "Circle", "Cir", "Curve",
                       "Create a circle defined by a base plane and a radius.", true,
                       {{"Plane", "Base plane; the circle is centered at its origin.", K::Plane, Literal{NamedPlane::XY}, true},
                        {"Radius", "Radius of the circle.", K::Number, num(1.0), true}},
                       {{"Circle", "Resulting circle.", K::Curve}}));
    all.push_back(make("curve.polygon", "Polygon", "Poly", "Curve",
                       "Create a regular closed polygon; the first vertex lies on the plane x axis.", true,
                       {{"Plane", "Polygon plane; the polygon is centered at its origin.", K::Plane, Literal{NamedPlane::XY}, true},
                        {"Radius", "Distance from the center to each vertex (circumradius).", K::Number, num(1.0), true},
                        {"Segments", "Number of sides, at least 3.", K::Integer, integer(6), true}},
                       {{"Polygon", "Regular polygon as a closed polyline.", K::Curve},
                        {"Length", "Perimeter of the polygon.", K::Number}}));

    // Transform
    all.push_back(make("transform.move", "Move", "Move", "Transform",
                       "Translate (move) an object along a vector.", true,
                       {{"Geometry", "Base geometry to move.", K::Any},
                        {"Motion", "Translation vector.", K::Vector, triple(0, 0, 0), true}},
                       {{"Geometry", "Translated geometry.", K::Any}}));
    all.push_back(make("transform.rotate", "Rotate", "Rot", "Transform",
                       "Rotate an object in a plane about the plane normal through its origin.", true,
                       {{"Geometry", "Base geometry to rotate.", K::Any},
                        {"Angle", "Rotation angle in radians.", K::Number, num(0.0), true},
                        {"Plane", "Rotation plane; the axis is its normal through its origin.", K::Plane, Literal{NamedPlane::XY}, true}},
                       {{"Geometry", "Rotated geometry.", K::Any}}));

    // Sets
    all.push_back(make("sets.series", "Series", "Series", "Sets",
                       "Create an arithmetic series of numbers: start, start+step, ...", false,
                       {{"Start", "First number in the series.", K::Number, num(0.0), true},
                        {"Step", "Difference between consecutive numbers.", K::Number, num(1.0), true},
                        {"Count", "Number of values in the series.", K::Integer, integer(10), true}},
                       {{"Series", "Series of numbers.", K::Number,
                         "List of Count numbers per evaluation; repeated evaluations in one branch get sub-branches {path;i}.",
                         Access::List}}));
    all.push_back(make("sets.flatten_tree", "Flatten Tree", "Flatten", "Sets",
                       "Flatten a data tree by removing all branches, keeping item order.", false,
                       {{"Tree", "Data tree to flatten.", K::Any, std::nullopt, false, Access::Tree}},
                       {{"Tree", "Flattened data.", K::Any, "All items in a single branch {0}, in path order.",
                         Access::List}}));
    all.push_back(make("sets.list_length", "List Length", "Lng", "Sets",
                       "Measure the number of items in a list.", false,
                       {{"List", "List to measure.", K::Any, std::nullopt, false, Access::List}},
                       {{"Length", "Number of items in the list.", K::Integer}}));

    // Maths
    const auto binary = [&](std::string id, std::string name, std::string nick, std::string desc, std::string a,
                            std::string b, std::string result) {
        all.push_back(make("maths." + id, std::move(name), std::move(nick), "Maths", std::move(desc), false,
                           {{"A", std::move(a), K::Number}, {"B", std::move(b), K::Number}},
                           {{"Result", std::move(result), K::Number}}));
    };
    binary("add", "Addition", "A+B", "Mathematical addition.", "First item for addition.",
           "Second item for addition.", "Result of addition.");
    binary("subtract", "Subtraction", "A-B", "Mathematical subtraction.", "Item to subtract from.",
           "Item to subtract.", "Result of subtraction.");
    binary("multiply", "Multiplication", "A×B", "Mathematical multiplication.", "First item for multiplication.",
           "Second item for multiplication.", "Result of multiplication.");
    binary("divide", "Division", "A/B", "Mathematical division.", "Item to divide (dividend).",
           "Item to divide with (divisor).", "Result of division.");
    all.push_back(make("maths.power", "Power", "Pow", "Maths", "Raise a value to a power.", false,
                       {{"Base", "The number to be raised.", K::Number},
                        {"Exponent", "The exponent.", K::Number}},
                       {{"Result", "Base raised to the exponent.", K::Number}}));
    all.push_back(make("maths.pi", "Pi", "Pi", "Maths", "Returns a factor of Pi.", false,
                       {{"Factor", "Factor to be multiplied by Pi.", K::Number, num(1.0), true}},
                       {{"Output", "Factor multiplied by Pi.", K::Number}}));
    all.push_back(make("maths.expression", "Expression", "Expr", "Maths",
                       "Evaluate an arithmetic expression in x, y and z (+ - * / ^, sin cos tan sqrt abs floor, pi).",
                       false,
                       {{"Expression", "Expression text, e.g. 1/(cos(x)+sin(x)).", K::Text, Literal{std::string("x")}, true},
                        {"x", "Value of variable x.", K::Number, num(0.0), true},
                        {"y", "Value of variable y.", K::Number, num(0.0), true},
                        {"z", "Value of variable z.", K::Number, num(0.0), true}},
                       {{"Result", "Value of the expression.", K::Number}}));

    // Surface
    all.push_back(make("surface.extrude", "Extrude", "Extr", "Surface",
                       "Extrude a closed curve along a direction vector into a solid.", true,
                       {{"Base", "Profile curve to extrude.", K::Curve},
                        {"Direction", "Extrusion direction and length.", K::Vector, triple(0, 0, 1), true},
                        {"Cap", "Close both ends with planar caps.", K::Boolean, Literal{true}, true}},
                       {{"Extrusion", "Extruded solid.", K::Solid}}));
    all.push_back(make("surface.loft", "Loft", "Loft", "Surface",
                       "Create a ruled loft between a bottom and a top curve of the same type.", true,
                       {{"Bottom", "First section curve.", K::Curve},
                        {"Top", "Second section curve.", K::Curve},
                        {"Cap", "Close both ends with planar caps.", K::Boolean, Literal{true}, true}},
                       {{"Loft", "Lofted solid.", K::Solid}}));

    // Analysis
    all.push_back(make("analysis.area", "Area", "Area", "Analysis",
                       "Solve area properties for closed curves and solids.", false,
                       {{"Geometry", "Closed curve or solid.", K::Any}},
                       {{"Area", "Area of the region, or total surface area of a solid.", K::Number},
                        {"Centroid", "Centroid of the region (base region for solids).", K::Point}}));
    all.push_back(make("analysis.volume", "Volume", "Vol", "Analysis", "Solve the volume of a capped solid.", false,
                       {{"Solid", "Capped solid.", K::Solid}}, {{"Volume", "Enclosed volume.", K::Number}}));

    return all;
}

} // namespace

std::shared_ptr<const Registry> builtin_registry() {
    static const std::shared_ptr<const Registry> registry = std::make_shared<const Registry>(catalog());
    return registry;
}

} // namespace vpg
