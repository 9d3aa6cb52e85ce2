#pragma once

// Closed-form parametric geometry: planes, circles, regular polygons,
// extrusions and lofts, with exact measures and display tessellation.
// All values are immutable after construction; every function is pure.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vpg::geo {

using Scalar = double;
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
using Point3 = Vector3;

// Absolute coordinate tolerance; measures compare relatively against it.
inline constexpr Scalar kTolerance = 1e-9;

enum class GeometryErrc {
    NonPositiveRadius,
    TooFewSides,
    ZeroDirection,
    OpenCurveCap,
    IncompatibleCurves,
    OpenCurve,
    UncappedSolid,
    NonPositiveTolerance,
    DegeneratePlane,
    DegenerateCurve,
    NonParallelLoft,
    NonFinite,
};

std::string_view to_string(GeometryErrc code);

class GeometryError : public std::runtime_error {
public:
    GeometryError(GeometryErrc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    GeometryErrc code() const noexcept { return code_; }

private:
    GeometryErrc code_;
};

class RigidMotion;

// Orthonormal frame. The normal is x_axis × y_axis.
class Plane {
public:
    Plane() : Plane(world_xy()) {}

    // Gram-Schmidt: keeps the direction of `x_axis`, makes `y_axis` orthogonal
    // to it. Throws DegeneratePlane for zero or parallel axes.
    static Plane from_axes(const Point3& origin, const Vector3& x_axis, const Vector3& y_axis);
    static Plane world_xy(const Point3& origin = Point3::Zero());
    static Plane world_yz(const Point3& origin = Point3::Zero());
    static Plane world_xz(const Point3& origin = Point3::Zero());

    const Point3& origin() const { return origin_; }
    const Vector3& x_axis() const { return x_axis_; }
    const Vector3& y_axis() const { return y_axis_; }
    Vector3 normal() const { return x_axis_.cross(y_axis_); }

    // origin + u·x_axis + v·y_axis
    Point3 point_at(Scalar u, Scalar v) const { return origin_ + u * x_axis_ + v * y_axis_; }

    friend bool operator==(const Plane& a, const Plane& b) {
        return a.origin_ == b.origin_ && a.x_axis_ == b.x_axis_ && a.y_axis_ == b.y_axis_;
    }

private:
    Plane(const Point3& o, const Vector3& x, const Vector3& y) : origin_(o), x_axis_(x), y_axis_(y) {}

    Point3 origin_;
    Vector3 x_axis_;
    Vector3 y_axis_;
};

struct Circle {
    Plane plane;
    Scalar radius = 1.0;

    Point3 center() const { return plane.origin(); }
    Point3 point_at(Scalar angle) const {
        return plane.point_at(radius * std::cos(angle), radius * std::sin(angle));
    }
    friend bool operator==(const Circle&, const Circle&) = default;
};

struct Polyline {
    std::vector<Point3> vertices;
    bool closed = false;

    friend bool operator==(const Polyline& a, const Polyline& b) {
        return a.closed == b.closed && a.vertices.size() == b.vertices.size() &&
               std::equal(a.vertices.begin(), a.vertices.end(), b.vertices.begin());
    }
};

class Curve {
public:
    using Variant = std::variant<Circle, Polyline>;

    // Validating constructors.
    static Curve circle(const Circle& c);
    static Curve polyline(std::vector<Point3> vertices, bool closed);

    const Variant& shape() const { return shape_; }
    bool is_circle() const { return std::holds_alternative<Circle>(shape_); }
    bool is_closed() const;
    const Circle& as_circle() const { return std::get<Circle>(shape_); }
    const Polyline& as_polyline() const { return std::get<Polyline>(shape_); }

    friend bool operator==(const Curve&, const Curve&) = default;

private:
    explicit Curve(Variant v) : shape_(std::move(v)) {}
    Variant shape_;
};

struct Extrusion {
    Curve base;
    Vector3 direction;
    bool capped = true;
    friend bool operator==(const Extrusion& a, const Extrusion& b) {
        return a.base == b.base && a.direction == b.direction && a.capped == b.capped;
    }
};

struct Loft {
    Curve bottom;
    Curve top;
    bool capped = true;
    friend bool operator==(const Loft&, const Loft&) = default;
};

class Solid {
public:
    using Variant = std::variant<Extrusion, Loft>;

    const Variant& shape() const { return shape_; }
    bool capped() const;
    // Bottom profile: the extrusion base or the loft's first curve.
    const Curve& base() const;

    friend bool operator==(const Solid&, const Solid&) = default;

private:
    friend Solid extrude(const Curve&, const Vector3&, bool);
    friend Solid loft(const Curve&, const Curve&, bool);
    friend Solid transform(const Solid&, const RigidMotion&);
    explicit Solid(Variant v) : shape_(std::move(v)) {}
    Variant shape_;
};

// Proper rigid motion (rotation + translation).
class RigidMotion {
public:
    RigidMotion() : xf_(Eigen::Isometry3d::Identity()) {}

    static RigidMotion translation(const Vector3& offset);
    // Rotation by `angle` radians about the axis through the plane origin
    // along the plane normal (right-hand rule).
    static RigidMotion rotation(Scalar angle, const Plane& axis_plane);

    // Motion equivalent to applying *this and then `next`.
    RigidMotion then(const RigidMotion& next) const;

    Point3 apply_point(const Point3& p) const { return xf_ * p; }
    Vector3 apply_vector(const Vector3& v) const { return xf_.linear() * v; }
    const Eigen::Isometry3d& matrix() const { return xf_; }

private:
    explicit RigidMotion(const Eigen::Isometry3d& xf) : xf_(xf) {}
    Eigen::Isometry3d xf_;
};

struct AreaProperties {
    Scalar area = 0;
    Point3 centroid = Point3::Zero();
};

struct Mesh {
    std::vector<Point3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    // Boundary polyline of a tessellated curve; empty for solids.
    std::vector<std::array<std::uint32_t, 2>> edges;
};

Curve circle_curve(const Plane& plane, Scalar radius);
Curve polygon_curve(const Plane& plane, Scalar circumradius, int sides);

Point3 transform(const Point3& p, const RigidMotion& motion);
Plane transform(const Plane& plane, const RigidMotion& motion);
Curve transform(const Curve& curve, const RigidMotion& motion);
Solid transform(const Solid& solid, const RigidMotion& motion);

Solid extrude(const Curve& base, const Vector3& direction, bool capped);
Solid loft(const Curve& bottom, const Curve& top, bool capped);

AreaProperties area_properties(const Curve& curve);
// Total surface area; the centroid is that of the base region.
AreaProperties area_properties(const Solid& solid);
Scalar volume(const Solid& solid);
Scalar length(const Curve& curve);

// Unit normal of a closed planar curve, oriented by its winding.
Vector3 curve_normal(const Curve& curve);

// Segment count for a circle so that the sagitta stays within `tolerance`.
int circle_segments(Scalar radius, Scalar tolerance);

Mesh tessellate(const Curve& curve, Scalar chord_tolerance);
Mesh tessellate(const Solid& solid, Scalar chord_tolerance);

// Mesh diagnostics.
Scalar signed_volume(const Mesh& mesh);
bool is_watertight(const Mesh& mesh);
Scalar min_triangle_area(const Mesh& mesh);

// ASCII STL with facet normals recomputed from the vertices.
std::string to_stl(const Mesh& mesh, std::string_view solid_name = "vpg");

} // namespace vpg::geo
