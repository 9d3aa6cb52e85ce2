#include "vpg/geometry.hpp"

#include <numbers>

namespace vpg::geo {

namespace {

bool all_finite(const Vector3& v) { return v.allFinite(); }

void require_finite(const Vector3& v, const char* what) {
    if (!all_finite(v)) {
        throw GeometryError(GeometryErrc::NonFinite, std::string(what) + " has non-finite components");
    }
}

[[noreturn]] void fail(GeometryErrc code, const std::string& what) { throw GeometryError(code, what); }

// Vector area ½ Σ vᵢ × vᵢ₊₁ of a closed polygon; its norm is the area.
Vector3 vector_area(const std::vector<Point3>& vs) {
    Vector3 acc = Vector3::Zero();
    const Point3& anchor = vs.front();
    for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
        acc += (vs[i] - anchor).cross(vs[i + 1] - anchor);
    }
    return 0.5 * acc;
}

Point3 polygon_centroid(const std::vector<Point3>& vs, const Vector3& normal) {
    const Point3& anchor = vs.front();
    Scalar total = 0;
    Vector3 weighted = Vector3::Zero();
    for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
        const Scalar a = 0.5 * (vs[i] - anchor).cross(vs[i + 1] - anchor).dot(normal);
        total += a;
        weighted += a * (anchor + vs[i] + vs[i + 1]) / 3.0;
    }
    if (total == 0) {
        return anchor;
    }
    return weighted / total;
}

// Signed area (along `n`) of the loft section (1-t)·bottom + t·top. For
// circles the integral ½∮ p × p' du is a trigonometric polynomial of degree
// two, which the uniform trapezoid rule integrates exactly.
Scalar section_area(const Curve& bottom, const Curve& top, Scalar t, const Vector3& n) {
    if (bottom.is_circle()) {
        const Circle& c0 = bottom.as_circle();
        const Circle& c1 = top.as_circle();
        constexpr int kSamples = 16;
        Scalar sum = 0;
        for (int i = 0; i < kSamples; ++i) {
            const Scalar u = 2.0 * std::numbers::pi * i / kSamples;
            const Vector3 p = (1 - t) * c0.point_at(u) + t * c1.point_at(u);
            const Vector3 dp = (1 - t) * c0.radius * (-std::sin(u) * c0.plane.x_axis() + std::cos(u) * c0.plane.y_axis()) +
                               t * c1.radius * (-std::sin(u) * c1.plane.x_axis() + std::cos(u) * c1.plane.y_axis());
            sum += p.cross(dp).dot(n);
        }
        return 0.5 * sum * (2.0 * std::numbers::pi / kSamples);
    }
    const auto& a = bottom.as_polyline().vertices;
    const auto& b = top.as_polyline().vertices;
    std::vector<Point3> vs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        vs[i] = (1 - t) * a[i] + t * b[i];
    }
    return vector_area(vs).dot(n);
}

// 8-point Gauss-Legendre nodes/weights on [0, 1].
constexpr std::array<Scalar, 8> kGaussNodes = {
    0.019855071751231856, 0.10166676129318664, 0.2372337950418355, 0.40828267875217511,
    0.59171732124782489,  0.7627662049581645,  0.89833323870681336, 0.98014492824876814};
constexpr std::array<Scalar, 8> kGaussWeights = {
    0.050614268145188130, 0.11119051722668724, 0.15685332293894364, 0.18134189168918100,
    0.18134189168918100,  0.15685332293894364, 0.11119051722668724, 0.050614268145188130};

// Area of the ruled surface (1-v)·a(u) + v·b(u) for u in one parameter span,
// given the curve points and tangents as callables.
template <class PointFn, class TangentFn>
Scalar ruled_area(PointFn bottom, PointFn top, TangentFn dbottom, TangentFn dtop, Scalar u0, Scalar u1,
                  int panels) {
    Scalar sum = 0;
    const Scalar h = (u1 - u0) / panels;
    for (int p = 0; p < panels; ++p) {
        for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
            const Scalar u = u0 + (p + kGaussNodes[i]) * h;
            const Vector3 a = bottom(u), b = top(u);
            const Vector3 da = dbottom(u), db = dtop(u);
            for (std::size_t j = 0; j < kGaussNodes.size(); ++j) {
                const Scalar v = kGaussNodes[j];
                const Vector3 su = (1 - v) * da + v * db;
                sum += kGaussWeights[i] * kGaussWeights[j] * h * su.cross(b - a).norm();
            }
        }
    }
    return sum;
}

Scalar lateral_area(const Curve& bottom, const Curve& top) {
    if (bottom.is_circle()) {
        const Circle& c0 = bottom.as_circle();
        const Circle& c1 = top.as_circle();
        auto pt = [](const Circle& c) { return [&c](Scalar u) { return c.point_at(u); }; };
        auto tg = [](const Circle& c) {
            return [&c](Scalar u) -> Vector3 {
                return c.radius * (-std::sin(u) * c.plane.x_axis() + std::cos(u) * c.plane.y_axis());
            };
        };
        return ruled_area(pt(c0), pt(c1), tg(c0), tg(c1), 0.0, 2.0 * std::numbers::pi, 64);
    }
    const auto& a = bottom.as_polyline().vertices;
    const auto& b = top.as_polyline().vertices;
    Scalar total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t j = (i + 1) % a.size();
        auto lerp = [](const Point3& p, const Point3& q) { return [p, q](Scalar u) -> Vector3 { return p + u * (q - p); }; };
        auto diff = [](const Point3& p, const Point3& q) { return [d = Vector3(q - p)](Scalar) -> Vector3 { return d; }; };
        total += ruled_area(lerp(a[i], a[j]), lerp(b[i], b[j]), diff(a[i], a[j]), diff(b[i], b[j]), 0.0, 1.0, 1);
    }
    return total;
}

} // namespace

std::string_view to_string(GeometryErrc code) {
    switch (code) {
    case GeometryErrc::NonPositiveRadius: return "NonPositiveRadius";
    case GeometryErrc::TooFewSides: return "TooFewSides";
    case GeometryErrc::ZeroDirection: return "ZeroDirection";
    case GeometryErrc::OpenCurveCap: return "OpenCurveCap";
    case GeometryErrc::IncompatibleCurves: return "IncompatibleCurves";
    case GeometryErrc::OpenCurve: return "OpenCurve";
    case GeometryErrc::UncappedSolid: return "UncappedSolid";
    case GeometryErrc::NonPositiveTolerance: return "NonPositiveTolerance";
    case GeometryErrc::DegeneratePlane: return "DegeneratePlane";
    case GeometryErrc::DegenerateCurve: return "DegenerateCurve";
    case GeometryErrc::NonParallelLoft: return "NonParallelLoft";
    case GeometryErrc::NonFinite: return "NonFinite";
    }
    return "Unknown";
}

// ---------------------------------------------------------------- Plane

Plane Plane::from_axes(const Point3& origin, const Vector3& x_axis, const Vector3& y_axis) {
    require_finite(origin, "plane origin");
    require_finite(x_axis, "plane x axis");
    require_finite(y_axis, "plane y axis");
    const Scalar xn = x_axis.norm();
    if (xn <= kTolerance) {
        fail(GeometryErrc::DegeneratePlane, "plane x axis has zero length");
    }
    const Vector3 x = x_axis / xn;
    const Vector3 y_perp = y_axis - y_axis.dot(x) * x;
    const Scalar yn = y_perp.norm();
    if (yn <= kTolerance * std::max<Scalar>(1.0, y_axis.norm())) {
        fail(GeometryErrc::DegeneratePlane, "plane axes are parallel or y axis is zero");
    }
    return Plane(origin, x, y_perp / yn);
}

Plane Plane::world_xy(const Point3& origin) { return Plane(origin, Vector3::UnitX(), Vector3::UnitY()); }
Plane Plane::world_yz(const Point3& origin) { return Plane(origin, Vector3::UnitY(), Vector3::UnitZ()); }
Plane Plane::world_xz(const Point3& origin) { return Plane(origin, Vector3::UnitX(), Vector3::UnitZ()); }

// ---------------------------------------------------------------- Curve

Curve Curve::circle(const Circle& c) {
    if (!(c.radius > 0)) {
        fail(GeometryErrc::NonPositiveRadius, "circle radius must be positive");
    }
    if (!std::isfinite(c.radius)) {
        fail(GeometryErrc::NonFinite, "circle radius is not finite");
    }
    return Curve(c);
}

Curve Curve::polyline(std::vector<Point3> vertices, bool closed) {
    for (const auto& v : vertices) {
        require_finite(v, "polyline vertex");
    }
    if (vertices.size() < 2) {
        fail(GeometryErrc::DegenerateCurve, "polyline needs at least two vertices");
    }
    if (closed) {
        std::vector<Point3> distinct;
        for (const auto& v : vertices) {
            const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                          [&](const Point3& d) { return (d - v).norm() <= kTolerance; });
            if (!seen) {
                distinct.push_back(v);
            }
        }
        if (distinct.size() < 3) {
            fail(GeometryErrc::DegenerateCurve, "closed polyline needs at least three distinct vertices");
        }
    }
    return Curve(Polyline{std::move(vertices), closed});
}

bool Curve::is_closed() const { return is_circle() || as_polyline().closed; }

Curve circle_curve(const Plane& plane, Scalar radius) { return Curve::circle(Circle{plane, radius}); }

Curve polygon_curve(const Plane& plane, Scalar circumradius, int sides) {
    if (!(circumradius > 0)) {
        fail(GeometryErrc::NonPositiveRadius, "polygon radius must be positive");
    }
    if (sides < 3) {
        fail(GeometryErrc::TooFewSides, "polygon needs at least three sides");
    }
    std::vector<Point3> vs;
    vs.reserve(sides);
    for (int i = 0; i < sides; ++i) {
        const Scalar a = 2.0 * std::numbers::pi * i / sides;
        vs.push_back(plane.point_at(circumradius * std::cos(a), circumradius * std::sin(a)));
    }
    return Curve::polyline(std::move(vs), true);
}

Scalar length(const Curve& curve) {
    if (curve.is_circle()) {
        return 2.0 * std::numbers::pi * curve.as_circle().radius;
    }
    const auto& pl = curve.as_polyline();
    Scalar total = 0;
    for (std::size_t i = 0; i + 1 < pl.vertices.size(); ++i) {
        total += (pl.vertices[i + 1] - pl.vertices[i]).norm();
    }
    if (pl.closed) {
        total += (pl.vertices.front() - pl.vertices.back()).norm();
    }
    return total;
}

Vector3 curve_normal(const Curve& curve) {
    if (curve.is_circle()) {
        return curve.as_circle().plane.normal();
    }
    const auto& pl = curve.as_polyline();
    if (!pl.closed) {
        fail(GeometryErrc::OpenCurve, "open curve has no region normal");
    }
    const Vector3 va = vector_area(pl.vertices);
    const Scalar n = va.norm();
    if (n <= kTolerance * kTolerance) {
        fail(GeometryErrc::DegenerateCurve, "closed polyline encloses no area");
    }
    return va / n;
}

// ---------------------------------------------------------------- motion

RigidMotion RigidMotion::translation(const Vector3& offset) {
    require_finite(offset, "translation");
    Eigen::Isometry3d xf = Eigen::Isometry3d::Identity();
    xf.translation() = offset;
    return RigidMotion(xf);
}

RigidMotion RigidMotion::rotation(Scalar angle, const Plane& axis_plane) {
    if (!std::isfinite(angle)) {
        fail(GeometryErrc::NonFinite, "rotation angle is not finite");
    }
    const Point3& o = axis_plane.origin();
    Eigen::Isometry3d xf = Eigen::Isometry3d::Identity();
    xf.translate(o);
    xf.rotate(Eigen::AngleAxisd(angle, axis_plane.normal().normalized()));
    xf.translate(-o);
    return RigidMotion(xf);
}

RigidMotion RigidMotion::then(const RigidMotion& next) const { return RigidMotion(next.xf_ * xf_); }

Point3 transform(const Point3& p, const RigidMotion& motion) { return motion.apply_point(p); }

Plane transform(const Plane& plane, const RigidMotion& motion) {
    return Plane::from_axes(motion.apply_point(plane.origin()), motion.apply_vector(plane.x_axis()),
                            motion.apply_vector(plane.y_axis()));
}

Curve transform(const Curve& curve, const RigidMotion& motion) {
    if (curve.is_circle()) {
        const Circle& c = curve.as_circle();
        return Curve::circle(Circle{transform(c.plane, motion), c.radius});
    }
    const auto& pl = curve.as_polyline();
    std::vector<Point3> vs;
    vs.reserve(pl.vertices.size());
    for (const auto& v : pl.vertices) {
        vs.push_back(motion.apply_point(v));
    }
    return Curve::polyline(std::move(vs), pl.closed);
}

Solid transform(const Solid& solid, const RigidMotion& motion) {
    return std::visit(
        [&](const auto& s) -> Solid {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Extrusion>) {
                return Solid(Extrusion{transform(s.base, motion), motion.apply_vector(s.direction), s.capped});
            } else {
                return Solid(Loft{transform(s.bottom, motion), transform(s.top, motion), s.capped});
            }
        },
        solid.shape());
}

// ---------------------------------------------------------------- solids

bool Solid::capped() const {
    return std::visit([](const auto& s) { return s.capped; }, shape_);
}

const Curve& Solid::base() const {
    if (const auto* e = std::get_if<Extrusion>(&shape_)) {
        return e->base;
    }
    return std::get<Loft>(shape_).bottom;
}

Solid extrude(const Curve& base, const Vector3& direction, bool capped) {
    require_finite(direction, "extrusion direction");
    if (direction.norm() <= kTolerance) {
        fail(GeometryErrc::ZeroDirection, "extrusion direction is zero");
    }
    if (capped && !base.is_closed()) {
        fail(GeometryErrc::OpenCurveCap, "cannot cap an extrusion of an open curve");
    }
    return Solid(Extrusion{base, direction, capped});
}

Solid loft(const Curve& bottom, const Curve& top, bool capped) {
    if (bottom.is_circle() != top.is_circle()) {
        fail(GeometryErrc::IncompatibleCurves, "loft needs two circles or two closed polylines");
    }
    if (!bottom.is_circle()) {
        const auto& a = bottom.as_polyline();
        const auto& b = top.as_polyline();
        if (!a.closed || !b.closed || a.vertices.size() != b.vertices.size()) {
            fail(GeometryErrc::IncompatibleCurves, "lofted polylines must be closed with equal vertex counts");
        }
    }
    return Solid(Loft{bottom, top, capped});
}

// ---------------------------------------------------------------- measures

AreaProperties area_properties(const Curve& curve) {
    if (curve.is_circle()) {
        const Circle& c = curve.as_circle();
        return {std::numbers::pi * c.radius * c.radius, c.center()};
    }
    const auto& pl = curve.as_polyline();
    if (!pl.closed) {
        fail(GeometryErrc::OpenCurve, "area needs a closed curve");
    }
    const Vector3 va = vector_area(pl.vertices);
    const Scalar a = va.norm();
    const Vector3 n = a > 0 ? Vector3(va / a) : Vector3::UnitZ();
    return {a, polygon_centroid(pl.vertices, n)};
}

AreaProperties area_properties(const Solid& solid) {
    AreaProperties base = area_properties(solid.base());
    Scalar total = 0;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Extrusion>) {
                const Curve top = transform(s.base, RigidMotion::translation(s.direction));
                total = lateral_area(s.base, top);
                if (s.capped) {
                    total += 2.0 * base.area;
                }
            } else {
                total = lateral_area(s.bottom, s.top);
                if (s.capped) {
                    total += base.area + area_properties(s.top).area;
                }
            }
        },
        solid.shape());
    return {total, base.centroid};
}

Scalar volume(const Solid& solid) {
    if (!solid.capped()) {
        fail(GeometryErrc::UncappedSolid, "volume needs a capped solid");
    }
    if (const auto* e = std::get_if<Extrusion>(&solid.shape())) {
        return area_properties(e->base).area * std::abs(e->direction.dot(curve_normal(e->base)));
    }
    const Loft& l = std::get<Loft>(solid.shape());
    const Vector3 n0 = curve_normal(l.bottom);
    const Vector3 n1 = curve_normal(l.top);
    if (n0.cross(n1).norm() > kTolerance) {
        fail(GeometryErrc::NonParallelLoft, "loft volume needs parallel profile planes");
    }
    const Point3 anchor_a = l.bottom.is_circle() ? l.bottom.as_circle().center() : l.bottom.as_polyline().vertices.front();
    const Point3 anchor_b = l.top.is_circle() ? l.top.as_circle().center() : l.top.as_polyline().vertices.front();
    const Scalar height = std::abs((anchor_b - anchor_a).dot(n0));
    // Section area is quadratic in the loft parameter, so Simpson's rule on
    // the bottom, middle and top sections is exact.
    auto section = [&](Scalar t) { return std::abs(section_area(l.bottom, l.top, t, n0)); };
    return height / 6.0 * (section(0.0) + 4.0 * section(0.5) + section(1.0));
}

} // namespace vpg::geo
