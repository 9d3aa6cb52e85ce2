#include "vpg/geometry.hpp"

#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

namespace vpg::geo {

namespace {

constexpr int kMinCircleSegments = 8;
constexpr int kMaxCircleSegments = 1 << 16;

std::vector<Point3> sample(const Curve& c, int circle_n) {
    if (c.is_circle()) {
        std::vector<Point3> out;
        out.reserve(circle_n);
        for (int i = 0; i < circle_n; ++i) {
            out.push_back(c.as_circle().point_at(2.0 * std::numbers::pi * i / circle_n));
        }
        return out;
    }
    return c.as_polyline().vertices;
}

Scalar max_radius(const Curve& c) {
    if (c.is_circle()) {
        return c.as_circle().radius;
    }
    return 0;
}

void check_tolerance(Scalar tol) {
    if (!(tol > 0)) {
        throw GeometryError(GeometryErrc::NonPositiveTolerance, "chord tolerance must be positive");
    }
}

// Fan over a convex ring starting at `first`; `flip` reverses the winding.
void add_cap(Mesh& m, std::uint32_t first, std::uint32_t count, bool flip) {
    for (std::uint32_t i = 1; i + 1 < count; ++i) {
        if (flip) {
            m.triangles.push_back({first, first + i + 1, first + i});
        } else {
            m.triangles.push_back({first, first + i, first + i + 1});
        }
    }
}

// Ruled band between two rings of equal size laid out at `a` and `b`.
void add_band(Mesh& m, std::uint32_t a, std::uint32_t b, std::uint32_t count) {
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t j = (i + 1) % count;
        m.triangles.push_back({a + i, a + j, b + j});
        m.triangles.push_back({a + i, b + j, b + i});
    }
}

Mesh ring_solid(const std::vector<Point3>& bottom, const std::vector<Point3>& top, bool capped) {
    Mesh m;
    const auto n = static_cast<std::uint32_t>(bottom.size());
    m.vertices = bottom;
    m.vertices.insert(m.vertices.end(), top.begin(), top.end());
    add_band(m, 0, n, n);
    if (capped) {
        add_cap(m, 0, n, true);
        add_cap(m, n, n, false);
        if (signed_volume(m) < 0) {
            for (auto& t : m.triangles) {
                std::swap(t[1], t[2]);
            }
        }
    }
    return m;
}

} // namespace

int circle_segments(Scalar radius, Scalar tolerance) {
    check_tolerance(tolerance);
    const Scalar ratio = tolerance / radius;
    if (ratio >= 1.0) {
        return kMinCircleSegments;
    }
    const Scalar n = std::ceil(std::numbers::pi / std::acos(1.0 - ratio));
    return static_cast<int>(std::clamp<Scalar>(n, kMinCircleSegments, kMaxCircleSegments));
}

Mesh tessellate(const Curve& curve, Scalar chord_tolerance) {
    check_tolerance(chord_tolerance);
    Mesh m;
    const int n = curve.is_circle() ? circle_segments(curve.as_circle().radius, chord_tolerance) : 0;
    m.vertices = sample(curve, n);
    const auto count = static_cast<std::uint32_t>(m.vertices.size());
    for (std::uint32_t i = 0; i + 1 < count; ++i) {
        m.edges.push_back({i, i + 1});
    }
    if (curve.is_closed()) {
        m.edges.push_back({count - 1, 0});
        add_cap(m, 0, count, false);
    }
    return m;
}

Mesh tessellate(const Solid& solid, Scalar chord_tolerance) {
    check_tolerance(chord_tolerance);
    if (const auto* e = std::get_if<Extrusion>(&solid.shape())) {
        const int n = e->base.is_circle() ? circle_segments(e->base.as_circle().radius, chord_tolerance) : 0;
        std::vector<Point3> bottom = sample(e->base, n);
        std::vector<Point3> top = bottom;
        for (auto& p : top) {
            p += e->direction;
        }
        return ring_solid(bottom, top, e->capped);
    }
    const Loft& l = std::get<Loft>(solid.shape());
    const Scalar r = std::max(max_radius(l.bottom), max_radius(l.top));
    const int n = l.bottom.is_circle() ? circle_segments(r, chord_tolerance) : 0;
    return ring_solid(sample(l.bottom, n), sample(l.top, n), l.capped);
}

Scalar signed_volume(const Mesh& mesh) {
    Scalar v = 0;
    for (const auto& t : mesh.triangles) {
        v += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
    }
    return v / 6.0;
}

bool is_watertight(const Mesh& mesh) {
    if (mesh.triangles.empty()) {
        return false;
    }
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> uses;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            std::uint32_t a = t[k], b = t[(k + 1) % 3];
            if (a > b) {
                std::swap(a, b);
            }
            ++uses[{a, b}];
        }
    }
    return std::all_of(uses.begin(), uses.end(), [](const auto& kv) { return kv.second == 2; });
}

Scalar min_triangle_area(const Mesh& mesh) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (const auto& t : mesh.triangles) {
        const Vector3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
        const Vector3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
        best = std::min(best, 0.5 * e1.cross(e2).norm());
    }
    return best;
}

std::string to_stl(const Mesh& mesh, std::string_view solid_name) {
    std::ostringstream out;
    out.precision(9);
    out << std::scientific;
    out << "solid " << solid_name << "\n";
    for (const auto& t : mesh.triangles) {
        const Point3& a = mesh.vertices[t[0]];
        const Point3& b = mesh.vertices[t[1]];
        const Point3& c = mesh.vertices[t[2]];
        Vector3 n = (b - a).cross(c - a);
        const Scalar len = n.norm();
        n = len > 0 ? Vector3(n / len) : Vector3::Zero();
        out << "  facet normal " << n.x() << ' ' << n.y() << ' ' << n.z() << "\n";
        out << "    outer loop\n";
        for (const Point3* p : {&a, &b, &c}) {
            out << "      vertex " << p->x() << ' ' << p->y() << ' ' << p->z() << "\n";
        }
        out << "    endloop\n";
        out << "  endfacet\n";
    }
    out << "endsolid " << solid_name << "\n";
    return out.str();
}

} // namespace vpg::geo
