#pragma once

#include <stdexcept>

#include "cutlb/types.hpp"

namespace cutlb {

enum class SurfaceKind { Circle, Sphere };

// Closed surface described by an exact signed distance function
// rho(x) = |x - center| - radius (negative inside, positive outside).
// Circles live in the z = 0 plane.
struct AnalyticSurface {
    SurfaceKind kind = SurfaceKind::Sphere;
    Vec3 center = Vec3::Zero();
    double radius = 1.0;

    int dim() const { return kind == SurfaceKind::Circle ? 2 : 3; }
};

AnalyticSurface make_circle(double cx, double cy, double radius);
AnalyticSurface make_sphere(const Vec3& center, double radius);

double signed_distance(const AnalyticSurface& s, const Vec3& x);

// Exact exterior unit normal n = grad rho, defined away from the center.
Vec3 unit_normal(const AnalyticSurface& s, const Vec3& x);

// Nearest point projection onto the surface. Undefined at the center.
Vec3 closest_point(const AnalyticSurface& s, const Vec3& x);

// Extension g^e(x) = g(p(x)), constant along surface normals.
template <class F>
double extend_to_neighborhood(const AnalyticSurface& s, F&& g, const Vec3& x) {
    return g(closest_point(s, x));
}

} // namespace cutlb
