#include "cutlb/surface.hpp"

namespace cutlb {

Box unit_box(int dim) {
    Box b;
    b.lo = Vec3::Zero();
    b.hi = dim == 2 ? Vec3(1.0, 1.0, 0.0) : Vec3(1.0, 1.0, 1.0);
    return b;
}

namespace {

void check_radius(double radius) {
    if (!(radius > 0.0))
        throw std::invalid_argument("surface radius must be positive");
}

} // namespace

AnalyticSurface make_circle(double cx, double cy, double radius) {
    check_radius(radius);
    return AnalyticSurface{SurfaceKind::Circle, Vec3(cx, cy, 0.0), radius};
}

AnalyticSurface make_sphere(const Vec3& center, double radius) {
    check_radius(radius);
    return AnalyticSurface{SurfaceKind::Sphere, center, radius};
}

double signed_distance(const AnalyticSurface& s, const Vec3& x) {
    return (x - s.center).norm() - s.radius;
}

Vec3 unit_normal(const AnalyticSurface& s, const Vec3& x) {
    const Vec3 d = x - s.center;
    const double r = d.norm();
    if (r < 1e-12)
        throw std::invalid_argument("surface normal undefined at the center");
    return d / r;
}

Vec3 closest_point(const AnalyticSurface& s, const Vec3& x) {
    const Vec3 d = x - s.center;
    const double r = d.norm();
    if (r < 1e-12)
        throw std::invalid_argument("closest-point projection undefined at the center");
    return s.center + (s.radius / r) * d;
}

} // namespace cutlb
