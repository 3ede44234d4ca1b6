#pragma once

#include <Eigen/Dense>

namespace cutlb {

using Vec3 = Eigen::Vector3d;

// Axis-aligned box. 2D meshes use the xy extents and keep z = 0.
struct Box {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Ones();
};

Box unit_box(int dim);

} // namespace cutlb
