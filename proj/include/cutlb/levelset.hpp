#pragma once

#include <vector>

#include "cutlb/mesh.hpp"
#include "cutlb/surface.hpp"

namespace cutlb {

// Nodal interpolant rho_h of the signed distance function. Values inside a
// band of |rho| < 1e-12*h are replaced by +1e-12*h so the zero level set never
// passes exactly through a node and every cut is a clean triangle-or-quad case.
struct LevelSetField {
    AnalyticSurface surface;
    const BackgroundMesh* mesh = nullptr;
    std::vector<double> nodal_values;
};

inline constexpr double kZeroBand = 1e-12;

LevelSetField interpolate_nodal(const AnalyticSurface& surface, const BackgroundMesh& mesh);

} // namespace cutlb
