#include "cutlb/levelset.hpp"

#include <cmath>

namespace cutlb {

LevelSetField interpolate_nodal(const AnalyticSurface& surface, const BackgroundMesh& mesh) {
    LevelSetField field;
    field.surface = surface;
    field.mesh = &mesh;
    field.nodal_values.resize(mesh.nodes.size());
    const double eps = kZeroBand * mesh.h;
    for (size_t i = 0; i < mesh.nodes.size(); ++i) {
        double v = signed_distance(surface, mesh.nodes[i]);
        if (std::abs(v) < eps)
            v = eps;
        field.nodal_values[i] = v;
    }
    return field;
}

} // namespace cutlb
