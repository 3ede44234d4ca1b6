#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "cutlb/levelset.hpp"

namespace cutlb {

// Planar piece of the discrete surface inside one cell. In 2D the "triangle"
// degenerates to a segment: v[2] == v[1] and area is the segment length.
struct CutTriangle {
    int owner = -1;
    std::array<Vec3, 3> v{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    double area = 0.0;
    Vec3 normal = Vec3::Zero(); // unit, along increasing rho_h
};

// Discrete surface Sigma_h with the active cell set and the interior faces
// shared by two active cells.
struct CutSurface {
    std::vector<int> active_cells;       // ascending cell indices
    std::vector<CutTriangle> triangles;  // ordered by owner cell
    std::vector<int> active_faces;       // ascending face indices
    double total_area = 0.0;
};

// Cells whose nodal level-set values change sign.
std::vector<int> classify_cells(const LevelSetField& field);

// Intersect the zero level of the linear interpolant with one simplex.
// Sign pattern 1-vs-3 yields one triangle, 2-vs-2 a planar quad split into two
// triangles along the diagonal at the intersection vertex generated by the
// lowest-numbered cut edge. Throws if the values do not change sign.
std::vector<CutTriangle> cut_cell(int dim, int owner, const std::array<Vec3, 4>& verts,
                                  const std::array<double, 4>& vals);

// Interior faces whose two adjacent cells are both active.
std::vector<int> active_faces(const BackgroundMesh& mesh, const std::vector<int>& active_cells);

CutSurface build_cut_surface(const LevelSetField& field);

// Sup of |rho| and of the angle between the exact and discrete normals over
// the vertices and centroid of every cut triangle.
struct GeometryReport {
    double max_abs_rho = 0.0;
    double max_normal_angle = 0.0; // radians
};
GeometryReport geometry_report(const AnalyticSurface& surface, const CutSurface& cut);

// Quadrature on one cut triangle/segment.
struct QuadPoint {
    Vec3 x;
    double w;
};
struct SurfaceQuadrature {
    std::array<QuadPoint, 3> pt;
    int n = 0;
};

// Degree-2 exact rule: edge midpoints on triangles, 2-point Gauss on segments.
SurfaceQuadrature quadrature_degree2(const CutTriangle& t, int dim);
// Vertex rule, exact for affine integrands.
SurfaceQuadrature quadrature_vertices(const CutTriangle& t, int dim);

// Debug dump (owner, vertices, area, normal) as CSV.
void dump_triangles_csv(const CutSurface& cut, std::ostream& out);

} // namespace cutlb
