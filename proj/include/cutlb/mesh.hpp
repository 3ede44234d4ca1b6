#pragma once

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "cutlb/types.hpp"

namespace cutlb {

// Interior face shared by exactly two cells. In 2D the face is an edge and
// nodes[2] == -1. The stored normal is unit and points from cells[0] towards
// cells[1].
struct Face {
    std::array<int, 2> cells{-1, -1};
    std::array<int, 3> nodes{-1, -1, -1};
    Vec3 normal = Vec3::Zero();
    double measure = 0.0; // edge length (2D) or triangle area (3D)
};

// Structured quasi-uniform simplex mesh of an axis-aligned box: squares split
// along the lower-left diagonal in 2D, cubes by the Kuhn subdivision into six
// tetrahedra in 3D. All cells have equal volume. Boundary faces are not
// stored. Immutable after construction.
struct BackgroundMesh {
    int dim = 3;
    double h = 0.0; // grid-cell edge length (largest axis extent / cells_per_axis)
    Box box;
    std::vector<Vec3> nodes;
    std::vector<std::array<int, 4>> cells; // entry [dim] == -1 in 2D
    std::vector<Face> faces;               // interior faces only

    int nodes_per_cell() const { return dim + 1; }
    Vec3 cell_vertex(int cell, int k) const { return nodes[cells[cell][k]]; }
    Vec3 cell_centroid(int cell) const;
    double cell_volume(int cell) const;
};

BackgroundMesh build_background_mesh(const Box& box, int cells_per_axis, int dim);

// Stored unit normal and (dim-1)-measure of an interior face.
std::pair<Vec3, double> face_normal_and_measure(const BackgroundMesh& mesh, int face);

// Constant gradients of the P1 vertex basis functions on a cell. The first
// gradient is the negated sum of the others, so the four (three in 2D) sum
// to zero exactly.
std::array<Vec3, 4> p1_gradients(const BackgroundMesh& mesh, int cell);

// Barycentric coordinates of x with respect to a cell.
std::array<double, 4> barycentric(const BackgroundMesh& mesh, int cell, const Vec3& x);

// Debug dump of nodes and cells as CSV.
void dump_mesh_csv(const BackgroundMesh& mesh, std::ostream& out);

} // namespace cutlb
