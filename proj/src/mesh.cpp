#include "cutlb/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cutlb {

namespace {

// Facet of a cell, keyed by its sorted node ids.
struct FacetRef {
    std::array<int, 3> key; // key[2] == -1 in 2D
    int cell;

    bool operator<(const FacetRef& o) const {
        if (key != o.key)
            return key < o.key;
        return cell < o.cell;
    }
};

Vec3 grid_node(const Box& box, int nx, int dim, int i, int j, int k) {
    const Vec3 ext = box.hi - box.lo;
    Vec3 p = box.lo;
    p.x() += ext.x() * (static_cast<double>(i) / nx);
    p.y() += ext.y() * (static_cast<double>(j) / nx);
    if (dim == 3)
        p.z() += ext.z() * (static_cast<double>(k) / nx);
    return p;
}

void append_cell_facets(const BackgroundMesh& mesh, int cell, std::vector<FacetRef>& out) {
    const auto& c = mesh.cells[cell];
    if (mesh.dim == 2) {
        constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
        for (const auto& p : pairs) {
            std::array<int, 3> key{c[p[0]], c[p[1]], -1};
            if (key[0] > key[1])
                std::swap(key[0], key[1]);
            out.push_back({key, cell});
        }
    } else {
        constexpr int triples[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
        for (const auto& t : triples) {
            std::array<int, 3> key{c[t[0]], c[t[1]], c[t[2]]};
            std::sort(key.begin(), key.end());
            out.push_back({key, cell});
        }
    }
}

Face make_face(const BackgroundMesh& mesh, const std::array<int, 3>& key, int cell_a, int cell_b) {
    Face f;
    f.cells = {cell_a, cell_b};
    f.nodes = key;
    if (mesh.dim == 2) {
        const Vec3 t = mesh.nodes[key[1]] - mesh.nodes[key[0]];
        f.measure = t.norm();
        f.normal = Vec3(t.y(), -t.x(), 0.0) / f.measure;
    } else {
        const Vec3 e1 = mesh.nodes[key[1]] - mesh.nodes[key[0]];
        const Vec3 e2 = mesh.nodes[key[2]] - mesh.nodes[key[0]];
        const Vec3 c = e1.cross(e2);
        const double n = c.norm();
        f.measure = 0.5 * n;
        f.normal = c / n;
    }
    // orient from the first adjacent cell to the second
    const Vec3 d = mesh.cell_centroid(cell_b) - mesh.cell_centroid(cell_a);
    if (f.normal.dot(d) < 0.0)
        f.normal = -f.normal;
    return f;
}

} // namespace

Vec3 BackgroundMesh::cell_centroid(int cell) const {
    Vec3 c = Vec3::Zero();
    const int npc = nodes_per_cell();
    for (int k = 0; k < npc; ++k)
        c += nodes[cells[cell][k]];
    return c / npc;
}

double BackgroundMesh::cell_volume(int cell) const {
    const auto& c = cells[cell];
    if (dim == 2) {
        const Vec3 e1 = nodes[c[1]] - nodes[c[0]];
        const Vec3 e2 = nodes[c[2]] - nodes[c[0]];
        return 0.5 * std::abs(e1.x() * e2.y() - e1.y() * e2.x());
    }
    const Vec3 e1 = nodes[c[1]] - nodes[c[0]];
    const Vec3 e2 = nodes[c[2]] - nodes[c[0]];
    const Vec3 e3 = nodes[c[3]] - nodes[c[0]];
    return std::abs(e1.dot(e2.cross(e3))) / 6.0;
}

BackgroundMesh build_background_mesh(const Box& box, int cells_per_axis, int dim) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("dim must be 2 or 3");
    if (cells_per_axis < 1)
        throw std::invalid_argument("cells_per_axis must be >= 1");
    const Vec3 ext = box.hi - box.lo;
    for (int a = 0; a < dim; ++a)
        if (!(ext[a] > 0.0))
            throw std::invalid_argument("box must have positive extent in every axis");

    BackgroundMesh mesh;
    mesh.dim = dim;
    mesh.box = box;
    double hmax = 0.0;
    for (int a = 0; a < dim; ++a)
        hmax = std::max(hmax, ext[a] / cells_per_axis);
    mesh.h = hmax;

    const int n = cells_per_axis;
    const int nn = n + 1;

    if (dim == 2) {
        mesh.nodes.reserve(static_cast<size_t>(nn) * nn);
        for (int j = 0; j < nn; ++j)
            for (int i = 0; i < nn; ++i)
                mesh.nodes.push_back(grid_node(box, n, 2, i, j, 0));
        auto id = [nn](int i, int j) { return j * nn + i; };
        mesh.cells.reserve(static_cast<size_t>(2) * n * n);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int a = id(i, j), b = id(i + 1, j);
                const int c = id(i + 1, j + 1), d = id(i, j + 1);
                // split along the lower-left diagonal a-c
                mesh.cells.push_back({a, b, c, -1});
                mesh.cells.push_back({a, c, d, -1});
            }
        }
    } else {
        mesh.nodes.reserve(static_cast<size_t>(nn) * nn * nn);
        for (int k = 0; k < nn; ++k)
            for (int j = 0; j < nn; ++j)
                for (int i = 0; i < nn; ++i)
                    mesh.nodes.push_back(grid_node(box, n, 3, i, j, k));
        auto id = [nn](int i, int j, int k) { return (k * nn + j) * nn + i; };
        // Kuhn subdivision: each cube splits into 6 tetrahedra around the main
        // diagonal, one per permutation of the axes.
        constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                     {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        mesh.cells.reserve(static_cast<size_t>(6) * n * n * n);
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i) {
                    for (const auto& p : perms) {
                        std::array<int, 3> o{0, 0, 0};
                        std::array<int, 4> cell{};
                        cell[0] = id(i, j, k);
                        for (int s = 0; s < 3; ++s) {
                            o[p[s]] = 1;
                            cell[s + 1] = id(i + o[0], j + o[1], k + o[2]);
                        }
                        mesh.cells.push_back(cell);
                    }
                }
            }
        }
    }

    // interior faces: facets shared by exactly two cells
    std::vector<FacetRef> facets;
    facets.reserve(mesh.cells.size() * static_cast<size_t>(dim + 1));
    for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
        append_cell_facets(mesh, c, facets);
    std::sort(facets.begin(), facets.end());
    for (size_t s = 0; s + 1 < facets.size();) {
        if (facets[s].key == facets[s + 1].key) {
            mesh.faces.push_back(make_face(mesh, facets[s].key, facets[s].cell, facets[s + 1].cell));
            s += 2;
        } else {
            ++s;
        }
    }
    return mesh;
}

std::pair<Vec3, double> face_normal_and_measure(const BackgroundMesh& mesh, int face) {
    if (face < 0 || face >= static_cast<int>(mesh.faces.size()))
        throw std::out_of_range("face index out of range");
    return {mesh.faces[face].normal, mesh.faces[face].measure};
}

std::array<Vec3, 4> p1_gradients(const BackgroundMesh& mesh, int cell) {
    std::array<Vec3, 4> g{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    const Vec3 v0 = mesh.cell_vertex(cell, 0);
    if (mesh.dim == 2) {
        Eigen::Matrix2d m;
        m.row(0) = (mesh.cell_vertex(cell, 1) - v0).head<2>();
        m.row(1) = (mesh.cell_vertex(cell, 2) - v0).head<2>();
        const Eigen::Matrix2d inv = m.inverse();
        for (int i = 1; i < 3; ++i)
            g[i].head<2>() = inv.col(i - 1);
        g[0] = -(g[1] + g[2]);
    } else {
        Eigen::Matrix3d m;
        for (int i = 1; i < 4; ++i)
            m.row(i - 1) = mesh.cell_vertex(cell, i) - v0;
        const Eigen::Matrix3d inv = m.inverse();
        for (int i = 1; i < 4; ++i)
            g[i] = inv.col(i - 1);
        g[0] = -(g[1] + g[2] + g[3]);
    }
    return g;
}

std::array<double, 4> barycentric(const BackgroundMesh& mesh, int cell, const Vec3& x) {
    std::array<double, 4> lam{0.0, 0.0, 0.0, 0.0};
    const Vec3 v0 = mesh.cell_vertex(cell, 0);
    if (mesh.dim == 2) {
        Eigen::Matrix2d m;
        m.col(0) = (mesh.cell_vertex(cell, 1) - v0).head<2>();
        m.col(1) = (mesh.cell_vertex(cell, 2) - v0).head<2>();
        const Eigen::Vector2d s = m.inverse() * (x - v0).head<2>();
        lam[1] = s[0];
        lam[2] = s[1];
        lam[0] = 1.0 - s[0] - s[1];
    } else {
        Eigen::Matrix3d m;
        for (int i = 1; i < 4; ++i)
            m.col(i - 1) = mesh.cell_vertex(cell, i) - v0;
        const Vec3 s = m.inverse() * (x - v0);
        lam[1] = s[0];
        lam[2] = s[1];
        lam[3] = s[2];
        lam[0] = 1.0 - s[0] - s[1] - s[2];
    }
    return lam;
}

void dump_mesh_csv(const BackgroundMesh& mesh, std::ostream& out) {
    out << "kind,id,a,b,c,d\n";
    for (size_t i = 0; i < mesh.nodes.size(); ++i)
        out << "node," << i << ',' << mesh.nodes[i].x() << ',' << mesh.nodes[i].y() << ','
            << mesh.nodes[i].z() << ",\n";
    for (size_t c = 0; c < mesh.cells.size(); ++c) {
        const auto& cell = mesh.cells[c];
        out << "cell," << c << ',' << cell[0] << ',' << cell[1] << ',' << cell[2] << ',' << cell[3]
            << '\n';
    }
}

} // namespace cutlb
