#include "cutlb/cutgeom.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cutlb {

namespace {

constexpr int kTetEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
constexpr int kTriEdges[3][2] = {{0, 1}, {0, 2}, {1, 2}};

Vec3 edge_cut(const Vec3& a, const Vec3& b, double va, double vb) {
    const double t = va / (va - vb);
    return a + t * (b - a);
}

Vec3 interpolant_gradient(int dim, const std::array<Vec3, 4>& verts,
                          const std::array<double, 4>& vals) {
    // constant gradient of the linear interpolant on the simplex
    if (dim == 2) {
        Eigen::Matrix2d m;
        m.row(0) = (verts[1] - verts[0]).head<2>();
        m.row(1) = (verts[2] - verts[0]).head<2>();
        const Eigen::Vector2d d(vals[1] - vals[0], vals[2] - vals[0]);
        const Eigen::Vector2d g = m.inverse() * d;
        return Vec3(g.x(), g.y(), 0.0);
    }
    Eigen::Matrix3d m;
    Vec3 d;
    for (int i = 1; i < 4; ++i) {
        m.row(i - 1) = verts[i] - verts[0];
        d[i - 1] = vals[i] - vals[0];
    }
    return m.inverse() * d;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

} // namespace

std::vector<int> classify_cells(const LevelSetField& field) {
    const BackgroundMesh& mesh = *field.mesh;
    const int npc = mesh.nodes_per_cell();
    std::vector<int> active;
    for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
        bool pos = false, neg = false;
        for (int k = 0; k < npc; ++k)
            (field.nodal_values[mesh.cells[c][k]] > 0.0 ? pos : neg) = true;
        if (pos && neg)
            active.push_back(c);
    }
    return active;
}

std::vector<CutTriangle> cut_cell(int dim, int owner, const std::array<Vec3, 4>& verts,
                                  const std::array<double, 4>& vals) {
    const int nv = dim + 1;
    int n_neg = 0;
    for (int k = 0; k < nv; ++k)
        n_neg += vals[k] < 0.0 ? 1 : 0;
    if (n_neg == 0 || n_neg == nv)
        throw std::invalid_argument("cut_cell: cell not cut (values do not change sign)");

    const Vec3 normal = interpolant_gradient(dim, verts, vals).normalized();

    // intersection points on sign-changing edges, in fixed edge order
    struct Cut {
        int edge;
        Vec3 p;
    };
    std::array<Cut, 4> cuts{};
    int n_cuts = 0;
    const int n_edges = dim == 2 ? 3 : 6;
    for (int e = 0; e < n_edges; ++e) {
        const int a = dim == 2 ? kTriEdges[e][0] : kTetEdges[e][0];
        const int b = dim == 2 ? kTriEdges[e][1] : kTetEdges[e][1];
        if ((vals[a] < 0.0) != (vals[b] < 0.0))
            cuts[n_cuts++] = {e, edge_cut(verts[a], verts[b], vals[a], vals[b])};
    }

    std::vector<CutTriangle> out;
    if (dim == 2) {
        CutTriangle t;
        t.owner = owner;
        t.v = {cuts[0].p, cuts[1].p, cuts[1].p};
        t.area = (cuts[1].p - cuts[0].p).norm();
        t.normal = normal;
        out.push_back(t);
        return out;
    }

    if (n_cuts == 3) {
        CutTriangle t;
        t.owner = owner;
        t.v = {cuts[0].p, cuts[1].p, cuts[2].p};
        t.area = triangle_area(t.v[0], t.v[1], t.v[2]);
        t.normal = normal;
        out.push_back(t);
        return out;
    }

    // 2-vs-2: the four cut points form a planar quad. Consecutive quad corners
    // share a tetrahedron vertex, which fixes the cyclic order
    // (a,c) -> (a,d) -> (b,d) -> (b,c) for negatives {a,b} and positives {c,d}.
    std::array<int, 2> neg{}, pos{};
    int in = 0, ip = 0;
    for (int k = 0; k < 4; ++k)
        (vals[k] < 0.0 ? neg[in++] : pos[ip++]) = k;
    auto find_cut = [&](int a, int b) -> const Cut& {
        for (int s = 0; s < n_cuts; ++s) {
            const int ea = kTetEdges[cuts[s].edge][0];
            const int eb = kTetEdges[cuts[s].edge][1];
            if ((ea == a && eb == b) || (ea == b && eb == a))
                return cuts[s];
        }
        throw std::logic_error("cut_cell: missing cut edge");
    };
    std::array<const Cut*, 4> quad{&find_cut(neg[0], pos[0]), &find_cut(neg[0], pos[1]),
                                   &find_cut(neg[1], pos[1]), &find_cut(neg[1], pos[0])};
    // rotate so the vertex from the lowest-numbered cut edge comes first
    int first = 0;
    for (int s = 1; s < 4; ++s)
        if (quad[s]->edge < quad[first]->edge)
            first = s;
    std::array<Vec3, 4> q;
    for (int s = 0; s < 4; ++s)
        q[s] = quad[(first + s) % 4]->p;

    for (int s = 0; s < 2; ++s) {
        CutTriangle t;
        t.owner = owner;
        t.v = {q[0], q[1 + s], q[2 + s]};
        t.area = triangle_area(t.v[0], t.v[1], t.v[2]);
        t.normal = normal;
        out.push_back(t);
    }
    return out;
}

std::vector<int> active_faces(const BackgroundMesh& mesh, const std::vector<int>& active_cells) {
    std::vector<char> is_active(mesh.cells.size(), 0);
    for (int c : active_cells)
        is_active[c] = 1;
    std::vector<int> out;
    for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
        const Face& face = mesh.faces[f];
        if (is_active[face.cells[0]] && is_active[face.cells[1]])
            out.push_back(f);
    }
    return out;
}

CutSurface build_cut_surface(const LevelSetField& field) {
    const BackgroundMesh& mesh = *field.mesh;
    CutSurface cut;
    cut.active_cells = classify_cells(field);
    for (int c : cut.active_cells) {
        std::array<Vec3, 4> verts{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
        std::array<double, 4> vals{0.0, 0.0, 0.0, 0.0};
        for (int k = 0; k < mesh.nodes_per_cell(); ++k) {
            verts[k] = mesh.cell_vertex(c, k);
            vals[k] = field.nodal_values[mesh.cells[c][k]];
        }
        for (auto& t : cut_cell(mesh.dim, c, verts, vals)) {
            cut.total_area += t.area;
            cut.triangles.push_back(std::move(t));
        }
    }
    cut.active_faces = active_faces(mesh, cut.active_cells);
    return cut;
}

GeometryReport geometry_report(const AnalyticSurface& surface, const CutSurface& cut) {
    if (cut.triangles.empty())
        throw std::invalid_argument("geometry_report: empty cut surface");
    GeometryReport rep;
    const int n_verts = surface.dim() == 2 ? 2 : 3;
    for (const CutTriangle& t : cut.triangles) {
        std::array<Vec3, 4> pts;
        int np = 0;
        Vec3 centroid = Vec3::Zero();
        for (int k = 0; k < n_verts; ++k) {
            pts[np++] = t.v[k];
            centroid += t.v[k];
        }
        pts[np++] = centroid / n_verts;
        for (int k = 0; k < np; ++k) {
            rep.max_abs_rho = std::max(rep.max_abs_rho, std::abs(signed_distance(surface, pts[k])));
            const double c = std::clamp(unit_normal(surface, pts[k]).dot(t.normal), -1.0, 1.0);
            rep.max_normal_angle = std::max(rep.max_normal_angle, std::acos(c));
        }
    }
    return rep;
}

SurfaceQuadrature quadrature_degree2(const CutTriangle& t, int dim) {
    SurfaceQuadrature q;
    if (dim == 2) {
        // 2-point Gauss on the segment
        const Vec3 m = 0.5 * (t.v[0] + t.v[1]);
        const Vec3 d = 0.5 * (t.v[1] - t.v[0]) / std::sqrt(3.0);
        q.pt[0] = {m - d, 0.5 * t.area};
        q.pt[1] = {m + d, 0.5 * t.area};
        q.n = 2;
    } else {
        const double w = t.area / 3.0;
        q.pt[0] = {0.5 * (t.v[0] + t.v[1]), w};
        q.pt[1] = {0.5 * (t.v[1] + t.v[2]), w};
        q.pt[2] = {0.5 * (t.v[0] + t.v[2]), w};
        q.n = 3;
    }
    return q;
}

SurfaceQuadrature quadrature_vertices(const CutTriangle& t, int dim) {
    SurfaceQuadrature q;
    if (dim == 2) {
        q.pt[0] = {t.v[0], 0.5 * t.area};
        q.pt[1] = {t.v[1], 0.5 * t.area};
        q.n = 2;
    } else {
        const double w = t.area / 3.0;
        for (int k = 0; k < 3; ++k)
            q.pt[k] = {t.v[k], w};
        q.n = 3;
    }
    return q;
}

void dump_triangles_csv(const CutSurface& cut, std::ostream& out) {
    out << "owner,x0,y0,z0,x1,y1,z1,x2,y2,z2,area,nx,ny,nz\n";
    for (const CutTriangle& t : cut.triangles) {
        out << t.owner;
        for (int k = 0; k < 3; ++k)
            out << ',' << t.v[k].x() << ',' << t.v[k].y() << ',' << t.v[k].z();
        out << ',' << t.area << ',' << t.normal.x() << ',' << t.normal.y() << ',' << t.normal.z()
            << '\n';
    }
}

} // namespace cutlb
