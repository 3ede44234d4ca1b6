#include "cutlb/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cutlb {

DofMap build_dof_map(const BackgroundMesh& mesh, const std::vector<int>& active_cells) {
    DofMap map;
    map.node_to_dof.assign(mesh.nodes.size(), -1);
    for (int c : active_cells)
        for (int k = 0; k < mesh.nodes_per_cell(); ++k)
            map.node_to_dof[mesh.cells[c][k]] = 0;
    for (size_t n = 0; n < map.node_to_dof.size(); ++n) {
        if (map.node_to_dof[n] == 0) {
            map.node_to_dof[n] = map.size();
            map.active_nodes.push_back(static_cast<int>(n));
        } else {
            map.node_to_dof[n] = -1;
        }
    }
    return map;
}

Vec3 tangential_project(const Vec3& g, const Vec3& n) {
    if (std::abs(n.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("tangential_project: normal must have unit length");
    return g - n.dot(g) * n;
}

SparseSym assemble_stiffness(const CutSurface& cut, const BackgroundMesh& mesh,
                             const DofMap& dofs) {
    if (cut.triangles.empty())
        throw std::invalid_argument("assemble_stiffness: empty cut surface");
    const int npc = mesh.nodes_per_cell();
    std::vector<Eigen::Triplet<double>> upper;
    upper.reserve(cut.triangles.size() * 10);
    for (const CutTriangle& t : cut.triangles) {
        const auto grads = p1_gradients(mesh, t.owner);
        std::array<Vec3, 4> pg;
        std::array<int, 4> dof{};
        for (int k = 0; k < npc; ++k) {
            pg[k] = tangential_project(grads[k], t.normal);
            dof[k] = dofs.node_to_dof[mesh.cells[t.owner][k]];
        }
        for (int i = 0; i < npc; ++i) {
            for (int j = i; j < npc; ++j) {
                const double v = t.area * pg[i].dot(pg[j]);
                const int a = std::min(dof[i], dof[j]);
                const int b = std::max(dof[i], dof[j]);
                upper.emplace_back(a, b, v);
            }
        }
    }
    return SparseSym::from_upper_triplets(dofs.size(), std::move(upper));
}

SparseSym assemble_stabilization(const BackgroundMesh& mesh, const std::vector<int>& faces,
                                 const DofMap& dofs) {
    const int npc = mesh.nodes_per_cell();
    std::vector<Eigen::Triplet<double>> upper;
    upper.reserve(faces.size() * 15);
    std::vector<int> local_nodes;
    std::vector<double> jump;
    for (int f : faces) {
        const Face& face = mesh.faces[f];
        local_nodes.clear();
        for (int side = 0; side < 2; ++side)
            for (int k = 0; k < npc; ++k)
                local_nodes.push_back(mesh.cells[face.cells[side]][k]);
        std::sort(local_nodes.begin(), local_nodes.end());
        local_nodes.erase(std::unique(local_nodes.begin(), local_nodes.end()), local_nodes.end());

        jump.assign(local_nodes.size(), 0.0);
        for (int side = 0; side < 2; ++side) {
            const auto grads = p1_gradients(mesh, face.cells[side]);
            const double sign = side == 0 ? 1.0 : -1.0;
            for (int k = 0; k < npc; ++k) {
                const int node = mesh.cells[face.cells[side]][k];
                const auto it = std::lower_bound(local_nodes.begin(), local_nodes.end(), node);
                jump[it - local_nodes.begin()] += sign * face.normal.dot(grads[k]);
            }
        }
        for (size_t i = 0; i < local_nodes.size(); ++i) {
            for (size_t j = i; j < local_nodes.size(); ++j) {
                const double v = face.measure * jump[i] * jump[j];
                const int a = dofs.node_to_dof[local_nodes[i]];
                const int b = dofs.node_to_dof[local_nodes[j]];
                upper.emplace_back(std::min(a, b), std::max(a, b), v);
            }
        }
    }
    return SparseSym::from_upper_triplets(dofs.size(), std::move(upper));
}

Eigen::VectorXd assemble_load(const CutSurface& cut, const BackgroundMesh& mesh,
                              const AnalyticSurface& surface,
                              const std::function<double(const Vec3&)>& f, const DofMap& dofs) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(dofs.size());
    const int npc = mesh.nodes_per_cell();
    for (const CutTriangle& t : cut.triangles) {
        const SurfaceQuadrature quad = quadrature_degree2(t, mesh.dim);
        for (int q = 0; q < quad.n; ++q) {
            const double fe = f(closest_point(surface, quad.pt[q].x));
            const auto lam = barycentric(mesh, t.owner, quad.pt[q].x);
            for (int k = 0; k < npc; ++k)
                b[dofs.node_to_dof[mesh.cells[t.owner][k]]] += quad.pt[q].w * fe * lam[k];
        }
    }
    return b;
}

Eigen::VectorXd mean_constraint(const CutSurface& cut, const BackgroundMesh& mesh,
                                const DofMap& dofs) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dofs.size());
    const int npc = mesh.nodes_per_cell();
    for (const CutTriangle& t : cut.triangles) {
        const SurfaceQuadrature quad = quadrature_vertices(t, mesh.dim);
        for (int q = 0; q < quad.n; ++q) {
            const auto lam = barycentric(mesh, t.owner, quad.pt[q].x);
            for (int k = 0; k < npc; ++k)
                c[dofs.node_to_dof[mesh.cells[t.owner][k]]] += quad.pt[q].w * lam[k];
        }
    }
    return c;
}

SparseSym assemble_active_mass(const BackgroundMesh& mesh, const std::vector<int>& active_cells,
                               const DofMap& dofs) {
    const int npc = mesh.nodes_per_cell();
    const double denom = static_cast<double>(npc * (npc + 1)); // (d+1)(d+2)
    std::vector<Eigen::Triplet<double>> upper;
    upper.reserve(active_cells.size() * 10);
    for (int c : active_cells) {
        const double vol = mesh.cell_volume(c);
        for (int i = 0; i < npc; ++i) {
            for (int j = i; j < npc; ++j) {
                const double v = vol * (i == j ? 2.0 : 1.0) / denom;
                const int a = dofs.node_to_dof[mesh.cells[c][i]];
                const int b = dofs.node_to_dof[mesh.cells[c][j]];
                upper.emplace_back(std::min(a, b), std::max(a, b), v);
            }
        }
    }
    return SparseSym::from_upper_triplets(dofs.size(), std::move(upper));
}

LinearSystem build_system(const SparseSym& stiffness, const SparseSym& stabilization, double tau0,
                          const Eigen::VectorXd& constraint, const Eigen::VectorXd& load) {
    if (tau0 < 0.0)
        throw std::invalid_argument("build_system: tau0 must be nonnegative");
    const int n = stiffness.rows();
    if (stabilization.rows() != n || constraint.size() != n || load.size() != n)
        throw std::invalid_argument("build_system: dimension mismatch");

    const Eigen::SparseMatrix<double, Eigen::RowMajor> block =
        stiffness.matrix() + tau0 * stabilization.matrix();
    std::vector<Eigen::Triplet<double>> upper;
    upper.reserve(block.nonZeros() / 2 + n + 2);
    for (int k = 0; k < block.outerSize(); ++k)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(block, k); it; ++it)
            if (it.col() >= it.row())
                upper.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                                   it.value());
    for (int i = 0; i < n; ++i)
        upper.emplace_back(i, n, constraint[i]);
    upper.emplace_back(n, n, 0.0);

    LinearSystem sys;
    sys.matrix = SparseSym::from_upper_triplets(n + 1, std::move(upper));
    sys.rhs = Eigen::VectorXd::Zero(n + 1);
    sys.rhs.head(n) = load;
    sys.tau0 = tau0;
    sys.n_dofs = n;
    return sys;
}

LinearSystem diagonal_scaling(const LinearSystem& sys) {
    const int n = sys.n_dofs;
    const Eigen::VectorXd diag = sys.matrix.diagonal();
    const double dmax = diag.head(n).maxCoeff();
    if (!(dmax > 0.0))
        throw std::invalid_argument("diagonal_scaling: stiffness block has an all-zero diagonal");
    constexpr double eps = 1e-14;
    Eigen::VectorXd s(n + 1);
    for (int i = 0; i < n; ++i)
        s[i] = 1.0 / std::sqrt(std::max(diag[i], eps * dmax));
    s[n] = 1.0;

    std::vector<Eigen::Triplet<double>> upper;
    const auto& m = sys.matrix.matrix();
    upper.reserve(m.nonZeros() / 2 + 1);
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, k); it; ++it)
            if (it.col() >= it.row())
                upper.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                                   it.value() * (s[it.row()] * s[it.col()]));

    LinearSystem out;
    out.matrix = SparseSym::from_upper_triplets(n + 1, std::move(upper));
    out.rhs = sys.rhs.cwiseProduct(s);
    out.tau0 = sys.tau0;
    out.n_dofs = n;
    return out;
}

} // namespace cutlb
