#pragma once

#include <functional>
#include <vector>

#include "cutlb/cutgeom.hpp"
#include "cutlb/sparse.hpp"

namespace cutlb {

// Dofs are the vertex basis functions of all active cells, numbered in
// ascending node order.
struct DofMap {
    std::vector<int> active_nodes; // ascending; dof i <-> active_nodes[i]
    std::vector<int> node_to_dof;  // -1 for inactive nodes
    int size() const { return static_cast<int>(active_nodes.size()); }
};

DofMap build_dof_map(const BackgroundMesh& mesh, const std::vector<int>& active_cells);

// g - (n.g) n; requires |n| = 1 to 1e-12.
Vec3 tangential_project(const Vec3& g, const Vec3& n);

// a_h(v,w) = (grad_S v, grad_S w)_{Sigma_h}: the integrand is constant on each
// cut triangle, so one-point quadrature is exact.
SparseSym assemble_stiffness(const CutSurface& cut, const BackgroundMesh& mesh, const DofMap& dofs);

// j_h at unit tau0: per face |F| * [n_F.grad phi_i][n_F.grad phi_j]; the jump
// coefficients are constants for P1, no h-power scaling is applied.
SparseSym assemble_stabilization(const BackgroundMesh& mesh, const std::vector<int>& faces,
                                 const DofMap& dofs);

// l_h(v) = (f^e, v)_{Sigma_h}; f is given on the surface and extended by the
// closest-point projection, integrated with the degree-2 rule.
Eigen::VectorXd assemble_load(const CutSurface& cut, const BackgroundMesh& mesh,
                              const AnalyticSurface& surface,
                              const std::function<double(const Vec3&)>& f, const DofMap& dofs);

// c_i = int_{Sigma_h} phi_i, exact via the vertex rule.
Eigen::VectorXd mean_constraint(const CutSurface& cut, const BackgroundMesh& mesh,
                                const DofMap& dofs);

// P1 mass matrix over the whole active cells (Omega_h), assembled exactly.
SparseSym assemble_active_mass(const BackgroundMesh& mesh, const std::vector<int>& active_cells,
                               const DofMap& dofs);

// Bordered symmetric system [[A_a + tau0 A_j, c], [c^T, 0]], rhs [b; 0].
// Row n_dofs is the mean-value Lagrange multiplier.
struct LinearSystem {
    SparseSym matrix;
    Eigen::VectorXd rhs;
    double tau0 = 0.0;
    int n_dofs = 0;
};

LinearSystem build_system(const SparseSym& stiffness, const SparseSym& stabilization, double tau0,
                          const Eigen::VectorXd& constraint, const Eigen::VectorXd& load);

// D^{-1/2} A D^{-1/2} with D from the stiffness-block diagonal (floored at
// 1e-14 of its max); the multiplier row keeps scale 1 and the constraint
// column is scaled consistently. Intended for condition-number reporting.
LinearSystem diagonal_scaling(const LinearSystem& sys);

} // namespace cutlb
