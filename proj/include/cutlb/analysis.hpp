#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "cutlb/linalg.hpp"

namespace cutlb {

// Measurements of one refinement level; the rows of the CSV reports.
struct LevelRecord {
    int n_dofs = 0;
    double h = 0.0;
    double l2_err = std::numeric_limits<double>::quiet_NaN();
    double energy_err = std::numeric_limits<double>::quiet_NaN();
    double kappa = std::numeric_limits<double>::quiet_NaN(); // optional
    GeometryReport geom;
    double tau0 = 0.0;
    double wall_ms = 0.0;

    // positive size parameters and finite measured values; kappa may be unset
    bool valid() const;
};

// e_h = ||u_h - u^e||_{L2(Sigma_h)} with the degree-2 rule. The difference is
// aligned to zero Sigma_h-mean first, since the solution is determined up to a
// constant.
double l2_error(const Eigen::VectorXd& u, const DofMap& dofs, const BackgroundMesh& mesh,
                const AnalyticSurface& surface, const std::function<double(const Vec3&)>& u_exact,
                const CutSurface& cut);

// surface: ||grad_S u_h - (grad_S u) o p||_{L2(Sigma_h)};
// face:    sqrt(j_h(e,e)) with e = u_h - nodal interpolant of u^e.
struct EnergyError {
    double surface = 0.0;
    double face = 0.0;
};
EnergyError energy_error(const Eigen::VectorXd& u, const DofMap& dofs, const BackgroundMesh& mesh,
                         const AnalyticSurface& surface,
                         const std::function<double(const Vec3&)>& u_exact,
                         const std::function<Vec3(const Vec3&)>& grad_u_exact,
                         const CutSurface& cut, const SparseSym& stabilization, double tau0);

// R_k = ln(q_k/q_{k-1}) / ln(h_k/h_{k-1}) with h ~ N^{-1/2}; one value per
// consecutive pair. Requires strictly increasing N and positive q.
std::vector<double> rate(const std::vector<std::pair<double, double>>& n_and_q);

// Empirical constants of the discrete Poincare and inverse inequalities,
// maximized over random zero-mean discrete functions:
//   poincare = max ||v||_{Omega_h} / (h^{1/2} |||v|||_h)
//   inverse  = max |||v|||_h / (h^{-3/2} ||v||_{Omega_h})
struct FunctionalConstants {
    double poincare = 0.0;
    double inverse = 0.0;
};
FunctionalConstants functional_constants(const BackgroundMesh& mesh, const CutSurface& cut,
                                         const DofMap& dofs, const SparseSym& stiffness,
                                         const SparseSym& stabilization, double tau0, int samples,
                                         uint64_t seed);

} // namespace cutlb
