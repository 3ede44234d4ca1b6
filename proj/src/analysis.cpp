#include "cutlb/analysis.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cutlb {

bool LevelRecord::valid() const {
    return n_dofs > 0 && h > 0.0 && std::isfinite(l2_err) && std::isfinite(energy_err) &&
           std::isfinite(geom.max_abs_rho) && std::isfinite(geom.max_normal_angle) &&
           std::isfinite(tau0) && std::isfinite(wall_ms);
}

namespace {

double evaluate_p1(const Eigen::VectorXd& u, const DofMap& dofs, const BackgroundMesh& mesh,
                   int cell, const Vec3& x) {
    const auto lam = barycentric(mesh, cell, x);
    double val = 0.0;
    for (int k = 0; k < mesh.nodes_per_cell(); ++k)
        val += lam[k] * u[dofs.node_to_dof[mesh.cells[cell][k]]];
    return val;
}

} // namespace

double l2_error(const Eigen::VectorXd& u, const DofMap& dofs, const BackgroundMesh& mesh,
                const AnalyticSurface& surface, const std::function<double(const Vec3&)>& u_exact,
                const CutSurface& cut) {
    std::vector<std::pair<double, double>> samples; // (weight, u_h - u^e)
    samples.reserve(cut.triangles.size() * 3);
    double area = 0.0, mean = 0.0;
    for (const CutTriangle& t : cut.triangles) {
        const SurfaceQuadrature quad = quadrature_degree2(t, mesh.dim);
        for (int q = 0; q < quad.n; ++q) {
            const double uh = evaluate_p1(u, dofs, mesh, t.owner, quad.pt[q].x);
            const double ue = u_exact(closest_point(surface, quad.pt[q].x));
            samples.emplace_back(quad.pt[q].w, uh - ue);
            area += quad.pt[q].w;
            mean += quad.pt[q].w * (uh - ue);
        }
    }
    mean /= area;
    double err2 = 0.0;
    for (const auto& [w, d] : samples)
        err2 += w * (d - mean) * (d - mean);
    return std::sqrt(err2);
}

EnergyError energy_error(const Eigen::VectorXd& u, const DofMap& dofs, const BackgroundMesh& mesh,
                         const AnalyticSurface& surface,
                         const std::function<double(const Vec3&)>& u_exact,
                         const std::function<Vec3(const Vec3&)>& grad_u_exact,
                         const CutSurface& cut, const SparseSym& stabilization, double tau0) {
    EnergyError err;
    double acc = 0.0;
    for (const CutTriangle& t : cut.triangles) {
        const auto grads = p1_gradients(mesh, t.owner);
        Vec3 grad_uh = Vec3::Zero();
        for (int k = 0; k < mesh.nodes_per_cell(); ++k)
            grad_uh += u[dofs.node_to_dof[mesh.cells[t.owner][k]]] * grads[k];
        const Vec3 pg_uh = tangential_project(grad_uh, t.normal);
        const SurfaceQuadrature quad = quadrature_degree2(t, mesh.dim);
        for (int q = 0; q < quad.n; ++q) {
            const Vec3 p = closest_point(surface, quad.pt[q].x);
            const Vec3 ge = tangential_project(grad_u_exact(p), unit_normal(surface, p));
            acc += quad.pt[q].w * (pg_uh - ge).squaredNorm();
        }
    }
    err.surface = std::sqrt(acc);

    Eigen::VectorXd e(dofs.size());
    for (int i = 0; i < dofs.size(); ++i)
        e[i] = u[i] - u_exact(closest_point(surface, mesh.nodes[dofs.active_nodes[i]]));
    err.face = std::sqrt(std::max(0.0, tau0 * stabilization.quad_form(e)));
    return err;
}

std::vector<double> rate(const std::vector<std::pair<double, double>>& n_and_q) {
    if (n_and_q.size() < 2)
        throw std::invalid_argument("rate: need at least two levels");
    for (size_t k = 0; k < n_and_q.size(); ++k) {
        if (!(n_and_q[k].second > 0.0))
            throw std::invalid_argument("rate: quantities must be positive");
        if (k > 0 && !(n_and_q[k].first > n_and_q[k - 1].first))
            throw std::invalid_argument("rate: dof counts must be strictly increasing");
    }
    std::vector<double> rates;
    for (size_t k = 1; k < n_and_q.size(); ++k) {
        const double dlog_q = std::log(n_and_q[k].second / n_and_q[k - 1].second);
        const double dlog_h = -0.5 * std::log(n_and_q[k].first / n_and_q[k - 1].first);
        rates.push_back(dlog_q / dlog_h);
    }
    return rates;
}

FunctionalConstants functional_constants(const BackgroundMesh& mesh, const CutSurface& cut,
                                         const DofMap& dofs, const SparseSym& stiffness,
                                         const SparseSym& stabilization, double tau0, int samples,
                                         uint64_t seed) {
    if (samples < 1)
        throw std::invalid_argument("functional_constants: samples must be positive");
    if (!(tau0 > 0.0))
        throw std::invalid_argument("functional_constants: tau0 must be positive");
    const SparseSym mass = assemble_active_mass(mesh, cut.active_cells, dofs);
    const Eigen::VectorXd c = mean_constraint(cut, mesh, dofs);
    const double c_total = c.sum();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const double h = mesh.h;
    FunctionalConstants out;
    Eigen::VectorXd v(dofs.size());
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < dofs.size(); ++i)
            v[i] = gauss(rng);
        v.array() -= c.dot(v) / c_total;
        const double l2 = std::sqrt(mass.quad_form(v));
        const double tn =
            std::sqrt(std::max(0.0, stiffness.quad_form(v) + tau0 * stabilization.quad_form(v)));
        out.poincare = std::max(out.poincare, l2 / (std::sqrt(h) * tn));
        out.inverse = std::max(out.inverse, tn * std::pow(h, 1.5) / l2);
    }
    return out;
}

} // namespace cutlb
