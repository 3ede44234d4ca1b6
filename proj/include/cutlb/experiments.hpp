#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "cutlb/analysis.hpp"

namespace cutlb {

enum class ExperimentKind { Converge, Condition, Sweep };

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Converge;
    int dim = 3;
    Vec3 center{0.5, 0.5, 0.5};
    double radius = 0.5;
    std::vector<int> levels{8, 16, 32, 48}; // cells_per_axis, strictly increasing
    std::vector<double> tau0{0.0, 0.01, 0.1, 1.0};
    bool precond = true;      // condition study: also report diagonally scaled rows
    double sweep_delta = 0.1; // total leftward translation of the circle
    double sweep_step = 0.01;
    uint64_t seed = 2177;
    bool deterministic = false; // byte-stable CSV (zeroes wall-clock columns)
};

// Sphere convergence study. CSV: tau0,level,N,h,e_h,R,energy_err,max_rho,
// max_angle,wall_ms,status. Solver failures are recorded per row and the run
// continues. Returns 0 on success, nonzero on infrastructure failure.
int run_converge(const ExperimentConfig& cfg, std::ostream& csv);

// Condition-number study per level x tau0 x {raw, diagonally scaled}.
// CSV: tau0,precond,level,N,kappa,R,n_neg,n_zero,status.
int run_condition(const ExperimentConfig& cfg, std::ostream& csv);

// Translated-circle sweep on a fixed 2D mesh for tau0 in {0, chosen values}.
// CSV: delta,tau0,N,kappa,n_zero, with kappa = inf where the unstabilized
// system is singular, plus max/min summary rows per tau0.
int run_sweep(const ExperimentConfig& cfg, std::ostream& csv);

// Exact solution, gradient and load of the benchmark problem: the cubic
// harmonic u = (x-cx)(y-cy)(z-cz) restricted to the sphere, which satisfies
// -Lap_Sigma u = (12/r^2) u.
struct SphereTestCase {
    std::function<double(const Vec3&)> u;
    std::function<Vec3(const Vec3&)> grad_u;
    std::function<double(const Vec3&)> f;
};
SphereTestCase sphere_test_case(const AnalyticSurface& sphere);

// 12 significant digits, the CSV float format.
std::string format_sig12(double x);

} // namespace cutlb
