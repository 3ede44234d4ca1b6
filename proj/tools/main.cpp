#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cutlb/experiments.hpp"

namespace {

using namespace cutlb;

struct CliOptions {
    std::string experiment;
    int dim = 0; // 0 = per-experiment default
    std::vector<int> levels;
    std::vector<double> tau0;
    std::vector<double> center;
    double radius = -1.0;
    bool precond = true;
    double sweep_delta = 0.1;
    double sweep_step = 0.01;
    uint64_t seed = 2177;
    bool deterministic = false;
    std::string out_path;
    std::string dump_mesh_path;
    std::string dump_triangles_path;
    std::string dump_matrix_path;
};

ExperimentConfig make_config(const CliOptions& opt) {
    ExperimentConfig cfg;
    const std::map<std::string, ExperimentKind> kinds{{"converge", ExperimentKind::Converge},
                                                      {"condition", ExperimentKind::Condition},
                                                      {"sweep", ExperimentKind::Sweep}};
    cfg.experiment = kinds.at(opt.experiment);

    switch (cfg.experiment) {
    case ExperimentKind::Converge:
        cfg.dim = 3;
        cfg.levels = {8, 16, 32, 48};
        cfg.tau0 = {0.0, 0.01, 0.1, 1.0};
        cfg.center = Vec3(0.5, 0.5, 0.5);
        cfg.radius = 0.5;
        break;
    case ExperimentKind::Condition:
        cfg.dim = 3;
        cfg.levels = {12, 16, 20};
        cfg.tau0 = {0.0, 0.01, 1.0};
        cfg.center = Vec3(0.5, 0.5, 0.5);
        cfg.radius = 0.5;
        break;
    case ExperimentKind::Sweep:
        cfg.dim = 2;
        cfg.levels = {32};
        cfg.tau0 = {0.1};
        cfg.center = Vec3(0.5, 0.5, 0.0);
        cfg.radius = 0.3;
        break;
    }

    if (opt.dim != 0)
        cfg.dim = opt.dim;
    if (!opt.levels.empty())
        cfg.levels = opt.levels;
    if (!opt.tau0.empty())
        cfg.tau0 = opt.tau0;
    if (!opt.center.empty()) {
        if (opt.center.size() != static_cast<size_t>(cfg.dim))
            throw CLI::ValidationError("--center", "needs one coordinate per dimension");
        cfg.center = Vec3::Zero();
        for (size_t i = 0; i < opt.center.size(); ++i)
            cfg.center[static_cast<int>(i)] = opt.center[i];
    }
    if (opt.radius > 0.0)
        cfg.radius = opt.radius;
    cfg.precond = opt.precond;
    cfg.sweep_delta = opt.sweep_delta;
    cfg.sweep_step = opt.sweep_step;
    cfg.seed = opt.seed;
    cfg.deterministic = opt.deterministic;
    return cfg;
}

void write_debug_dumps(const CliOptions& opt, const ExperimentConfig& cfg) {
    if (opt.dump_mesh_path.empty() && opt.dump_triangles_path.empty() &&
        opt.dump_matrix_path.empty())
        return;
    // dumps describe the first level of the configured run
    const AnalyticSurface surface = cfg.dim == 3
                                        ? make_sphere(cfg.center, cfg.radius)
                                        : make_circle(cfg.center.x(), cfg.center.y(), cfg.radius);
    const BackgroundMesh mesh = build_background_mesh(unit_box(cfg.dim), cfg.levels.front(), cfg.dim);
    if (!opt.dump_mesh_path.empty()) {
        std::ofstream out(opt.dump_mesh_path);
        dump_mesh_csv(mesh, out);
    }
    if (opt.dump_triangles_path.empty() && opt.dump_matrix_path.empty())
        return;
    const LevelSetField field = interpolate_nodal(surface, mesh);
    const CutSurface cut = build_cut_surface(field);
    if (!opt.dump_triangles_path.empty()) {
        std::ofstream out(opt.dump_triangles_path);
        dump_triangles_csv(cut, out);
    }
    if (!opt.dump_matrix_path.empty()) {
        const DofMap dofs = build_dof_map(mesh, cut.active_cells);
        const SparseSym stiffness = assemble_stiffness(cut, mesh, dofs);
        const SparseSym stab = assemble_stabilization(mesh, cut.active_faces, dofs);
        const LinearSystem sys =
            build_system(stiffness, stab, cfg.tau0.front(), mean_constraint(cut, mesh, dofs),
                         Eigen::VectorXd::Zero(dofs.size()));
        std::ofstream out(opt.dump_matrix_path);
        dump_matrix_coord(sys.matrix, out);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cut finite element solver for the Laplace-Beltrami problem on level-set "
                 "surfaces, with face-jump stabilization"};
    CliOptions opt;
    app.add_option("--experiment", opt.experiment, "experiment to run")
        ->required()
        ->check(CLI::IsMember({"converge", "condition", "sweep"}));
    app.add_option("--dim", opt.dim, "space dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
    app.add_option("--levels", opt.levels, "cells per axis per refinement level")->delimiter(',');
    app.add_option("--tau0", opt.tau0, "stabilization parameters")->delimiter(',');
    app.add_option("--center", opt.center, "surface center coordinates")->delimiter(',');
    app.add_option("--radius", opt.radius, "surface radius");
    app.add_flag("--precond,!--no-precond", opt.precond,
                 "include diagonally scaled rows in the condition study (default on)");
    app.add_option("--sweep-delta", opt.sweep_delta, "total circle translation");
    app.add_option("--sweep-step", opt.sweep_step, "translation increment");
    app.add_option("--seed", opt.seed, "rng seed for sampled diagnostics");
    app.add_flag("--deterministic", opt.deterministic, "byte-stable CSV output");
    app.add_option("--out", opt.out_path, "CSV output path (default: stdout)");
    app.add_option("--dump-mesh", opt.dump_mesh_path, "debug: dump first-level mesh as CSV");
    app.add_option("--dump-triangles", opt.dump_triangles_path,
                   "debug: dump first-level cut triangles as CSV");
    app.add_option("--dump-matrix", opt.dump_matrix_path,
                   "debug: dump first-level system in coordinate format");
    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = make_config(opt);

        std::ofstream file;
        if (!opt.out_path.empty()) {
            file.open(opt.out_path);
            if (!file)
                throw std::runtime_error("cannot open output file " + opt.out_path);
        }
        std::ostream& csv = opt.out_path.empty() ? std::cout : file;

        int rc = 0;
        switch (cfg.experiment) {
        case ExperimentKind::Converge:
            rc = run_converge(cfg, csv);
            break;
        case ExperimentKind::Condition:
            rc = run_condition(cfg, csv);
            break;
        case ExperimentKind::Sweep:
            rc = run_sweep(cfg, csv);
            break;
        }
        write_debug_dumps(opt, cfg);
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
