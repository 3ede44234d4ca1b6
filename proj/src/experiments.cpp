#include "cutlb/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cutlb {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    const auto d = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double, std::milli>(d).count();
}

void validate_common(const ExperimentConfig& cfg) {
    if (cfg.levels.empty())
        throw std::invalid_argument("config: at least one refinement level required");
    for (size_t k = 0; k < cfg.levels.size(); ++k) {
        if (cfg.levels[k] < 1)
            throw std::invalid_argument("config: levels must be positive");
        if (k > 0 && cfg.levels[k] <= cfg.levels[k - 1])
            throw std::invalid_argument("config: levels must be strictly increasing");
    }
    if (cfg.tau0.empty())
        throw std::invalid_argument("config: at least one tau0 value required");
    for (double t : cfg.tau0)
        if (t < 0.0)
            throw std::invalid_argument("config: tau0 values must be nonnegative");
}

// Geometry and assembled pieces shared by all tau0 cases of one level.
struct LevelSetup {
    BackgroundMesh mesh;
    LevelSetField field;
    CutSurface cut;
    DofMap dofs;
    SparseSym stiffness;
    SparseSym stabilization;
    Eigen::VectorXd constraint;
    bool empty = false;
};

LevelSetup prepare_level(const AnalyticSurface& surface, int cells, int dim) {
    LevelSetup s;
    s.mesh = build_background_mesh(unit_box(dim), cells, dim);
    s.field = interpolate_nodal(surface, s.mesh);
    s.cut = build_cut_surface(s.field);
    if (s.cut.active_cells.empty()) {
        s.empty = true;
        return s;
    }
    s.dofs = build_dof_map(s.mesh, s.cut.active_cells);
    s.stiffness = assemble_stiffness(s.cut, s.mesh, s.dofs);
    s.stabilization = assemble_stabilization(s.mesh, s.cut.active_faces, s.dofs);
    s.constraint = mean_constraint(s.cut, s.mesh, s.dofs);
    return s;
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

std::string format_sig12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

SphereTestCase sphere_test_case(const AnalyticSurface& sphere) {
    if (sphere.kind != SurfaceKind::Sphere)
        throw std::invalid_argument("sphere_test_case: surface must be a sphere");
    const Vec3 c = sphere.center;
    const double lam = 12.0 / (sphere.radius * sphere.radius);
    SphereTestCase tc;
    tc.u = [c](const Vec3& x) { return (x.x() - c.x()) * (x.y() - c.y()) * (x.z() - c.z()); };
    tc.grad_u = [c](const Vec3& x) {
        const Vec3 d = x - c;
        return Vec3(d.y() * d.z(), d.x() * d.z(), d.x() * d.y());
    };
    tc.f = [c, lam](const Vec3& x) {
        return lam * (x.x() - c.x()) * (x.y() - c.y()) * (x.z() - c.z());
    };
    return tc;
}

int run_converge(const ExperimentConfig& cfg, std::ostream& csv) {
    validate_common(cfg);
    if (cfg.dim != 3)
        throw std::invalid_argument("run_converge: dim must be 3 (sphere benchmark)");
    const AnalyticSurface sphere = make_sphere(cfg.center, cfg.radius);
    const SphereTestCase tc = sphere_test_case(sphere);
    const std::vector<double> taus = sorted_unique(cfg.tau0);

    struct Row {
        int level;
        LevelRecord rec;
        double rate = kNan;
        std::string status = "ok";
    };
    std::vector<Row> rows;

    for (int level : cfg.levels) {
        const LevelSetup s = prepare_level(sphere, level, 3);
        if (s.empty) {
            for (double tau : taus) {
                Row row{level, {}, kNan, "empty_cut"};
                row.rec.h = s.mesh.h;
                row.rec.tau0 = tau;
                rows.push_back(row);
            }
            continue;
        }
        const GeometryReport geom = geometry_report(sphere, s.cut);
        const Eigen::VectorXd load = assemble_load(s.cut, s.mesh, sphere, tc.f, s.dofs);
        for (double tau : taus) {
            const auto start = std::chrono::steady_clock::now();
            Row row{level, {}, kNan, "ok"};
            row.rec.n_dofs = s.dofs.size();
            row.rec.h = s.mesh.h;
            row.rec.tau0 = tau;
            row.rec.geom = geom;
            try {
                const LinearSystem sys =
                    build_system(s.stiffness, s.stabilization, tau, s.constraint, load);
                const SolveResult sol = solve(sys);
                row.rec.l2_err = l2_error(sol.u, s.dofs, s.mesh, sphere, tc.u, s.cut);
                const EnergyError en = energy_error(sol.u, s.dofs, s.mesh, sphere, tc.u, tc.grad_u,
                                                    s.cut, s.stabilization, tau);
                row.rec.energy_err = en.surface;
            } catch (const SingularSystemError&) {
                row.status = "singular";
            }
            row.rec.wall_ms = cfg.deterministic ? 0.0 : elapsed_ms(start);
            rows.push_back(row);
        }
    }

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.rec.tau0 != b.rec.tau0 ? a.rec.tau0 < b.rec.tau0 : a.level < b.level;
    });
    for (size_t k = 1; k < rows.size(); ++k) {
        const Row& prev = rows[k - 1];
        Row& cur = rows[k];
        if (prev.rec.tau0 == cur.rec.tau0 && prev.status == "ok" && cur.status == "ok" &&
            prev.rec.valid() && cur.rec.valid() && prev.rec.l2_err > 0.0 &&
            cur.rec.l2_err > 0.0 && cur.rec.n_dofs > prev.rec.n_dofs) {
            cur.rate = rate({{static_cast<double>(prev.rec.n_dofs), prev.rec.l2_err},
                             {static_cast<double>(cur.rec.n_dofs), cur.rec.l2_err}})[0];
        }
    }

    csv << "tau0,level,N,h,e_h,R,energy_err,max_rho,max_angle,wall_ms,status\n";
    for (const Row& r : rows) {
        csv << format_sig12(r.rec.tau0) << ',' << r.level << ',' << r.rec.n_dofs << ','
            << format_sig12(r.rec.h) << ',' << format_sig12(r.rec.l2_err) << ','
            << format_sig12(r.rate) << ',' << format_sig12(r.rec.energy_err) << ','
            << format_sig12(r.rec.geom.max_abs_rho) << ','
            << format_sig12(r.rec.geom.max_normal_angle) << ',' << format_sig12(r.rec.wall_ms)
            << ',' << r.status << '\n';
    }
    return 0;
}

int run_condition(const ExperimentConfig& cfg, std::ostream& csv) {
    validate_common(cfg);
    const AnalyticSurface surface = cfg.dim == 3
                                        ? make_sphere(cfg.center, cfg.radius)
                                        : make_circle(cfg.center.x(), cfg.center.y(), cfg.radius);
    const std::vector<double> taus = sorted_unique(cfg.tau0);

    struct Row {
        double tau0;
        int precond;
        int level;
        int n_dofs;
        double kappa = kNan;
        double rate = kNan;
        int n_neg = 0;
        int n_zero = 0;
        std::string status = "ok";
    };
    std::vector<Row> rows;

    for (int level : cfg.levels) {
        const LevelSetup s = prepare_level(surface, level, cfg.dim);
        if (s.empty) {
            for (double tau : taus) {
                rows.push_back({tau, 0, level, 0, kNan, kNan, 0, 0, "empty_cut"});
                if (cfg.precond)
                    rows.push_back({tau, 1, level, 0, kNan, kNan, 0, 0, "empty_cut"});
            }
            continue;
        }
        const Eigen::VectorXd zero_load = Eigen::VectorXd::Zero(s.dofs.size());
        for (double tau : taus) {
            const LinearSystem sys =
                build_system(s.stiffness, s.stabilization, tau, s.constraint, zero_load);
            for (int precond = 0; precond < (cfg.precond ? 2 : 1); ++precond) {
                Row row{tau, precond, level, s.dofs.size()};
                try {
                    const LinearSystem scaled = precond ? diagonal_scaling(sys) : LinearSystem{};
                    const SparseSym& mat = precond ? scaled.matrix : sys.matrix;
                    const EigenMode mode =
                        mat.rows() <= kDenseSpectrumCap ? EigenMode::All : EigenMode::Extremal;
                    const std::vector<double> eigs = eigenvalues_sym(mat, mode);
                    const SpectrumSummary sum = condition_number(eigs);
                    row.kappa = sum.kappa;
                    row.n_neg = sum.n_negative;
                    row.n_zero = sum.n_zero;
                } catch (const SingularSystemError&) {
                    row.kappa = kInf;
                    row.status = "singular";
                }
                rows.push_back(row);
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.tau0 != b.tau0)
            return a.tau0 < b.tau0;
        if (a.precond != b.precond)
            return a.precond < b.precond;
        return a.level < b.level;
    });
    for (size_t k = 1; k < rows.size(); ++k) {
        const Row& prev = rows[k - 1];
        Row& cur = rows[k];
        if (prev.tau0 == cur.tau0 && prev.precond == cur.precond && prev.status == "ok" &&
            cur.status == "ok" && std::isfinite(prev.kappa) && std::isfinite(cur.kappa) &&
            cur.n_dofs > prev.n_dofs) {
            cur.rate = rate({{static_cast<double>(prev.n_dofs), prev.kappa},
                             {static_cast<double>(cur.n_dofs), cur.kappa}})[0];
        }
    }

    csv << "tau0,precond,level,N,kappa,R,n_neg,n_zero,status\n";
    for (const Row& r : rows) {
        csv << format_sig12(r.tau0) << ',' << r.precond << ',' << r.level << ',' << r.n_dofs << ','
            << format_sig12(r.kappa) << ',' << format_sig12(r.rate) << ',' << r.n_neg << ','
            << r.n_zero << ',' << r.status << '\n';
    }
    return 0;
}

int run_sweep(const ExperimentConfig& cfg, std::ostream& csv) {
    validate_common(cfg);
    if (cfg.dim != 2)
        throw std::invalid_argument("run_sweep: dim must be 2 (translated circle)");
    if (!(cfg.sweep_step > 0.0) || cfg.sweep_delta < 0.0)
        throw std::invalid_argument("run_sweep: invalid sweep range");

    std::vector<double> taus{0.0};
    for (double t : cfg.tau0)
        if (t > 0.0)
            taus.push_back(t);
    taus = sorted_unique(taus);

    const BackgroundMesh mesh = build_background_mesh(unit_box(2), cfg.levels.front(), 2);
    const int n_pos = static_cast<int>(std::lround(cfg.sweep_delta / cfg.sweep_step)) + 1;

    struct Row {
        double delta;
        double tau0;
        int n_dofs;
        double kappa;
        int n_zero;
    };
    std::vector<Row> rows;

    for (int k = 0; k < n_pos; ++k) {
        const double delta = k * cfg.sweep_step;
        const AnalyticSurface circle =
            make_circle(cfg.center.x() - delta, cfg.center.y(), cfg.radius);
        const LevelSetField field = interpolate_nodal(circle, mesh);
        const CutSurface cut = build_cut_surface(field);
        if (cut.active_cells.empty()) {
            for (double tau : taus)
                rows.push_back({delta, tau, 0, kInf, 0});
            continue;
        }
        const DofMap dofs = build_dof_map(mesh, cut.active_cells);
        const SparseSym stiffness = assemble_stiffness(cut, mesh, dofs);
        const SparseSym stab = assemble_stabilization(mesh, cut.active_faces, dofs);
        const Eigen::VectorXd constraint = mean_constraint(cut, mesh, dofs);
        const Eigen::VectorXd zero_load = Eigen::VectorXd::Zero(dofs.size());
        for (double tau : taus) {
            const LinearSystem sys = build_system(stiffness, stab, tau, constraint, zero_load);
            const std::vector<double> eigs = eigenvalues_sym(sys.matrix, EigenMode::All);
            Row row{delta, tau, dofs.size(), kInf, 0};
            try {
                const SpectrumSummary sum = condition_number(eigs);
                row.kappa = sum.kappa;
                row.n_zero = sum.n_zero;
            } catch (const SingularSystemError&) {
                // singular: count near-zero eigenvalues against the magnitude scale
                double scale = 0.0;
                for (double l : eigs)
                    scale = std::max(scale, std::abs(l));
                for (double l : eigs)
                    if (std::abs(l) <= 1e-10 * scale)
                        ++row.n_zero;
            }
            rows.push_back(row);
        }
    }

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.tau0 != b.tau0 ? a.tau0 < b.tau0 : a.delta < b.delta;
    });

    csv << "delta,tau0,N,kappa,n_zero\n";
    for (const Row& r : rows)
        csv << format_sig12(r.delta) << ',' << format_sig12(r.tau0) << ',' << r.n_dofs << ','
            << format_sig12(r.kappa) << ',' << r.n_zero << '\n';
    for (double tau : taus) {
        double lo = kInf, hi = -kInf;
        for (const Row& r : rows) {
            if (r.tau0 != tau)
                continue;
            lo = std::min(lo, r.kappa);
            hi = std::max(hi, r.kappa);
        }
        csv << "max," << format_sig12(tau) << ",," << format_sig12(hi) << ",\n";
        csv << "min," << format_sig12(tau) << ",," << format_sig12(lo) << ",\n";
    }
    return 0;
}

} // namespace cutlb
