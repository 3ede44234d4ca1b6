#include <random>
#include <sstream>

#include <doctest.h>

#include "cutlb/experiments.hpp"

using namespace cutlb;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

TEST_CASE("sphere test case matches the closed-form load on the surface") {
    const AnalyticSurface sphere = make_sphere(Vec3(0.5, 0.5, 0.5), 0.5);
    const SphereTestCase tc = sphere_test_case(sphere);
    const auto reference_load = [](const Vec3& x) {
        return 6.0 * (2.0 * x.x() - 1.0) * (2.0 * x.y() - 1.0) * (2.0 * x.z() - 1.0) /
               (3.0 + 4.0 * x.x() * (x.x() - 1.0) + 4.0 * x.y() * (x.y() - 1.0) +
                4.0 * x.z() * (x.z() - 1.0));
    };
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 50; ++k) {
        Vec3 n(gauss(rng), gauss(rng), gauss(rng));
        n.normalize();
        const Vec3 x = sphere.center + sphere.radius * n;
        CHECK(tc.f(x) == doctest::Approx(reference_load(x)).epsilon(1e-11));
        CHECK(tc.f(x) == doctest::Approx(48.0 * tc.u(x)).epsilon(1e-12));
        // gradient consistency by central differences
        for (int a = 0; a < 3; ++a) {
            Vec3 dx = Vec3::Zero();
            dx[a] = 1e-6;
            const double fd = (tc.u(x + dx) - tc.u(x - dx)) / 2e-6;
            CHECK(tc.grad_u(x)[a] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
    CHECK_THROWS_AS(sphere_test_case(make_circle(0.0, 0.0, 1.0)), std::invalid_argument);
}

TEST_CASE("run_converge produces a schema-stable CSV") {
    ExperimentConfig cfg;
    cfg.levels = {4, 6};
    cfg.tau0 = {0.1};
    cfg.deterministic = true;
    std::ostringstream out;
    CHECK(run_converge(cfg, out) == 0);

    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "tau0,level,N,h,e_h,R,energy_err,max_rho,max_angle,wall_ms,status");
    for (size_t k = 1; k < lines.size(); ++k) {
        const auto f = fields_of(lines[k]);
        REQUIRE(f.size() == 11);
        CHECK(f.back() == "ok");
        CHECK(std::stod(f[4]) > 0.0); // e_h
        CHECK(std::stod(f[9]) == 0.0); // deterministic wall clock
    }
    // second level carries a rate
    CHECK(fields_of(lines[2])[5] != "nan");
    // errors decrease under refinement
    CHECK(std::stod(fields_of(lines[2])[4]) < std::stod(fields_of(lines[1])[4]));
}

TEST_CASE("run_converge records empty cuts and keeps going") {
    ExperimentConfig cfg;
    cfg.levels = {4};
    cfg.tau0 = {0.1, 1.0};
    cfg.center = Vec3(5.0, 5.0, 5.0); // sphere far outside the box
    std::ostringstream out;
    CHECK(run_converge(cfg, out) == 0);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 3);
    for (size_t k = 1; k < lines.size(); ++k) {
        const auto f = fields_of(lines[k]);
        CHECK(f[2] == "0");
        CHECK(f.back() == "empty_cut");
    }
}

TEST_CASE("run_condition reports spectral signatures per row") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::Condition;
    cfg.dim = 2;
    cfg.center = Vec3(0.5, 0.5, 0.0);
    cfg.radius = 0.3;
    cfg.levels = {8, 12};
    cfg.tau0 = {0.0, 0.1};
    cfg.precond = true;
    std::ostringstream out;
    CHECK(run_condition(cfg, out) == 0);

    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 9); // header + 2 levels x 2 tau x 2 precond
    CHECK(lines[0] == "tau0,precond,level,N,kappa,R,n_neg,n_zero,status");
    for (size_t k = 1; k < lines.size(); ++k) {
        const auto f = fields_of(lines[k]);
        REQUIRE(f.size() == 9);
        CHECK(f.back() == "ok");
        const double tau = std::stod(f[0]);
        const int n_neg = std::stoi(f[6]);
        const int n_zero = std::stoi(f[7]);
        if (tau > 0.0) {
            // one negative eigenvalue from the multiplier, no zero modes
            CHECK(n_neg == 1);
            CHECK(n_zero == 0);
        } else {
            // the interpolated distance function spans a zero mode
            CHECK(n_zero >= 1);
        }
        CHECK(std::stod(f[4]) > 1.0);
    }
}

TEST_CASE("run_sweep emits data plus summary rows and is deterministic") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::Sweep;
    cfg.dim = 2;
    cfg.center = Vec3(0.5, 0.5, 0.0);
    cfg.radius = 0.3;
    cfg.levels = {16};
    cfg.tau0 = {0.1};
    cfg.sweep_delta = 0.1;
    cfg.sweep_step = 0.05;
    cfg.deterministic = true;
    std::ostringstream out1, out2;
    CHECK(run_sweep(cfg, out1) == 0);
    CHECK(run_sweep(cfg, out2) == 0);
    CHECK(out1.str() == out2.str()); // byte-identical

    const auto lines = lines_of(out1.str());
    // header + 3 positions x 2 tau + 2 summary rows per tau
    REQUIRE(lines.size() == 11);
    CHECK(lines[0] == "delta,tau0,N,kappa,n_zero");
    for (size_t k = 1; k < lines.size(); ++k)
        REQUIRE(fields_of(lines[k]).size() == 5);
    CHECK(fields_of(lines[7])[0] == "max");
    CHECK(fields_of(lines[8])[0] == "min");

    // delta = 0 rows agree with the condition driver on the same mesh
    ExperimentConfig cond;
    cond.experiment = ExperimentKind::Condition;
    cond.dim = 2;
    cond.center = Vec3(0.5, 0.5, 0.0);
    cond.radius = 0.3;
    cond.levels = {16};
    cond.tau0 = {0.1};
    cond.precond = false;
    std::ostringstream cond_out;
    CHECK(run_condition(cond, cond_out) == 0);
    const auto cond_lines = lines_of(cond_out.str());
    REQUIRE(cond_lines.size() == 2);
    const std::string kappa_cond = fields_of(cond_lines[1])[4];
    // sweep rows are sorted by (tau0, delta): delta=0, tau0=0.1 is line 4
    const auto sweep_row = fields_of(lines[4]);
    CHECK(sweep_row[0] == "0");
    CHECK(sweep_row[1] == "0.1");
    CHECK(sweep_row[3] == kappa_cond);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    cfg.levels = {8, 8};
    std::ostringstream out;
    CHECK_THROWS_AS(run_converge(cfg, out), std::invalid_argument);
    cfg.levels = {8};
    cfg.tau0 = {-1.0};
    CHECK_THROWS_AS(run_converge(cfg, out), std::invalid_argument);
    cfg.tau0 = {0.1};
    cfg.dim = 2;
    CHECK_THROWS_AS(run_converge(cfg, out), std::invalid_argument);
    ExperimentConfig sweep;
    sweep.experiment = ExperimentKind::Sweep;
    sweep.dim = 3;
    CHECK_THROWS_AS(run_sweep(sweep, out), std::invalid_argument);
}
