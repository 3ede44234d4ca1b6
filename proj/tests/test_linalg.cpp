#include <cstring>
#include <random>

#include <doctest.h>

#include "cutlb/experiments.hpp"
#include "cutlb/linalg.hpp"

using namespace cutlb;

namespace {

// --- oracle: eigenvalues by shifted power iteration with deflation ----------
//
// Shifting by a Gershgorin bound makes the matrix positive definite so the
// dominant eigenvalue is always the largest remaining one; deflation then
// walks down the spectrum. Independent of the orthogonal-reduction path.
std::vector<double> power_deflation_spectrum(Eigen::MatrixXd a, uint64_t seed) {
    const int n = static_cast<int>(a.rows());
    double bound = 0.0;
    for (int i = 0; i < n; ++i)
        bound = std::max(bound, a.row(i).lpNorm<1>());
    const double shift = bound + 1.0;
    Eigen::MatrixXd b = a + shift * Eigen::MatrixXd::Identity(n, n);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> eigs;
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i)
            v[i] = gauss(rng);
        v.normalize();
        double lambda = 0.0, prev = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 60000; ++it) {
            v = (b * v).normalized();
            if (it % 16 == 15) {
                lambda = v.dot(b * v);
                if (std::abs(lambda - prev) <= 1e-13 * shift)
                    break;
                prev = lambda;
            }
        }
        lambda = v.dot(b * v);
        eigs.push_back(lambda - shift);
        b -= lambda * v * v.transpose();
    }
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

SparseSym from_dense_upper(const Eigen::MatrixXd& a) {
    std::vector<Eigen::Triplet<double>> upper;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i; j < a.cols(); ++j)
            if (a(i, j) != 0.0)
                upper.emplace_back(i, j, a(i, j));
    return SparseSym::from_upper_triplets(static_cast<int>(a.rows()), std::move(upper));
}

struct Assembled {
    BackgroundMesh mesh;
    LevelSetField field;
    CutSurface cut;
    DofMap dofs;
    LinearSystem sys;
};

Assembled assemble_circle_system(int cells, double tau0) {
    Assembled a;
    a.mesh = build_background_mesh(unit_box(2), cells, 2);
    a.field = interpolate_nodal(make_circle(0.5, 0.5, 0.3), a.mesh);
    a.cut = build_cut_surface(a.field);
    a.dofs = build_dof_map(a.mesh, a.cut.active_cells);
    const SparseSym stiffness = assemble_stiffness(a.cut, a.mesh, a.dofs);
    const SparseSym stab = assemble_stabilization(a.mesh, a.cut.active_faces, a.dofs);
    a.sys = build_system(stiffness, stab, tau0, mean_constraint(a.cut, a.mesh, a.dofs),
                         Eigen::VectorXd::Zero(a.dofs.size()));
    return a;
}

} // namespace

TEST_CASE("solve: zero rhs and a hand-solvable bordered system") {
    const SparseSym stiffness = SparseSym::from_upper_triplets(1, {{0, 0, 2.0}});
    const SparseSym zero = SparseSym::from_upper_triplets(1, {});
    Eigen::VectorXd c(1), b(1);
    c << 1.0;
    b << 4.0;

    const LinearSystem zero_rhs = build_system(stiffness, zero, 0.0, c, Eigen::VectorXd::Zero(1));
    const SolveResult r0 = solve(zero_rhs);
    CHECK(r0.u.norm() == 0.0);
    CHECK(r0.multiplier == 0.0);

    // [[2,1],[1,0]] x = (4,0): the constraint pins the dof, multiplier takes 4
    const SolveResult r = solve(build_system(stiffness, zero, 0.0, c, b));
    CHECK(r.u[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.multiplier == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r.residual <= 1e-10);
}

TEST_CASE("solve: sphere system meets the residual and constraint contracts") {
    const BackgroundMesh mesh = build_background_mesh(unit_box(3), 8, 3);
    const AnalyticSurface sphere = make_sphere(Vec3(0.5, 0.5, 0.5), 0.5);
    const CutSurface cut = build_cut_surface(interpolate_nodal(sphere, mesh));
    const DofMap dofs = build_dof_map(mesh, cut.active_cells);
    const SparseSym stiffness = assemble_stiffness(cut, mesh, dofs);
    const SparseSym stab = assemble_stabilization(mesh, cut.active_faces, dofs);
    const Eigen::VectorXd c = mean_constraint(cut, mesh, dofs);
    const SphereTestCase tc = sphere_test_case(sphere);
    const Eigen::VectorXd b = assemble_load(cut, mesh, sphere, tc.f, dofs);
    const LinearSystem sys = build_system(stiffness, stab, 0.1, c, b);

    const SolveResult r = solve(sys);
    CHECK(r.residual <= 1e-10);
    // solution satisfies the zero-mean constraint
    CHECK(std::abs(c.dot(r.u)) <= 1e-9 * c.norm() * r.u.norm());
    // self-check of the reported residual against a direct product
    const Eigen::VectorXd x = (Eigen::VectorXd(sys.rhs.size()) << r.u, r.multiplier).finished();
    CHECK((sys.matrix.apply(x) - sys.rhs).norm() / sys.rhs.norm() ==
          doctest::Approx(r.residual).epsilon(1e-12));

    // bitwise-deterministic repeat
    const SolveResult r2 = solve(sys);
    REQUIRE(r2.u.size() == r.u.size());
    CHECK(std::memcmp(r.u.data(), r2.u.data(), sizeof(double) * r.u.size()) == 0);
    CHECK(r.multiplier == r2.multiplier);
}

TEST_CASE("solve: consistent singular system falls back to the iterative path") {
    // block [[1,-1],[-1,1]] has kernel (1,1), and c = (1,-1) is orthogonal to
    // it, so the bordered matrix is exactly singular; the rhs is consistent.
    const SparseSym stiffness =
        SparseSym::from_upper_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}, {0, 1, -1.0}});
    const SparseSym zero = SparseSym::from_upper_triplets(2, {});
    Eigen::VectorXd c(2), b(2);
    c << 1.0, -1.0;
    b << 1.0, -1.0;
    const LinearSystem sys = build_system(stiffness, zero, 0.0, c, b);
    const SolveResult r = solve(sys);
    CHECK(r.residual <= 1e-10);
    CHECK(c.dot(r.u) == doctest::Approx(0.0).epsilon(1e-10));

    // an inconsistent rhs cannot meet the residual contract
    Eigen::VectorXd bad(2);
    bad << 1.0, 1.0;
    CHECK_THROWS_AS(solve(build_system(stiffness, zero, 0.0, c, bad)), SingularSystemError);
}

TEST_CASE("extremal eigensolve rejects singular matrices") {
    std::vector<Eigen::Triplet<double>> upper;
    for (int i = 0; i < 150; ++i)
        upper.emplace_back(i, i, static_cast<double>(i)); // one exact zero
    const SparseSym a = SparseSym::from_upper_triplets(150, std::move(upper));
    CHECK_THROWS_AS(eigenvalues_sym(a, EigenMode::Extremal), SingularSystemError);
}

TEST_CASE("eigenvalues_sym: hand spectra") {
    const SparseSym diag =
        SparseSym::from_upper_triplets(3, {{0, 0, 3.0}, {1, 1, 1.0}, {2, 2, 2.0}});
    const std::vector<double> d = eigenvalues_sym(diag, EigenMode::All);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == doctest::Approx(1.0));
    CHECK(d[1] == doctest::Approx(2.0));
    CHECK(d[2] == doctest::Approx(3.0));

    const SparseSym tri =
        SparseSym::from_upper_triplets(2, {{0, 0, 2.0}, {1, 1, 2.0}, {0, 1, -1.0}});
    const std::vector<double> t = eigenvalues_sym(tri, EigenMode::All);
    CHECK(t[0] == doctest::Approx(1.0));
    CHECK(t[1] == doctest::Approx(3.0));
}

TEST_CASE("eigenvalues_sym matches the power-deflation oracle") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd g(50, 50);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j)
            g(i, j) = gauss(rng);
    const Eigen::MatrixXd a = 0.5 * (g + g.transpose());

    const std::vector<double> fast = eigenvalues_sym(from_dense_upper(a), EigenMode::All);
    const std::vector<double> oracle = power_deflation_spectrum(a, 97);
    REQUIRE(fast.size() == oracle.size());
    const double scale = std::max(std::abs(fast.front()), std::abs(fast.back()));
    for (size_t i = 0; i < fast.size(); ++i)
        CHECK(std::abs(fast[i] - oracle[i]) <= 1e-6 * scale);
}

TEST_CASE("eigenvalue sum equals the trace") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd g(80, 80);
    for (int i = 0; i < 80; ++i)
        for (int j = 0; j < 80; ++j)
            g(i, j) = gauss(rng);
    const Eigen::MatrixXd a = 0.5 * (g + g.transpose());
    const std::vector<double> eigs = eigenvalues_sym(from_dense_upper(a), EigenMode::All);
    double sum = 0.0;
    for (double l : eigs)
        sum += l;
    CHECK(sum == doctest::Approx(a.trace()).epsilon(1e-8));
}

TEST_CASE("extremal mode agrees with the dense path on the spectrum edges") {
    const Assembled a = assemble_circle_system(32, 0.1);
    REQUIRE(a.sys.matrix.rows() > 128); // actually exercises the Lanczos path

    const std::vector<double> dense = eigenvalues_sym(a.sys.matrix, EigenMode::All);
    const std::vector<double> edges = eigenvalues_sym(a.sys.matrix, EigenMode::Extremal);
    const SpectrumSummary sd = condition_number(dense);
    const SpectrumSummary se = condition_number(edges);
    CHECK(se.lambda_max == doctest::Approx(sd.lambda_max).epsilon(1e-8));
    CHECK(se.first_positive == doctest::Approx(sd.first_positive).epsilon(1e-7));
    CHECK(se.kappa == doctest::Approx(sd.kappa).epsilon(1e-6));
    CHECK(se.n_negative == 1);
}

TEST_CASE("condition_number policy") {
    const SpectrumSummary a = condition_number({-1.0, 0.0, 2.0, 8.0});
    CHECK(a.kappa == doctest::Approx(4.0));
    CHECK(a.n_negative == 1);
    CHECK(a.n_zero == 1);
    CHECK(a.lambda_max == doctest::Approx(8.0));
    CHECK(a.first_positive == doctest::Approx(2.0));

    // stabilized signature: negative multiplier eigenvalue, no zero modes
    const SpectrumSummary b = condition_number({-1.0, 2.0, 8.0});
    CHECK(b.kappa == doctest::Approx(4.0));
    CHECK(b.n_negative == 1);
    CHECK(b.n_zero == 0);

    const SpectrumSummary c = condition_number({1.0, 1.0, 1.0});
    CHECK(c.kappa == doctest::Approx(1.0));

    CHECK_THROWS_AS(condition_number({-3.0, -1.0}), SingularSystemError);
    CHECK_THROWS_AS(condition_number({}), std::invalid_argument);
}

TEST_CASE("spectral signatures of the bordered systems") {
    // stabilized: exactly one negative eigenvalue (the multiplier), no zeros
    const Assembled stab = assemble_circle_system(32, 0.1);
    const SpectrumSummary s = condition_number(eigenvalues_sym(stab.sys.matrix, EigenMode::All));
    CHECK(s.n_negative == 1);
    CHECK(s.n_zero == 0);

    // unstabilized with the level set on the computation mesh: a zero mode
    const Assembled raw = assemble_circle_system(32, 0.0);
    const SpectrumSummary u = condition_number(eigenvalues_sym(raw.sys.matrix, EigenMode::All));
    CHECK(u.n_zero >= 1);
}
