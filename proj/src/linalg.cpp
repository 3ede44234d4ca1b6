#include "cutlb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

namespace cutlb {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kEigRelTol = 1e-10;
constexpr uint64_t kLanczosSeed = 0x1db3u;

using ApplyFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct RitzPair {
    double value;
    double residual; // |beta_m * s_mi|, a bound on the eigenvalue error
};

// Lanczos iteration with full reorthogonalization. Stops once `converged`
// accepts the current Ritz set (checked every few steps), on breakdown, or at
// the step cap. Returns the Ritz pairs of the final tridiagonal, ascending.
std::vector<RitzPair> lanczos_ritz(const ApplyFn& apply, int n, int max_steps, uint64_t seed,
                                   const std::function<bool(const std::vector<RitzPair>&)>& converged) {
    max_steps = std::min(max_steps, n);
    Eigen::MatrixXd basis(n, max_steps);
    std::vector<double> alpha, beta;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i)
        v[i] = gauss(rng);
    v.normalize();
    basis.col(0) = v;

    std::vector<RitzPair> pairs;
    auto ritz_of_tridiag = [&](int m, double tail) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i)
            t(i, i) = alpha[i];
        for (int i = 0; i + 1 < m; ++i)
            t(i, i + 1) = t(i + 1, i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        pairs.clear();
        for (int i = 0; i < m; ++i)
            pairs.push_back({es.eigenvalues()[i], std::abs(tail * es.eigenvectors()(m - 1, i))});
    };

    for (int j = 0; j < max_steps; ++j) {
        Eigen::VectorXd w = apply(basis.col(j));
        const double a = basis.col(j).dot(w);
        alpha.push_back(a);
        w -= a * basis.col(j);
        if (j > 0)
            w -= beta[j - 1] * basis.col(j - 1);
        for (int pass = 0; pass < 2; ++pass)
            w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
        const double b = w.norm();
        const int m = j + 1;
        const bool last = (m == max_steps) || b < 1e-300;
        if (last || m % 5 == 0) {
            ritz_of_tridiag(m, b);
            if (last || converged(pairs))
                return pairs;
        }
        beta.push_back(b);
        basis.col(j + 1) = w / b;
    }
    return pairs;
}

std::vector<double> dense_spectrum(const SparseSym& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.dense(), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

std::vector<double> extremal_spectrum(const SparseSym& a) {
    const int n = a.rows();
    if (n <= 128)
        return dense_spectrum(a);

    const auto& m = a.matrix();
    const ApplyFn apply_a = [&m](const Eigen::VectorXd& x) { return m * x; };

    auto top_converged = [](const std::vector<RitzPair>& p) {
        double scale = 0.0;
        for (const auto& r : p)
            scale = std::max(scale, std::abs(r.value));
        return p.back().residual <= kEigRelTol * scale;
    };
    const auto top = lanczos_ritz(apply_a, n, 300, kLanczosSeed, top_converged);
    const double lambda_max = top.back().value;

    // smallest-magnitude eigenvalues via shift-invert at zero
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    const Eigen::SparseMatrix<double> ac(m);
    lu.analyzePattern(ac);
    lu.factorize(ac);
    if (lu.info() != Eigen::Success)
        throw SingularSystemError("eigenvalues_sym: shift-invert factorization failed "
                                  "(matrix numerically singular)");
    const ApplyFn apply_inv = [&lu](const Eigen::VectorXd& x) { return lu.solve(x); };

    constexpr int n_small = 8;
    auto small_converged = [&](const std::vector<RitzPair>& p) {
        std::vector<int> order(p.size());
        for (size_t i = 0; i < p.size(); ++i)
            order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            return std::abs(p[x].value) > std::abs(p[y].value);
        });
        const int want = std::min<int>(n_small, static_cast<int>(p.size()));
        if (want < n_small)
            return false;
        const double scale = std::abs(p[order[0]].value);
        for (int k = 0; k < want; ++k)
            if (p[order[k]].residual > kEigRelTol * scale)
                return false;
        return true;
    };
    const auto inv_pairs = lanczos_ritz(apply_inv, n, 300, kLanczosSeed + 1, small_converged);

    std::vector<int> order(inv_pairs.size());
    for (size_t i = 0; i < inv_pairs.size(); ++i)
        order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return std::abs(inv_pairs[x].value) > std::abs(inv_pairs[y].value);
    });

    std::vector<double> eigs;
    const int take = std::min<int>(n_small, static_cast<int>(order.size()));
    for (int k = 0; k < take; ++k) {
        const double theta = inv_pairs[order[k]].value;
        if (theta != 0.0)
            eigs.push_back(1.0 / theta);
    }
    eigs.push_back(lambda_max);
    std::sort(eigs.begin(), eigs.end());
    // drop the duplicate if lambda_max was already among the small set
    for (size_t i = 1; i < eigs.size();) {
        if (std::abs(eigs[i] - eigs[i - 1]) <= 1e-12 * std::abs(lambda_max))
            eigs.erase(eigs.begin() + static_cast<long>(i));
        else
            ++i;
    }
    return eigs;
}

} // namespace

SolveResult solve(const LinearSystem& sys) {
    const int n = sys.n_dofs;
    const auto& a = sys.matrix.matrix();
    const double bnorm = sys.rhs.norm();
    SolveResult res;
    if (bnorm == 0.0) {
        res.u = Eigen::VectorXd::Zero(n);
        return res;
    }

    const Eigen::SparseMatrix<double> ac(a);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(ac);
    lu.factorize(ac);

    Eigen::VectorXd x;
    double resid = std::numeric_limits<double>::infinity();
    bool have_x = false;
    if (lu.info() == Eigen::Success) {
        x = lu.solve(sys.rhs);
        if (lu.info() == Eigen::Success) {
            have_x = true;
            resid = (a * x - sys.rhs).norm() / bnorm;
        }
    }

    if (!(resid <= kResidualTol)) {
        Eigen::MINRES<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> minres(ac);
        minres.setTolerance(1e-13);
        minres.setMaxIterations(std::max(2000, 10 * (n + 1)));
        const Eigen::VectorXd y =
            have_x ? minres.solveWithGuess(sys.rhs, x).eval() : minres.solve(sys.rhs).eval();
        const double r = (a * y - sys.rhs).norm() / bnorm;
        if (!have_x || r < resid) {
            x = y;
            resid = r;
        }
        if (!(resid <= kResidualTol))
            throw SingularSystemError("solve: system numerically singular, relative residual " +
                                      std::to_string(resid));
    }

    res.u = x.head(n);
    res.multiplier = x[n];
    res.residual = resid;
    return res;
}

std::vector<double> eigenvalues_sym(const SparseSym& a, EigenMode mode) {
    if (a.rows() == 0)
        throw std::invalid_argument("eigenvalues_sym: empty matrix");
    const double scale = std::max(a.max_norm(), std::numeric_limits<double>::min());
    if (a.symmetry_defect() > 1e-12 * scale)
        throw std::invalid_argument("eigenvalues_sym: matrix is not symmetric");
    return mode == EigenMode::All ? dense_spectrum(a) : extremal_spectrum(a);
}

SpectrumSummary condition_number(const std::vector<double>& eigs_ascending) {
    if (eigs_ascending.empty())
        throw std::invalid_argument("condition_number: empty spectrum");
    SpectrumSummary s;
    s.lambda_max = eigs_ascending.back();
    if (!(s.lambda_max > 0.0))
        throw SingularSystemError("condition_number: no eigenvalue above threshold");
    const double threshold = 1e-10 * s.lambda_max;
    double first_positive = std::numeric_limits<double>::infinity();
    for (double l : eigs_ascending) {
        if (l < -threshold)
            ++s.n_negative;
        else if (l <= threshold)
            ++s.n_zero;
        else
            first_positive = std::min(first_positive, l);
    }
    s.first_positive = first_positive;
    s.kappa = s.lambda_max / first_positive;
    return s;
}

} // namespace cutlb
