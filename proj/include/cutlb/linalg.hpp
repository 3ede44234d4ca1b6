#pragma once

#include <stdexcept>
#include <vector>

#include "cutlb/assembly.hpp"

namespace cutlb {

struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveResult {
    Eigen::VectorXd u;       // length n_dofs
    double multiplier = 0.0;
    double residual = 0.0;   // |Ax - b| / |b|
};

// Direct sparse factorization (the bordered system is symmetric indefinite),
// with an iterative MINRES fallback for numerically singular but consistent
// systems. Throws SingularSystemError if the residual contract of 1e-10
// cannot be met.
SolveResult solve(const LinearSystem& sys);

enum class EigenMode { All, Extremal };

// Dense full-spectrum path is desk-feasible up to this dimension.
inline constexpr int kDenseSpectrumCap = 4000;

// Ascending eigenvalues of a symmetric matrix. Mode All reduces a dense copy
// orthogonally; mode Extremal returns only the spectrum edges (largest
// eigenvalue plus the eigenvalues of smallest magnitude) computed by Lanczos
// iterations with full reorthogonalization, using a shift-invert factorization
// for the small end. Rejects asymmetric input.
std::vector<double> eigenvalues_sym(const SparseSym& a, EigenMode mode);

struct SpectrumSummary {
    double kappa = 0.0;
    double lambda_max = 0.0;
    double first_positive = 0.0;
    int n_negative = 0; // eigenvalues below -threshold
    int n_zero = 0;     // eigenvalues within +-threshold
};

// kappa = lambda_max / smallest eigenvalue above 1e-10*lambda_max; also counts
// negative and near-zero eigenvalues relative to the same threshold. Throws if
// no eigenvalue lies above the threshold.
SpectrumSummary condition_number(const std::vector<double>& eigs_ascending);

} // namespace cutlb
