#include "cutlb/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cutlb {

SparseSym SparseSym::from_upper_triplets(int n, std::vector<Eigen::Triplet<double>> upper) {
    for (const auto& t : upper)
        if (t.row() > t.col() || t.row() < 0 || t.col() >= n)
            throw std::invalid_argument("SparseSym: triplets must satisfy 0 <= row <= col < n");

    // combine duplicates in a deterministic order before mirroring
    std::stable_sort(upper.begin(), upper.end(), [](const auto& a, const auto& b) {
        return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
    });
    std::vector<Eigen::Triplet<double>> full;
    full.reserve(2 * upper.size());
    for (size_t s = 0; s < upper.size();) {
        const int i = upper[s].row(), j = upper[s].col();
        double v = 0.0;
        while (s < upper.size() && upper[s].row() == i && upper[s].col() == j)
            v += upper[s++].value();
        full.emplace_back(i, j, v);
        if (i != j)
            full.emplace_back(j, i, v);
    }

    SparseSym out;
    out.mat_.resize(n, n);
    out.mat_.setFromTriplets(full.begin(), full.end());
    out.mat_.makeCompressed();
    for (const auto& t : full)
        out.max_norm_ = std::max(out.max_norm_, std::abs(t.value()));
    return out;
}

Eigen::VectorXd SparseSym::row_sums() const {
    return mat_ * Eigen::VectorXd::Ones(mat_.cols());
}

Eigen::VectorXd SparseSym::diagonal() const {
    return mat_.diagonal();
}

double SparseSym::symmetry_defect() const {
    const Eigen::SparseMatrix<double, Eigen::RowMajor> d = mat_ - Eigen::SparseMatrix<double, Eigen::RowMajor>(mat_.transpose());
    double m = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(d, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

void dump_matrix_coord(const SparseSym& a, std::ostream& out) {
    const auto& m = a.matrix();
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, k); it; ++it)
            out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

} // namespace cutlb
