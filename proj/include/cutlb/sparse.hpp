#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Sparse>

#include "cutlb/types.hpp"

namespace cutlb {

// Symmetric sparse matrix in compressed-row storage holding the full pattern.
// Built from upper-triangle contributions: duplicates are combined in a fixed
// order and each off-diagonal value is mirrored, so A == A^T holds exactly.
class SparseSym {
public:
    SparseSym() = default;

    // entries must have row <= col; duplicates are accumulated
    static SparseSym from_upper_triplets(int n, std::vector<Eigen::Triplet<double>> upper);

    int rows() const { return static_cast<int>(mat_.rows()); }
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix() const { return mat_; }
    double max_norm() const { return max_norm_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return mat_ * v; }
    double quad_form(const Eigen::VectorXd& v) const { return v.dot(mat_ * v); }
    Eigen::VectorXd row_sums() const;
    Eigen::VectorXd diagonal() const;
    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(mat_); }
    double symmetry_defect() const; // max |a_ij - a_ji|, 0 by construction

private:
    Eigen::SparseMatrix<double, Eigen::RowMajor> mat_;
    double max_norm_ = 0.0;
};

// Coordinate text format: one "row col value" line per stored entry.
void dump_matrix_coord(const SparseSym& a, std::ostream& out);

} // namespace cutlb
