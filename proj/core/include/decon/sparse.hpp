#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace decon {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Compressed matrix from triplets; duplicate (row, col) entries are summed.
SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& triplets);

SparseMatrix blkdiag(std::span<const SparseMatrix> blocks);

/// Rows `rows` of A, in the given order.
SparseMatrix select_rows(const SparseMatrix& A, std::span<const int> rows);
/// Columns `cols` of A, in the given order.
SparseMatrix select_cols(const SparseMatrix& A, std::span<const int> cols);

SparseMatrix sparse_identity(int n);
SparseMatrix sparse_diagonal(const Eigen::VectorXd& d);

/// Max absolute entry.
double max_abs(const SparseMatrix& A);
/// Max absolute row sum.
double inf_norm(const SparseMatrix& A);
bool is_symmetric(const SparseMatrix& A, double rel_tol = 1e-12);

/// A maximal set of linearly independent rows of A (sorted), found by a
/// column-pivoted QR of A^T. Rows whose pivot falls below rel_tol times the
/// largest pivot are treated as dependent.
std::vector<int> independent_rows(const SparseMatrix& A, double rel_tol = 1e-10);

/// Numerical rank of A.
long numerical_rank(const SparseMatrix& A, double rel_tol = 1e-10);

/// Systems below this size are factored densely.
inline constexpr int kDenseSolveLimit = 2000;

/// Solves K x = rhs for a square (typically symmetric indefinite) K, with
/// two steps of iterative refinement. Throws SolverError when the
/// factorization fails or the relative residual stays above `rel_tol`; the
/// rank estimate is filled in for dense-sized systems.
Eigen::VectorXd solve_linear(const SparseMatrix& K, const Eigen::VectorXd& rhs,
                             double rel_tol = 1e-9);

/// Reduces K x = rhs by substituting x[i] = value for every fixed pair and
/// dropping the corresponding rows, solves the remainder and returns the
/// full vector.
Eigen::VectorXd solve_with_fixed(const SparseMatrix& K, const Eigen::VectorXd& rhs,
                                 std::span<const std::pair<int, double>> fixed,
                                 double rel_tol = 1e-9);

}  // namespace decon
