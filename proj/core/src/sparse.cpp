#include "decon/sparse.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>
#include <Eigen/SparseQR>

#include "decon/error.hpp"

namespace decon {

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
  SparseMatrix A(rows, cols);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

SparseMatrix blkdiag(std::span<const SparseMatrix> blocks) {
  int rows = 0, cols = 0;
  std::size_t nnz = 0;
  for (const auto& B : blocks) {
    rows += static_cast<int>(B.rows());
    cols += static_cast<int>(B.cols());
    nnz += static_cast<std::size_t>(B.nonZeros());
  }
  std::vector<Triplet> trips;
  trips.reserve(nnz);
  int r0 = 0, c0 = 0;
  for (const auto& B : blocks) {
    for (int k = 0; k < B.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(B, k); it; ++it)
        trips.emplace_back(r0 + static_cast<int>(it.row()), c0 + static_cast<int>(it.col()), it.value());
    r0 += static_cast<int>(B.rows());
    c0 += static_cast<int>(B.cols());
  }
  return from_triplets(rows, cols, trips);
}

SparseMatrix select_rows(const SparseMatrix& A, std::span<const int> rows) {
  std::vector<int> where(A.rows(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) where[rows[i]] = static_cast<int>(i);
  std::vector<Triplet> trips;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      if (const int r = where[it.row()]; r >= 0) trips.emplace_back(r, static_cast<int>(it.col()), it.value());
  return from_triplets(static_cast<int>(rows.size()), static_cast<int>(A.cols()), trips);
}

SparseMatrix select_cols(const SparseMatrix& A, std::span<const int> cols) {
  std::vector<int> where(A.cols(), -1);
  for (std::size_t i = 0; i < cols.size(); ++i) where[cols[i]] = static_cast<int>(i);
  std::vector<Triplet> trips;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      if (const int c = where[it.col()]; c >= 0) trips.emplace_back(static_cast<int>(it.row()), c, it.value());
  return from_triplets(static_cast<int>(A.rows()), static_cast<int>(cols.size()), trips);
}

SparseMatrix sparse_identity(int n) {
  SparseMatrix I(n, n);
  I.setIdentity();
  return I;
}

SparseMatrix sparse_diagonal(const Eigen::VectorXd& d) {
  std::vector<Triplet> trips;
  trips.reserve(d.size());
  for (int i = 0; i < d.size(); ++i) trips.emplace_back(i, i, d(i));
  return from_triplets(static_cast<int>(d.size()), static_cast<int>(d.size()), trips);
}

double max_abs(const SparseMatrix& A) {
  double m = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double inf_norm(const SparseMatrix& A) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(A.rows());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) sums(it.row()) += std::abs(it.value());
  return A.rows() ? sums.maxCoeff() : 0.0;
}

bool is_symmetric(const SparseMatrix& A, double rel_tol) {
  if (A.rows() != A.cols()) return false;
  const SparseMatrix D = A - SparseMatrix(A.transpose());
  return inf_norm(D) <= rel_tol * std::max(inf_norm(A), 1e-300);
}

namespace {

// Dense QR is used while A^T fits comfortably in memory.
constexpr double kDenseEntries = 4.0e6;

struct PivotedRank {
  long rank = 0;
  std::vector<int> pivots;  // original column indices of A^T in pivot order
};

PivotedRank pivoted_rank(const SparseMatrix& A, double rel_tol) {
  PivotedRank out;
  if (A.rows() == 0) return out;
  const SparseMatrix At = A.transpose();
  if (double(At.rows()) * double(At.cols()) <= kDenseEntries) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(At)};
    qr.setThreshold(rel_tol);
    out.rank = qr.rank();
    const auto& p = qr.colsPermutation().indices();
    out.pivots.assign(p.data(), p.data() + p.size());
    return out;
  }
  Eigen::SparseQR<SparseMatrix, Eigen::COLAMDOrdering<int>> qr;
  double max_col = 0.0;
  for (int k = 0; k < At.outerSize(); ++k) max_col = std::max(max_col, At.col(k).norm());
  qr.setPivotThreshold(rel_tol * max_col);
  qr.compute(At);
  if (qr.info() != Eigen::Success) throw SolverError("sparse QR failed during rank reduction");
  out.rank = qr.rank();
  const auto& p = qr.colsPermutation().indices();
  out.pivots.assign(p.data(), p.data() + p.size());
  return out;
}

}  // namespace

std::vector<int> independent_rows(const SparseMatrix& A, double rel_tol) {
  PivotedRank pr = pivoted_rank(A, rel_tol);
  std::vector<int> rows(pr.pivots.begin(), pr.pivots.begin() + pr.rank);
  std::sort(rows.begin(), rows.end());
  return rows;
}

long numerical_rank(const SparseMatrix& A, double rel_tol) { return pivoted_rank(A, rel_tol).rank; }

Eigen::VectorXd solve_linear(const SparseMatrix& K, const Eigen::VectorXd& rhs, double rel_tol) {
  const int n = static_cast<int>(K.rows());
  if (K.cols() != n || rhs.size() != n) throw InvalidArgument("solve_linear: dimension mismatch");
  if (n == 0) return Eigen::VectorXd(0);

  Eigen::VectorXd x;
  auto refine = [&](auto&& solve) {
    x = solve(rhs);
    for (int it = 0; it < 2; ++it) {
      const Eigen::VectorXd r = rhs - K * x;
      x += solve(r);
    }
  };
  if (n < kDenseSolveLimit) {
    const Eigen::MatrixXd D(K);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(D);
    refine([&](const Eigen::VectorXd& b) -> Eigen::VectorXd { return lu.solve(b); });
  } else {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success)
      throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage());
    refine([&](const Eigen::VectorXd& b) -> Eigen::VectorXd { return lu.solve(b); });
  }

  const double scale = std::max({rhs.lpNorm<Eigen::Infinity>(), (K * x).lpNorm<Eigen::Infinity>(), 1e-300});
  const double residual = (K * x - rhs).lpNorm<Eigen::Infinity>();
  if (!x.allFinite() || !(residual <= rel_tol * scale)) {
    throw SolverError("singular linear system (relative residual " + std::to_string(residual / scale) + ")",
                      n < kDenseSolveLimit ? numerical_rank(K) : -1);
  }
  return x;
}

Eigen::VectorXd solve_with_fixed(const SparseMatrix& K, const Eigen::VectorXd& rhs,
                                 std::span<const std::pair<int, double>> fixed, double rel_tol) {
  const int n = static_cast<int>(K.rows());
  std::vector<char> is_fixed(n, 0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (const auto& [i, v] : fixed) {
    if (i < 0 || i >= n) throw InvalidArgument("fixed index out of range");
    if (is_fixed[i]) throw InvalidArgument("index " + std::to_string(i) + " fixed twice");
    is_fixed[i] = 1;
    x(i) = v;
  }
  std::vector<int> free;
  free.reserve(n);
  for (int i = 0; i < n; ++i)
    if (!is_fixed[i]) free.push_back(i);

  const SparseMatrix Kr = select_cols(K, free);
  const Eigen::VectorXd shifted = rhs - K * x;
  const SparseMatrix Kff = select_rows(Kr, free);
  Eigen::VectorXd bf(free.size());
  for (std::size_t i = 0; i < free.size(); ++i) bf(i) = shifted(free[i]);
  const Eigen::VectorXd xf = solve_linear(Kff, bf, rel_tol);
  for (std::size_t i = 0; i < free.size(); ++i) x(free[i]) = xf(i);
  return x;
}

}  // namespace decon
