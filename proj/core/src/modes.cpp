#include <algorithm>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "decon/error.hpp"
#include "decon/solver.hpp"

namespace decon {
namespace {

// Orthonormal basis of null(A), from the complement of range(A^T).
Eigen::MatrixXd null_basis(const SparseMatrix& A, int n) {
  if (A.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd(A.transpose()));
  qr.setThreshold(1e-10);
  const long r = qr.rank();
  const Eigen::MatrixXd Qfull = qr.householderQ();
  return Qfull.rightCols(n - r);
}

Modes smallest(const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors, int k) {
  const int count = std::min<int>(k, static_cast<int>(values.size()));
  return {values.head(count), vectors.leftCols(count)};
}

}  // namespace

Modes constrained_modes(const SparseMatrix& L, const SparseMatrix& M, const SparseMatrix& A, int k) {
  const int n = static_cast<int>(L.rows());
  if (L.cols() != n || M.rows() != n || M.cols() != n || A.cols() != n)
    throw InvalidArgument("constrained_modes: dimension mismatch");
  if (k <= 0) throw InvalidArgument("constrained_modes: mode count must be positive");

  const Eigen::MatrixXd NB = null_basis(A, n);
  const Eigen::MatrixXd Lr = NB.transpose() * (L * NB);
  Eigen::MatrixXd Mr = NB.transpose() * (M * NB);
  Mr = 0.5 * (Mr + Mr.transpose());

  Eigen::LLT<Eigen::MatrixXd> llt(Mr);
  if (llt.info() != Eigen::Success)
    throw SolverError("reduced mass matrix is not positive definite", static_cast<long>(NB.cols()));

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Lr + Lr.transpose()), Mr);
  if (es.info() != Eigen::Success) throw SolverError("generalized eigensolver did not converge");
  return smallest(es.eigenvalues(), NB * es.eigenvectors(), k);
}

Modes constraint_matrix_modes(const SparseMatrix& C, int k) {
  if (k <= 0) throw InvalidArgument("constraint_matrix_modes: mode count must be positive");
  const Eigen::MatrixXd CtC = Eigen::MatrixXd(SparseMatrix(C.transpose() * C));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(CtC);
  if (es.info() != Eigen::Success) throw SolverError("eigensolver did not converge");
  return smallest(es.eigenvalues(), es.eigenvectors(), k);
}

}  // namespace decon
