#pragma once

#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "decon/coupling.hpp"
#include "decon/fem.hpp"
#include "decon/geometry.hpp"
#include "decon/mesh.hpp"
#include "decon/sparse.hpp"

namespace decon {

struct SolveReport {
  Eigen::VectorXd u;              // stacked subdomain values (length N)
  std::vector<int> offsets;       // subdomain k owns u[offsets[k] .. offsets[k+1])
  Eigen::VectorXd multipliers;    // one per coupling row; 0 for rows dropped as dependent
  Eigen::VectorXd z;              // bi-Laplace only: M^{-1}(L u + A^T lambda_z)
  Eigen::VectorXd multipliers_z;  // bi-Laplace high_order only
  double constraint_residual = 0.0;  // max |A u - c|
  double energy = 0.0;
  int constraint_rows = 0;
  int dropped_rows = 0;

  Eigen::VectorXd subdomain(int k) const { return u.segment(offsets[k], offsets[k + 1] - offsets[k]); }
};

/// Minimizes 1/2 u^T Q u - b^T u subject to A u = c and u[i] = value for each
/// fixed pair. Fixed entries are substituted and the saddle system
/// [[Q, A^T], [A, 0]] is solved; if it is singular, linearly dependent rows
/// of A are dropped and the reduced system is solved instead.
///
/// Throws SolverError for a singular system or when the dropped rows are not
/// satisfied (infeasible data).
SolveReport solve_kkt(const SparseMatrix& Q, const Eigen::VectorXd& b, const SparseMatrix& A,
                      const Eigen::VectorXd& c, std::span<const std::pair<int, double>> fixed);

/// Trees, global operators and coupling constraints of one domain.
struct Discretization {
  std::vector<AabbTree> trees;
  GlobalOperators ops;
  ConstraintSet constraints;
  SparseMatrix A;
};

Discretization discretize(const DeconstructedDomain& domain, const QuadratureSpec& quad, CouplingMode mode);

/// Constant source or one value per global vertex.
using Source = std::variant<double, Eigen::VectorXd>;

/// Source values at all n vertices. Throws InvalidArgument on a size mismatch.
Eigen::VectorXd expand_source(const Source& f, int n);

/// -Laplace(u) = f with the domain's Dirichlet data: Q = L, b = M f.
SolveReport solve_poisson(const DeconstructedDomain& domain, const QuadratureSpec& quad, CouplingMode mode,
                          const Source& f);
SolveReport solve_poisson(const DeconstructedDomain& domain, const Discretization& disc, const Source& f);

/// (M + alpha L) u = M rhs. Heat: alpha = dt, rhs = u0. Wave: alpha = dt^2, rhs = u0 + dt * v0.
SolveReport implicit_step(const DeconstructedDomain& domain, const QuadratureSpec& quad, CouplingMode mode,
                          double alpha, const Eigen::VectorXd& rhs);
SolveReport implicit_step(const DeconstructedDomain& domain, const Discretization& disc, double alpha,
                          const Eigen::VectorXd& rhs);

SolveReport heat_step(const DeconstructedDomain& domain, const QuadratureSpec& quad, CouplingMode mode,
                      double dt, const Eigen::VectorXd& u0);
SolveReport wave_step(const DeconstructedDomain& domain, const QuadratureSpec& quad, CouplingMode mode,
                      double dt, const Eigen::VectorXd& u0, const Eigen::VectorXd& v0);

enum class BilaplaceCoupling { value_only, low_order, high_order };

std::string_view to_string(BilaplaceCoupling coupling);
BilaplaceCoupling parse_bilaplace_coupling(std::string_view name);

struct BilaplaceOptions {
  BilaplaceCoupling coupling = BilaplaceCoupling::high_order;
  CouplingMode rows = CouplingMode::boundary_only;  // which vertices carry coupling rows
  Source load = 0.0;                                // f in Laplace^2 u = f
  /// Prescribed values of the auxiliary variable z (about -Laplace u).
  /// Vertices not listed get the natural condition.
  std::vector<DirichletValue> dirichlet_z;
};

/// Mixed FEM for the squared Laplacian energy, unknowns [u; z; lambda_u; lambda_z]:
///
///   [ 0    L    A_u^T  0     ] [u]   [M f]
///   [ L   -M    0      A_z^T ] [z] = [ 0 ]
///   [ A_u  0    0      0     ]        [ 0 ]
///   [ 0    A_z  0      0     ]        [ 0 ]
///
/// value_only couples u; low_order (1D only) adds one-sided derivative rows on
/// u; high_order couples u and z. Dirichlet values of u come from the domain.
SolveReport solve_bilaplace(const DeconstructedDomain& domain, const QuadratureSpec& quad,
                            const BilaplaceOptions& options);

/// The same high_order problem as a convex QP in (u, lambda_z, y):
/// min |y|^2 subject to A u = 0 and L u + A^T lambda_z = M^{1/2} y,
/// with the load and prescribed z entering through the linear term.
/// Throws InvalidArgument for a zero mass entry.
SolveReport solve_bilaplace_convex(const DeconstructedDomain& domain, const QuadratureSpec& quad,
                                   const BilaplaceOptions& options);

struct Modes {
  Eigen::VectorXd values;   // nondecreasing
  Eigen::MatrixXd vectors;  // N x k, M-orthonormal
};

/// k smallest generalized eigenpairs of L v = lambda M v restricted to null(A)
/// (null-space method, dense). Throws SolverError when the reduced mass is
/// not positive definite.
Modes constrained_modes(const SparseMatrix& L, const SparseMatrix& M, const SparseMatrix& A, int k);

/// k smallest eigenpairs of C^T C (squared singular values of C).
Modes constraint_matrix_modes(const SparseMatrix& C, int k);

}  // namespace decon
