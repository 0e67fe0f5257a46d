#include "decon/error.hpp"
#include "decon/solver.hpp"

namespace decon {

Eigen::VectorXd expand_source(const Source& f, int n) {
  if (const double* c = std::get_if<double>(&f)) return Eigen::VectorXd::Constant(n, *c);
  const auto& v = std::get<Eigen::VectorXd>(f);
  if (v.size() != n) throw InvalidArgument("source has " + std::to_string(v.size()) + " values, expected " + std::to_string(n));
  return v;
}

Discretization discretize(const DeconstructedDomain& domain, const QuadratureSpec& quad, CouplingMode mode) {
  Discretization d;
  d.trees = build_trees(domain);
  d.ops = assemble_global(domain, d.trees, quad);
  d.constraints = build_constraints(domain, d.trees, mode);
  d.A = constraint_matrix(d.constraints, domain);
  return d;
}

SolveReport solve_poisson(const DeconstructedDomain& domain, const Discretization& disc, const Source& f) {
  const Eigen::VectorXd b = disc.ops.M * expand_source(f, domain.total_vertices());
  const auto fixed = domain.fixed_values();
  SolveReport rep = solve_kkt(disc.ops.L, b, disc.A, Eigen::VectorXd::Zero(disc.A.rows()), fixed);
  rep.offsets = domain.offsets();
  return rep;
}

SolveReport solve_poisson(const DeconstructedDomain& domain, const QuadratureSpec& quad, CouplingMode mode,
                          const Source& f) {
  return solve_poisson(domain, discretize(domain, quad, mode), f);
}

SolveReport implicit_step(const DeconstructedDomain& domain, const Discretization& disc, double alpha,
                          const Eigen::VectorXd& rhs) {
  if (!(alpha > 0.0)) throw InvalidArgument("implicit_step: alpha must be positive");
  if (rhs.size() != domain.total_vertices()) throw InvalidArgument("implicit_step: rhs size mismatch");
  const SparseMatrix Q = disc.ops.M + alpha * disc.ops.L;
  const auto fixed = domain.fixed_values();
  SolveReport rep = solve_kkt(Q, disc.ops.M * rhs, disc.A, Eigen::VectorXd::Zero(disc.A.rows()), fixed);
  rep.offsets = domain.offsets();
  return rep;
}

SolveReport implicit_step(const DeconstructedDomain& domain, const QuadratureSpec& quad, CouplingMode mode,
                          double alpha, const Eigen::VectorXd& rhs) {
  return implicit_step(domain, discretize(domain, quad, mode), alpha, rhs);
}

SolveReport heat_step(const DeconstructedDomain& domain, const QuadratureSpec& quad, CouplingMode mode,
                      double dt, const Eigen::VectorXd& u0) {
  return implicit_step(domain, quad, mode, dt, u0);
}

SolveReport wave_step(const DeconstructedDomain& domain, const QuadratureSpec& quad, CouplingMode mode,
                      double dt, const Eigen::VectorXd& u0, const Eigen::VectorXd& v0) {
  return implicit_step(domain, quad, mode, dt * dt, u0 + dt * v0);
}

}  // namespace decon
