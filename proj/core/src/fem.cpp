#include "decon/fem.hpp"

#include <Eigen/Dense>

#include "decon/error.hpp"

namespace decon {

SparseMatrix gradient_matrix(const SimplicialMesh& mesh) {
  const int d = mesh.dim();
  const int t = mesh.simplex_count();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(t) * d * (d + 1));
  for (int k = 0; k < t; ++k) {
    simplex_measure(mesh, k);  // rejects degenerate elements
    const Eigen::MatrixXd X = mesh.corners(k);
    Eigen::MatrixXd E(d, d);
    for (int j = 0; j < d; ++j) E.col(j) = X.col(j + 1) - X.col(0);
    // Row j of E^{-1} is the gradient of barycentric coordinate j+1.
    const Eigen::MatrixXd Einv = E.inverse();
    for (int c = 0; c < d; ++c) {
      double g0 = 0.0;
      for (int j = 0; j < d; ++j) {
        trips.emplace_back(d * k + c, mesh.simplices()(k, j + 1), Einv(j, c));
        g0 -= Einv(j, c);
      }
      trips.emplace_back(d * k + c, mesh.simplices()(k, 0), g0);
    }
  }
  return from_triplets(d * t, mesh.vertex_count(), trips);
}

Eigen::VectorXd adjusted_volumes(const DeconstructedDomain& domain, std::span<const AabbTree> trees,
                                 int k, const QuadratureSpec& quad) {
  if (k < 0 || k >= domain.size()) throw InvalidArgument("subdomain index out of range");
  const SimplicialMesh& mesh = domain[k];
  const int t = mesh.simplex_count();
  Eigen::VectorXd a(t);
  const bool shared_rule = quad.scheme != QuadratureSpec::Scheme::monte_carlo;
  const QuadratureRule fixed_rule = shared_rule ? quadrature_rule(quad, mesh.dim()) : QuadratureRule{};
  for (int e = 0; e < t; ++e) {
    const QuadratureRule rule = shared_rule ? fixed_rule : quadrature_rule(quad, mesh.dim(), e);
    const Eigen::MatrixXd X = mesh.corners(e);
    double weight = 0.0;
    for (int q = 0; q < rule.points.rows(); ++q) {
      const Point p = X * rule.points.row(q).transpose();
      const int count = coverage_count(domain, trees, p);
      if (count == 0)
        throw InvalidArgument("quadrature point of element " + std::to_string(e) + " in subdomain " +
                              std::to_string(k) + " is covered by no subdomain");
      weight += rule.weights(q) / count;
    }
    a(e) = simplex_measure(mesh, e) * weight;
  }
  return a;
}

Eigen::VectorXd adjusted_volumes(const DeconstructedDomain& domain, int k, const QuadratureSpec& quad) {
  const auto trees = build_trees(domain);
  return adjusted_volumes(domain, trees, k, quad);
}

SparseMatrix stiffness_matrix(const SimplicialMesh& mesh, const Eigen::VectorXd& volumes) {
  const int d = mesh.dim();
  if (volumes.size() != mesh.simplex_count())
    throw InvalidArgument("stiffness_matrix: one volume per simplex required");
  if (volumes.size() && volumes.minCoeff() < 0.0) throw InvalidArgument("negative adjusted volume");
  const SparseMatrix G = gradient_matrix(mesh);
  Eigen::VectorXd w(G.rows());
  for (int k = 0; k < volumes.size(); ++k) w.segment(d * k, d).setConstant(volumes(k));
  SparseMatrix L = G.transpose() * sparse_diagonal(w) * G;
  L.prune(0.0);
  L.makeCompressed();
  return L;
}

SparseMatrix lumped_mass_matrix(const SimplicialMesh& mesh, const Eigen::VectorXd& volumes) {
  const int d = mesh.dim();
  if (volumes.size() != mesh.simplex_count())
    throw InvalidArgument("lumped_mass_matrix: one volume per simplex required");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int k = 0; k < mesh.simplex_count(); ++k)
    for (int c = 0; c <= d; ++c) m(mesh.simplices()(k, c)) += volumes(k) / (d + 1);
  return sparse_diagonal(m);
}

GlobalOperators assemble_global(const DeconstructedDomain& domain, std::span<const AabbTree> trees,
                                const QuadratureSpec& quad) {
  GlobalOperators ops;
  std::vector<SparseMatrix> Ls, Ms;
  for (int k = 0; k < domain.size(); ++k) {
    ops.volumes.push_back(adjusted_volumes(domain, trees, k, quad));
    Ls.push_back(stiffness_matrix(domain[k], ops.volumes.back()));
    Ms.push_back(lumped_mass_matrix(domain[k], ops.volumes.back()));
  }
  ops.L = blkdiag(Ls);
  ops.M = blkdiag(Ms);
  ops.offsets = domain.offsets();
  return ops;
}

GlobalOperators assemble_global(const DeconstructedDomain& domain, const QuadratureSpec& quad) {
  const auto trees = build_trees(domain);
  return assemble_global(domain, trees, quad);
}

}  // namespace decon
