#include "decon/geometry.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "decon/error.hpp"

namespace decon {

Eigen::VectorXd barycentric_coordinates(const Eigen::MatrixXd& corners, const Point& p) {
  const int d = static_cast<int>(corners.rows());
  if (corners.cols() != d + 1 || p.size() != d)
    throw InvalidArgument("barycentric_coordinates: dimension mismatch");
  Eigen::MatrixXd E(d, d);
  for (int j = 0; j < d; ++j) E.col(j) = corners.col(j + 1) - corners.col(0);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
  if (!lu.isInvertible()) throw DegenerateSimplexError(0, 0.0);
  const Eigen::VectorXd lambda = lu.solve(p - corners.col(0));
  Eigen::VectorXd b(d + 1);
  b(0) = 1.0 - lambda.sum();
  b.tail(d) = lambda;
  return b;
}

double containment_tolerance(const SimplicialMesh& mesh) { return 1e-10 * mesh.bbox_diagonal(); }

std::optional<PointLocation> locate_point_brute_force(const SimplicialMesh& mesh, const Point& p) {
  const double tol = containment_tolerance(mesh);
  for (int t = 0; t < mesh.simplex_count(); ++t) {
    Eigen::VectorXd b = barycentric_coordinates(mesh.corners(t), p);
    if (b.minCoeff() >= -tol) return PointLocation{t, std::move(b)};
  }
  return std::nullopt;
}

std::optional<PointLocation> locate_point(const AabbTree& tree, const Point& p) {
  const SimplicialMesh& mesh = tree.mesh();
  const double tol = containment_tolerance(mesh);
  // Candidates come sorted, so the first hit is the lowest index.
  for (int t : tree.candidates(p)) {
    Eigen::VectorXd b = barycentric_coordinates(mesh.corners(t), p);
    if (b.minCoeff() >= -tol) return PointLocation{t, std::move(b)};
  }
  return std::nullopt;
}

std::vector<AabbTree> build_trees(const DeconstructedDomain& domain) {
  std::vector<AabbTree> trees;
  trees.reserve(domain.size());
  for (const auto& m : domain.subdomains()) trees.emplace_back(m);
  return trees;
}

int coverage_count(const DeconstructedDomain& domain, std::span<const AabbTree> trees,
                   const Point& p) {
  if (static_cast<int>(trees.size()) != domain.size())
    throw InvalidArgument("coverage_count: one tree per subdomain required");
  int count = 0;
  for (const auto& tree : trees) {
    if (locate_point(tree, p)) ++count;
  }
  return count;
}

}  // namespace decon
