#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "decon/mesh.hpp"

namespace decon {

/// Barycentric coordinates of `p` w.r.t. the simplex whose corners are the
/// columns of `corners` (d x d+1). Coordinates sum to one and may be negative
/// for exterior points. Throws DegenerateSimplexError for a flat simplex.
Eigen::VectorXd barycentric_coordinates(const Eigen::MatrixXd& corners, const Point& p);

struct PointLocation {
  int simplex = -1;
  Eigen::VectorXd coords;  // d+1 barycentric coordinates in `simplex`
};

/// Bounding volume hierarchy over the simplices of one mesh.
///
/// Holds a reference to the mesh; the mesh must outlive the tree.
class AabbTree {
 public:
  explicit AabbTree(const SimplicialMesh& mesh);

  const SimplicialMesh& mesh() const noexcept { return *mesh_; }

  /// Indices of simplices whose (slightly inflated) bounding box contains p.
  std::vector<int> candidates(const Point& p) const;

 private:
  struct Node {
    Eigen::VectorXd lo, hi;
    int left = -1, right = -1;  // children, -1 for leaves
    int begin = 0, end = 0;     // range in order_ for leaves
  };

  int build(int begin, int end);

  const SimplicialMesh* mesh_;
  std::vector<Node> nodes_;
  std::vector<int> order_;
  Eigen::MatrixXd lo_, hi_;  // per-simplex boxes (t x d)
  double pad_ = 0.0;
};

/// Containment tolerance on barycentric coordinates: 1e-10 * bbox diagonal.
double containment_tolerance(const SimplicialMesh& mesh);

/// Lowest-index simplex containing `p` (closed, with tolerance), if any.
std::optional<PointLocation> locate_point(const AabbTree& tree, const Point& p);

/// Reference implementation of locate_point: scans every simplex.
std::optional<PointLocation> locate_point_brute_force(const SimplicialMesh& mesh, const Point& p);

/// One tree per subdomain, in domain order.
std::vector<AabbTree> build_trees(const DeconstructedDomain& domain);

/// Number of subdomains containing `p`.
int coverage_count(const DeconstructedDomain& domain, std::span<const AabbTree> trees,
                   const Point& p);

}  // namespace decon
