#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "decon/geometry.hpp"
#include "decon/mesh.hpp"
#include "decon/sparse.hpp"

namespace decon {

/// How the overlap weight 1 / (number of covering subdomains) is integrated
/// over each element.
struct QuadratureSpec {
  enum class Scheme { corner_average, barycenter, symmetric_fixed_order, monte_carlo };

  Scheme scheme = Scheme::corner_average;
  int points = 1;                 // symmetric_fixed_order: 1, 4 or 10
  int samples_per_element = 100;  // monte_carlo
  std::uint64_t seed = 0;         // monte_carlo

  static QuadratureSpec corner_average() { return {}; }
  static QuadratureSpec barycenter() { return {Scheme::barycenter, 1, 0, 0}; }
  static QuadratureSpec symmetric_fixed_order(int n_points);
  static QuadratureSpec monte_carlo(int samples_per_element, std::uint64_t seed);

  std::string name() const;
};

/// Points in barycentric coordinates (q x d+1) with positive weights summing to one.
struct QuadratureRule {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
};

/// Rule used on element `element` of a d-dimensional mesh. Only monte_carlo
/// depends on the element index (through its random stream).
QuadratureRule quadrature_rule(const QuadratureSpec& spec, int dim, int element = 0);

/// Discrete gradient (d*t x n): rows d*k .. d*k+d-1 hold the constant gradient
/// of the piecewise-linear interpolant on simplex k.
SparseMatrix gradient_matrix(const SimplicialMesh& mesh);

/// Element measures of subdomain k weighted by the quadrature of
/// 1 / coverage over each element.
Eigen::VectorXd adjusted_volumes(const DeconstructedDomain& domain, std::span<const AabbTree> trees,
                                 int k, const QuadratureSpec& quad);
Eigen::VectorXd adjusted_volumes(const DeconstructedDomain& domain, int k, const QuadratureSpec& quad);

/// G^T diag(a) G, each element weight repeated over its d gradient rows.
SparseMatrix stiffness_matrix(const SimplicialMesh& mesh, const Eigen::VectorXd& volumes);

/// Diagonal mass: each element weight split evenly over its d+1 corners.
SparseMatrix lumped_mass_matrix(const SimplicialMesh& mesh, const Eigen::VectorXd& volumes);

struct GlobalOperators {
  SparseMatrix L;  // block-diagonal stiffness
  SparseMatrix M;  // block-diagonal lumped mass
  std::vector<int> offsets;
  std::vector<Eigen::VectorXd> volumes;  // adjusted volumes per subdomain
};

GlobalOperators assemble_global(const DeconstructedDomain& domain, std::span<const AabbTree> trees,
                                const QuadratureSpec& quad);
GlobalOperators assemble_global(const DeconstructedDomain& domain, const QuadratureSpec& quad);

}  // namespace decon
