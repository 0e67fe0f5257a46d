#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "decon/geometry.hpp"
#include "decon/mesh.hpp"
#include "decon/sparse.hpp"

namespace decon {

enum class CouplingMode { all_vertices, boundary_only, boundary_only_thinned };

std::string_view to_string(CouplingMode mode);
CouplingMode parse_coupling_mode(std::string_view name);

/// u[target] = sum_j coefficients[j] * u[anchor simplex corner j].
struct ConstraintRow {
  int target_subdomain = 0;
  int target_vertex = 0;
  int anchor_subdomain = 0;
  int anchor_simplex = 0;
  Eigen::VectorXd coefficients;  // barycentric coordinates of the target in the anchor simplex

  friend bool operator==(const ConstraintRow& a, const ConstraintRow& b) {
    return a.target_subdomain == b.target_subdomain && a.target_vertex == b.target_vertex &&
           a.anchor_subdomain == b.anchor_subdomain && a.anchor_simplex == b.anchor_simplex &&
           a.coefficients == b.coefficients;
  }
};

struct ConstraintSet {
  CouplingMode mode = CouplingMode::all_vertices;
  std::vector<ConstraintRow> rows;

  int size() const noexcept { return static_cast<int>(rows.size()); }
};

/// One row per (vertex of a, subdomain b != a) with the vertex inside b.
/// Rows are ordered by target subdomain, target vertex, then anchor subdomain.
/// Dirichlet-pinned targets are skipped.
ConstraintSet all_vertex_constraints(const DeconstructedDomain& domain, std::span<const AabbTree> trees);

/// As all_vertex_constraints, restricted to boundary vertices of the target mesh.
ConstraintSet boundary_only_constraints(const DeconstructedDomain& domain, std::span<const AabbTree> trees);

/// Keeps one row per target vertex. Every vertex is scored by the number of
/// rows it takes part in (as target or as a corner of an anchor simplex);
/// a row scores the mean of its vertices, and the lowest scoring row of each
/// target survives. Ties go to the lowest (anchor subdomain, anchor simplex,
/// input position).
ConstraintSet thin_constraints(const ConstraintSet& cs, const DeconstructedDomain& domain);

/// Dispatches on `mode`.
ConstraintSet build_constraints(const DeconstructedDomain& domain, std::span<const AabbTree> trees,
                                CouplingMode mode);

/// Materialized (rows x total vertices) matrix: +1 at the target column and
/// -coefficient at each anchor corner column.
SparseMatrix constraint_matrix(const ConstraintSet& cs, const DeconstructedDomain& domain);

/// CSV with header target_subdomain,target_vertex,anchor_subdomain,anchor_simplex,c0,...,cd.
std::string constraints_to_csv(const ConstraintSet& cs, int dim);

}  // namespace decon
