#include "decon/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "decon/error.hpp"

namespace decon {
namespace {

using Facet = std::array<int, 3>;  // sorted, padded with -1

// All facets of every simplex, sorted so equal facets are adjacent.
std::vector<Facet> sorted_facets(const SimplicialMesh& mesh) {
  const int d = mesh.dim();
  const auto& T = mesh.simplices();
  std::vector<Facet> facets;
  facets.reserve(static_cast<std::size_t>(T.rows()) * (d + 1));
  for (int t = 0; t < T.rows(); ++t) {
    for (int omit = 0; omit <= d; ++omit) {
      Facet f{-1, -1, -1};
      int k = 0;
      for (int c = 0; c <= d; ++c) {
        if (c != omit) f[k++] = T(t, c);
      }
      std::sort(f.begin(), f.begin() + d);
      facets.push_back(f);
    }
  }
  std::sort(facets.begin(), facets.end());
  return facets;
}

std::vector<Facet> unique_facets(const std::vector<Facet>& sorted) {
  std::vector<Facet> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i == 1) out.push_back(sorted[i]);
    i = j;
  }
  return out;
}

double factorial(int d) {
  double f = 1.0;
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

double raw_measure(const Eigen::MatrixXd& corners) {
  const int d = static_cast<int>(corners.rows());
  Eigen::MatrixXd E(d, d);
  for (int j = 0; j < d; ++j) E.col(j) = corners.col(j + 1) - corners.col(0);
  return std::abs(E.determinant()) / factorial(d);
}

}  // namespace

SimplicialMesh::SimplicialMesh(Eigen::MatrixXd vertices, Eigen::MatrixXi simplices)
    : vertices_(std::move(vertices)), simplices_(std::move(simplices)) {
  const int d = dim();
  if (d < 1 || d > 3) throw MeshError("mesh dimension must be 1, 2 or 3");
  if (simplices_.cols() != d + 1)
    throw MeshError("simplices must have d+1 = " + std::to_string(d + 1) + " columns");
  if (vertices_.rows() == 0 || simplices_.rows() == 0)
    throw MeshError("mesh must have at least one vertex and one simplex");

  const int n = vertex_count();
  std::vector<char> used(n, 0);
  for (int t = 0; t < simplices_.rows(); ++t) {
    for (int c = 0; c <= d; ++c) {
      const int v = simplices_(t, c);
      if (v < 0 || v >= n)
        throw MeshError("simplex " + std::to_string(t) + " references vertex " +
                        std::to_string(v) + " out of range [0, " + std::to_string(n) + ")");
      used[v] = 1;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!used[v]) throw MeshError("vertex " + std::to_string(v) + " is not referenced by any simplex");
  }

  const Eigen::VectorXd lo = vertices_.colwise().minCoeff();
  const Eigen::VectorXd hi = vertices_.colwise().maxCoeff();
  bbox_diagonal_ = (hi - lo).norm();

  for (int t = 0; t < simplex_count(); ++t) simplex_measure(*this, t);

  // The boundary must be a closed (d-1)-complex: every ridge of the boundary
  // is shared by an even number of boundary facets.
  if (d >= 2) {
    std::vector<std::array<int, 2>> ridges;
    for (const Facet& f : unique_facets(sorted_facets(*this))) {
      for (int omit = 0; omit < d; ++omit) {
        std::array<int, 2> r{-1, -1};
        int k = 0;
        for (int c = 0; c < d; ++c) {
          if (c != omit) r[k++] = f[c];
        }
        ridges.push_back(r);
      }
    }
    std::sort(ridges.begin(), ridges.end());
    for (std::size_t i = 0; i < ridges.size();) {
      std::size_t j = i;
      while (j < ridges.size() && ridges[j] == ridges[i]) ++j;
      if ((j - i) % 2 != 0) throw MeshError("boundary is not a closed complex");
      i = j;
    }
  }
}

Eigen::MatrixXd SimplicialMesh::corners(int t) const {
  const int d = dim();
  Eigen::MatrixXd X(d, d + 1);
  for (int c = 0; c <= d; ++c) X.col(c) = vertices_.row(simplices_(t, c)).transpose();
  return X;
}

double simplex_measure(const SimplicialMesh& mesh, int t) {
  if (t < 0 || t >= mesh.simplex_count())
    throw InvalidArgument("simplex index " + std::to_string(t) + " out of range");
  const double m = raw_measure(mesh.corners(t));
  const double threshold = 1e-14 * std::pow(mesh.bbox_diagonal(), mesh.dim());
  if (!(m >= threshold) || m == 0.0) throw DegenerateSimplexError(t, m);
  return m;
}

std::vector<std::vector<int>> boundary_facets(const SimplicialMesh& mesh) {
  const int d = mesh.dim();
  std::vector<std::vector<int>> out;
  for (const Facet& f : unique_facets(sorted_facets(mesh))) out.emplace_back(f.begin(), f.begin() + d);
  return out;
}

std::vector<int> boundary_vertices(const SimplicialMesh& mesh) {
  std::vector<char> flag(mesh.vertex_count(), 0);
  for (const Facet& f : unique_facets(sorted_facets(mesh))) {
    for (int c = 0; c < mesh.dim(); ++c) flag[f[c]] = 1;
  }
  std::vector<int> out;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (flag[v]) out.push_back(v);
  }
  return out;
}

double max_circumradius(const SimplicialMesh& mesh) {
  const int d = mesh.dim();
  double r = 0.0;
  for (int t = 0; t < mesh.simplex_count(); ++t) {
    const Eigen::MatrixXd X = mesh.corners(t);
    // Circumcenter c solves 2 (x_i - x_0) . (c - x_0) = |x_i - x_0|^2.
    Eigen::MatrixXd E(d, d);
    Eigen::VectorXd rhs(d);
    for (int i = 0; i < d; ++i) {
      E.row(i) = 2.0 * (X.col(i + 1) - X.col(0)).transpose();
      rhs(i) = (X.col(i + 1) - X.col(0)).squaredNorm();
    }
    const Eigen::VectorXd c = E.partialPivLu().solve(rhs);
    r = std::max(r, c.norm());
  }
  return r;
}

DeconstructedDomain::DeconstructedDomain(std::vector<SimplicialMesh> subdomains,
                                         std::vector<DirichletValue> dirichlet)
    : subdomains_(std::move(subdomains)), dirichlet_(std::move(dirichlet)) {
  if (subdomains_.empty()) throw InvalidArgument("a domain needs at least one subdomain");
  const int d = subdomains_.front().dim();
  offsets_.assign(1, 0);
  for (const auto& m : subdomains_) {
    if (m.dim() != d) throw InvalidArgument("all subdomains must share the same dimension");
    offsets_.push_back(offsets_.back() + m.vertex_count());
  }

  pinned_.resize(subdomains_.size());
  std::vector<std::vector<char>> on_boundary(subdomains_.size());
  for (std::size_t k = 0; k < subdomains_.size(); ++k) {
    pinned_[k].assign(subdomains_[k].vertex_count(), 0);
    on_boundary[k].assign(subdomains_[k].vertex_count(), 0);
    for (int v : boundary_vertices(subdomains_[k])) on_boundary[k][v] = 1;
  }
  for (const auto& bc : dirichlet_) {
    if (bc.subdomain < 0 || bc.subdomain >= size())
      throw InvalidArgument("Dirichlet subdomain " + std::to_string(bc.subdomain) + " out of range");
    const auto& m = subdomains_[bc.subdomain];
    if (bc.vertex < 0 || bc.vertex >= m.vertex_count())
      throw InvalidArgument("Dirichlet vertex " + std::to_string(bc.vertex) + " out of range");
    if (!on_boundary[bc.subdomain][bc.vertex])
      throw InvalidArgument("Dirichlet vertex " + std::to_string(bc.vertex) + " of subdomain " +
                            std::to_string(bc.subdomain) + " is not a boundary vertex");
    if (pinned_[bc.subdomain][bc.vertex])
      throw InvalidArgument("vertex " + std::to_string(bc.vertex) + " of subdomain " +
                            std::to_string(bc.subdomain) + " is pinned twice");
    pinned_[bc.subdomain][bc.vertex] = 1;
  }
}

bool DeconstructedDomain::is_pinned(int subdomain, int vertex) const {
  return pinned_[subdomain][vertex] != 0;
}

std::vector<std::pair<int, double>> DeconstructedDomain::fixed_values() const {
  std::vector<std::pair<int, double>> out;
  out.reserve(dirichlet_.size());
  for (const auto& bc : dirichlet_) out.emplace_back(global_index(bc.subdomain, bc.vertex), bc.value);
  return out;
}

}  // namespace decon
