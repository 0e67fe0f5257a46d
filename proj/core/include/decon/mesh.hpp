#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace decon {

using Point = Eigen::VectorXd;

/// Piecewise-linear simplicial mesh of dimension 1, 2 or 3.
///
/// Vertices are stored row-wise (n x d), simplices as (t x d+1) 0-based
/// indices. Construction validates the mesh: indices in range, every vertex
/// used, no degenerate simplex, and a closed boundary complex. Orientation is
/// not normalized; measures are taken in absolute value.
class SimplicialMesh {
 public:
  SimplicialMesh(Eigen::MatrixXd vertices, Eigen::MatrixXi simplices);

  int dim() const noexcept { return static_cast<int>(vertices_.cols()); }
  int vertex_count() const noexcept { return static_cast<int>(vertices_.rows()); }
  int simplex_count() const noexcept { return static_cast<int>(simplices_.rows()); }

  const Eigen::MatrixXd& vertices() const noexcept { return vertices_; }
  const Eigen::MatrixXi& simplices() const noexcept { return simplices_; }

  Point vertex(int i) const { return vertices_.row(i).transpose(); }
  /// (d x d+1) matrix whose columns are the corners of simplex `t`.
  Eigen::MatrixXd corners(int t) const;

  /// Length of the bounding box diagonal.
  double bbox_diagonal() const noexcept { return bbox_diagonal_; }

  friend bool operator==(const SimplicialMesh& a, const SimplicialMesh& b) {
    return a.vertices_ == b.vertices_ && a.simplices_ == b.simplices_;
  }

 private:
  Eigen::MatrixXd vertices_;
  Eigen::MatrixXi simplices_;
  double bbox_diagonal_ = 0.0;
};

/// Unsigned d-measure (length, area, volume) of simplex `t`.
/// Throws DegenerateSimplexError below 1e-14 * diag^d.
double simplex_measure(const SimplicialMesh& mesh, int t);

/// Vertices incident to a facet owned by exactly one simplex, sorted.
std::vector<int> boundary_vertices(const SimplicialMesh& mesh);

/// Facets (sorted d-tuples) owned by exactly one simplex.
std::vector<std::vector<int>> boundary_facets(const SimplicialMesh& mesh);

/// Largest circumradius over all simplices.
double max_circumradius(const SimplicialMesh& mesh);

// DMESH text format --------------------------------------------------------

SimplicialMesh load_mesh(std::string_view text);
std::string save_mesh(const SimplicialMesh& mesh);
SimplicialMesh read_mesh_file(const std::string& path);
void write_mesh_file(const SimplicialMesh& mesh, const std::string& path);

// Generators ---------------------------------------------------------------

/// `n` uniformly spaced vertices on [a, b].
SimplicialMesh generate_segment(double a, double b, int n);

/// Structured polar grid of (n_r+1) x n_t vertices, vertex index
/// ring * n_t + angle. Each quad is split along its (i,j)-(i+1,j+1) diagonal.
SimplicialMesh generate_annulus(double r_in, double r_out, int n_r, int n_t,
                                double theta_offset);

/// Polar grid with the given ring radii (strictly increasing), same layout.
SimplicialMesh generate_annulus(std::span<const double> radii, int n_t, double theta_offset);

/// Ring-based triangulation of the disk of `radius` around `center`, with
/// `n_r` rings and `n_boundary` vertices on the outer circle.
SimplicialMesh generate_disk(const Eigen::Vector2d& center, double radius,
                             int n_r, int n_boundary, double theta_offset = 0.0);

/// Disk of `radius` at the origin cut by the half plane
/// `side * x >= -offset` (side = +1 keeps the right part, -1 the left part).
SimplicialMesh generate_cut_disk(double radius, double offset, int side,
                                 int n_r, int n_boundary);

// Domains ------------------------------------------------------------------

struct DirichletValue {
  int subdomain = 0;
  int vertex = 0;
  double value = 0.0;
};

/// Union of K overlapping meshes plus Dirichlet data. Meshes are never merged;
/// global unknowns are the subdomain vertex lists stacked in order.
class DeconstructedDomain {
 public:
  DeconstructedDomain(std::vector<SimplicialMesh> subdomains,
                      std::vector<DirichletValue> dirichlet = {});

  int dim() const noexcept { return subdomains_.front().dim(); }
  int size() const noexcept { return static_cast<int>(subdomains_.size()); }
  const SimplicialMesh& operator[](int k) const { return subdomains_[k]; }
  const std::vector<SimplicialMesh>& subdomains() const noexcept { return subdomains_; }
  const std::vector<DirichletValue>& dirichlet() const noexcept { return dirichlet_; }

  /// offsets()[k] is the global index of vertex 0 of subdomain k;
  /// offsets()[K] is the total vertex count.
  const std::vector<int>& offsets() const noexcept { return offsets_; }
  int total_vertices() const noexcept { return offsets_.back(); }
  int global_index(int subdomain, int vertex) const { return offsets_[subdomain] + vertex; }

  bool is_pinned(int subdomain, int vertex) const;
  /// Dirichlet data as (global index, value) pairs.
  std::vector<std::pair<int, double>> fixed_values() const;

 private:
  std::vector<SimplicialMesh> subdomains_;
  std::vector<DirichletValue> dirichlet_;
  std::vector<int> offsets_;
  std::vector<std::vector<char>> pinned_;
};

}  // namespace decon
