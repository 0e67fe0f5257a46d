#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "decon/config.hpp"
#include "decon/mesh.hpp"
#include "decon/solver.hpp"

namespace decon {

enum class Pde { poisson, bilaplace };

/// A concrete domain at one resolution, with its PDE data.
struct Scenario {
  DeconstructedDomain domain;
  Pde pde = Pde::poisson;
  double source = 0.0;
  std::vector<DirichletValue> dirichlet_z;                  // bi-Laplace only
  std::function<double(const Point&)> reference;            // empty when no closed form
};

/// Builds the configured scenario. `resolution` is the vertex count per
/// segment in 1D and the number of radial cells for annuli (see annulus_pair)
/// and disks.
Scenario make_scenario(const ExperimentConfig& config, int resolution);

/// Two meshes of the annulus 1 <= r <= 2 with geometric ring radii 2^(i/n_r)
/// and about 2 pi n_r / ln 2 angular samples (nearly square cells). The second
/// mesh is shifted by half a cell radially and angularly.
std::vector<SimplicialMesh> annulus_pair(int n_r);

/// Single-mesh counterpart of `halfdisk` (used as the modes reference).
DeconstructedDomain halfdisk_reference(int resolution);

/// Solves the scenario's PDE with the configured coupling and quadrature.
SolveReport solve_scenario(const Scenario& scenario, const ExperimentConfig& config);

/// Largest element circumradius over all subdomains.
double mesh_size(const DeconstructedDomain& domain);

/// Max over all vertices of |u - reference|.
double linf_error(const Scenario& scenario, const SolveReport& report);

struct ConvergenceRow {
  double h = 0.0;
  int n_total = 0;
  double error_linf = 0.0;
  std::optional<double> observed_order;  // against the previous successful row
  int constraint_rows = 0;
  std::string status = "ok";
};

/// One row per resolution; solver failures are recorded and the sweep goes on.
std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& config);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

struct ProbeRow {
  int resolution = 0;
  int overlap_vertices = 0;
  double linear_fit_residual = 0.0;      // max residual of the affine fit / solution range
  std::optional<double> derivative_jump;  // 1D only: max first-derivative mismatch at overlap ends
  std::string status = "ok";
};

std::vector<ProbeRow> locking_probe(const ExperimentConfig& config);
std::string probe_csv(const std::vector<ProbeRow>& rows);

/// Affine least-squares fit over the vertices of each mesh that lie inside
/// another mesh. Throws InvalidArgument when there is no overlap.
double overlap_fit_residual(const DeconstructedDomain& domain, const Eigen::VectorXd& u, int* count = nullptr);

/// 1D: max over boundary vertices of one segment lying inside another of
/// |slope of the owner's boundary element - slope of the containing element
/// of the other segment|.
double overlap_derivative_jump(const DeconstructedDomain& domain, const Eigen::VectorXd& u);

/// Eigenvalues at the finest resolution; `halfdisk` also lists the single-disk values.
std::string modes_csv(const ExperimentConfig& config);

/// Constraint rows at the finest resolution.
std::string constraints_csv(const ExperimentConfig& config);

/// Solution at the finest resolution: subdomain,vertex,x[,y[,z]],u.
std::string solution_csv(const ExperimentConfig& config);
std::string solution_csv(const DeconstructedDomain& domain, const Eigen::VectorXd& u);

/// Error of the penalty formulation min 1/2 u^T L u - b^T u + omega |C u|^2
/// for each configured omega, at the finest resolution: omega,error_linf.
std::string penalty_csv(const ExperimentConfig& config);

}  // namespace decon
