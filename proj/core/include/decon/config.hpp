#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "decon/coupling.hpp"
#include "decon/fem.hpp"
#include "decon/solver.hpp"

namespace decon {

/// Declarative experiment description, read from `key = value` lines.
///
///   scenario            seg1d_poisson | seg1d_bilaplace | annulus2d_laplace |
///                       annulus2d_poisson | duplicated_mesh | halfdisk | custom
///   coupling            all_vertices | boundary_only | boundary_only_thinned
///   bilaplace_coupling  value_only | low_order | high_order
///   quadrature          corner_average | barycenter | symmetric_fixed_order | monte_carlo
///   quadrature_points   1 | 4 | 10           (symmetric_fixed_order)
///   quadrature_samples  per element           (monte_carlo)
///   quadrature_seed     unsigned integer      (monte_carlo)
///   resolutions         strictly increasing list, at least two entries
///   source              f in -Laplace(u) = f (bi-Laplace: Laplace^2 u = f)
///   dt                  > 0 turns `solve` into one implicit heat step
///   penalty_weights     list of omega for the penalty sweep
///   modes               number of eigenpairs
///   meshes              DMESH paths (custom)
///   dirichlet_value     custom: u = value + gradient . x on free boundary vertices
///   dirichlet_gradient  list of d numbers
///   output              CSV path; empty writes to stdout
///
/// Lists are comma or whitespace separated. '#' starts a comment.
struct ExperimentConfig {
  std::string scenario = "seg1d_poisson";
  CouplingMode coupling = CouplingMode::boundary_only;
  BilaplaceCoupling bilaplace_coupling = BilaplaceCoupling::high_order;
  QuadratureSpec quadrature;
  std::vector<int> resolutions{20, 40, 80, 160};
  double source = 1.0;
  bool source_set = false;
  double dt = 0.0;
  std::vector<double> penalty_weights;
  int modes = 10;
  std::vector<std::string> meshes;
  double dirichlet_value = 0.0;
  std::vector<double> dirichlet_gradient;
  std::string output;
};

/// Throws ConfigError naming the offending line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig read_config_file(const std::string& path);

}  // namespace decon
