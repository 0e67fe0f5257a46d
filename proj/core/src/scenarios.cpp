#include <cmath>
#include <numbers>

#include "decon/error.hpp"
#include "decon/geometry.hpp"
#include "decon/harness.hpp"

namespace decon {
namespace {

constexpr double kHalfDiskRadius = 1.0;
constexpr double kHalfDiskOffset = 0.2;

double source_or(const ExperimentConfig& cfg, double fallback) { return cfg.source_set ? cfg.source : fallback; }

// Boundary vertices of each mesh that no other mesh contains get u = value(x).
std::vector<DirichletValue> outer_boundary_data(const std::vector<SimplicialMesh>& meshes,
                                                const std::function<double(const Point&)>& value) {
  std::vector<AabbTree> trees;
  for (const auto& m : meshes) trees.emplace_back(m);
  std::vector<DirichletValue> out;
  for (int a = 0; a < static_cast<int>(meshes.size()); ++a)
    for (int v : boundary_vertices(meshes[a])) {
      const Point p = meshes[a].vertex(v);
      bool covered = false;
      for (int b = 0; b < static_cast<int>(meshes.size()) && !covered; ++b)
        covered = b != a && locate_point(trees[b], p).has_value();
      if (!covered) out.push_back({a, v, value(p)});
    }
  return out;
}

int scaled_boundary_count(int resolution, double perimeter) {
  return std::max(3, static_cast<int>(std::lround(6.0 * resolution * perimeter / (2.0 * std::numbers::pi))));
}

std::vector<SimplicialMesh> halfdisk_meshes(int resolution) {
  const double beta = std::acos(-kHalfDiskOffset / kHalfDiskRadius);
  const double perimeter = 2.0 * kHalfDiskRadius * (beta + std::sin(beta));
  const int nb = scaled_boundary_count(resolution, perimeter);
  return {generate_cut_disk(kHalfDiskRadius, kHalfDiskOffset, 1, resolution, nb),
          generate_cut_disk(kHalfDiskRadius, kHalfDiskOffset, -1, resolution, nb)};
}

Scenario seg1d(const ExperimentConfig& cfg, int n, Pde pde) {
  std::vector<SimplicialMesh> meshes{generate_segment(0.0, 2.0 / 3.0, n), generate_segment(1.0 / 3.0, 1.0, n)};
  std::vector<DirichletValue> pins{{0, 0, 0.0}, {1, n - 1, 0.0}};
  const double f = source_or(cfg, 1.0);
  Scenario sc{DeconstructedDomain(std::move(meshes), pins), pde, f, {}, {}};
  if (pde == Pde::poisson) {
    sc.reference = [f](const Point& p) { return f * p(0) * (1.0 - p(0)) / 2.0; };
  } else {
    sc.dirichlet_z = pins;
    sc.reference = [f](const Point& p) {
      const double s = p(0);
      return f * (s * s * s * s - 2.0 * s * s * s + s) / 24.0;
    };
  }
  return sc;
}

Scenario annulus(const ExperimentConfig& cfg, int n_r, bool laplace) {
  std::vector<SimplicialMesh> meshes = annulus_pair(n_r);
  std::function<double(const Point&)> exact;
  double f = 0.0;
  if (laplace) {
    if (cfg.source_set && cfg.source != 0.0) throw ConfigError("annulus2d_laplace has no source term");
    exact = [](const Point& p) { return std::log(p.norm()) / std::numbers::ln2; };
  } else {
    // -Laplace u = f with u = 0 on both circles.
    f = source_or(cfg, -1.0);
    exact = [f](const Point& p) {
      const double r = p.norm();
      return -f * ((r * r - 1.0) / 4.0 - 3.0 / (4.0 * std::numbers::ln2) * std::log(r));
    };
  }
  std::vector<DirichletValue> pins;
  for (int k = 0; k < 2; ++k)
    for (int v : boundary_vertices(meshes[k])) pins.push_back({k, v, exact(meshes[k].vertex(v))});
  return {DeconstructedDomain(std::move(meshes), std::move(pins)), Pde::poisson, f, {}, exact};
}

Scenario duplicated(const ExperimentConfig& cfg, int n) {
  const SimplicialMesh seg = generate_segment(0.0, 1.0, n);
  const double f = source_or(cfg, 1.0);
  // Only the first copy is pinned; the second copy's ends are coupled to it.
  std::vector<DirichletValue> pins{{0, 0, 0.0}, {0, n - 1, 0.0}};
  return {DeconstructedDomain({seg, seg}, pins), Pde::poisson, f, {},
          [f](const Point& p) { return f * p(0) * (1.0 - p(0)) / 2.0; }};
}

std::function<double(const Point&)> affine_data(const ExperimentConfig& cfg, int dim) {
  if (!cfg.dirichlet_gradient.empty() && static_cast<int>(cfg.dirichlet_gradient.size()) != dim)
    throw ConfigError("dirichlet_gradient needs " + std::to_string(dim) + " entries");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < cfg.dirichlet_gradient.size(); ++i) g(i) = cfg.dirichlet_gradient[i];
  const double c = cfg.dirichlet_value;
  return [g, c](const Point& p) { return c + g.dot(p); };
}

}  // namespace

std::vector<SimplicialMesh> annulus_pair(int n_r) {
  if (n_r < 1) throw InvalidArgument("annulus_pair needs at least one ring of elements");
  const int n_t = static_cast<int>(std::lround(2.0 * std::numbers::pi * n_r / std::numbers::ln2));
  std::vector<double> first(n_r + 1), second(n_r + 2);
  for (int i = 0; i <= n_r; ++i) first[i] = std::exp2(double(i) / n_r);
  second.front() = 1.0;
  for (int i = 1; i <= n_r; ++i) second[i] = std::exp2((i - 0.5) / n_r);
  second.back() = 2.0;
  return {generate_annulus(first, n_t, 0.0), generate_annulus(second, n_t, std::numbers::pi / n_t)};
}

DeconstructedDomain halfdisk_reference(int resolution) {
  const int nb = scaled_boundary_count(resolution, 2.0 * std::numbers::pi * kHalfDiskRadius);
  return DeconstructedDomain({generate_disk(Eigen::Vector2d::Zero(), kHalfDiskRadius, resolution, nb)});
}

Scenario make_scenario(const ExperimentConfig& cfg, int resolution) {
  if (resolution <= 0) throw ConfigError("resolution must be positive");
  const std::string& s = cfg.scenario;
  if (s == "seg1d_poisson") return seg1d(cfg, resolution, Pde::poisson);
  if (s == "seg1d_bilaplace") return seg1d(cfg, resolution, Pde::bilaplace);
  if (s == "annulus2d_laplace") return annulus(cfg, resolution, true);
  if (s == "annulus2d_poisson") return annulus(cfg, resolution, false);
  if (s == "duplicated_mesh") return duplicated(cfg, resolution);
  if (s == "halfdisk" || s == "custom") {
    std::vector<SimplicialMesh> meshes;
    if (s == "halfdisk") {
      meshes = halfdisk_meshes(resolution);
    } else {
      for (const auto& path : cfg.meshes) meshes.push_back(read_mesh_file(path));
      for (const auto& m : meshes)
        if (m.dim() != meshes.front().dim()) throw ConfigError("custom meshes differ in dimension");
    }
    auto pins = outer_boundary_data(meshes, affine_data(cfg, meshes.front().dim()));
    return {DeconstructedDomain(std::move(meshes), std::move(pins)), Pde::poisson,
            source_or(cfg, s == "halfdisk" ? 1.0 : 0.0), {}, {}};
  }
  throw ConfigError("unknown scenario '" + s + "'");
}

}  // namespace decon
