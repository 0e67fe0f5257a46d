#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "decon/error.hpp"
#include "decon/harness.hpp"

using namespace decon;

namespace {

ExperimentConfig config(const std::string& text) { return parse_config(text); }

std::string first_line(const std::string& csv) { return csv.substr(0, csv.find('\n')); }

int line_count(const std::string& csv) { return static_cast<int>(std::count(csv.begin(), csv.end(), '\n')); }

}  // namespace

TEST(MakeScenario, Seg1dPoisson) {
  const auto sc = make_scenario(config("scenario = seg1d_poisson\n"), 7);
  ASSERT_EQ(sc.domain.size(), 2);
  EXPECT_EQ(sc.domain[0].vertex_count(), 7);
  EXPECT_DOUBLE_EQ(sc.domain[0].vertices()(6, 0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(sc.domain[1].vertices()(0, 0), 1.0 / 3.0);
  EXPECT_EQ(sc.domain.fixed_values().size(), 2u);
  EXPECT_EQ(sc.pde, Pde::poisson);
  Point p(1);
  p << 0.5;
  EXPECT_DOUBLE_EQ(sc.reference(p), 0.125);
}

TEST(MakeScenario, Seg1dBilaplace) {
  const auto sc = make_scenario(config("scenario = seg1d_bilaplace\n"), 9);
  EXPECT_EQ(sc.pde, Pde::bilaplace);
  EXPECT_EQ(sc.dirichlet_z.size(), 2u);
  Point p(1);
  p << 0.5;
  EXPECT_NEAR(sc.reference(p), (0.0625 - 0.25 + 0.5) / 24.0, 1e-15);
}

TEST(MakeScenario, AnnulusPoissonReference) {
  const auto sc = make_scenario(config("scenario = annulus2d_poisson\n"), 2);
  Point p(2);
  p << 1.5, 0.0;
  // Laplace u = 1 radially: (r^2 - 1)/4 - 3/(4 ln 2) ln r.
  const double want = (1.5 * 1.5 - 1.0) / 4.0 - 3.0 / (4.0 * std::numbers::ln2) * std::log(1.5);
  EXPECT_NEAR(sc.reference(p), want, 1e-14);
  EXPECT_NEAR(want, -0.126222, 1e-6);
  for (const auto& dv : sc.domain.dirichlet()) EXPECT_NEAR(dv.value, 0.0, 1e-14);
}

TEST(MakeScenario, AnnulusLaplaceRejectsSource) {
  EXPECT_THROW(make_scenario(config("scenario = annulus2d_laplace\nsource = 1\n"), 2), ConfigError);
}

TEST(AnnulusPair, HalfCellShift) {
  const auto pair = annulus_pair(4);
  ASSERT_EQ(pair.size(), 2u);
  const auto b0 = boundary_vertices(pair[0]);
  const auto b1 = boundary_vertices(pair[1]);
  for (const auto* m : {&pair[0], &pair[1]})
    for (int v = 0; v < m->vertex_count(); ++v) {
      const double r = m->vertex(v).norm();
      EXPECT_GE(r, 1.0 - 1e-12);
      EXPECT_LE(r, 2.0 + 1e-12);
    }
  // No interior vertex is shared between the two meshes.
  const AabbTree tree(pair[1]);
  for (int v = 0; v < pair[0].vertex_count(); ++v) {
    const auto loc = locate_point(tree, pair[0].vertex(v));
    if (loc) {
      EXPECT_LT(loc->coords.maxCoeff(), 1.0 - 1e-6);
    }
  }
}

TEST(MakeScenario, DuplicatedMesh) {
  const auto sc = make_scenario(config("scenario = duplicated_mesh\n"), 5);
  ASSERT_EQ(sc.domain.size(), 2);
  EXPECT_EQ(sc.domain[0], sc.domain[1]);
}

TEST(MakeScenario, CustomBoxes) {
  const std::string dir = DECON_TEST_DATA_DIR;
  const auto sc = make_scenario(config("scenario = custom\nmeshes = " + dir + "/box_a.dmesh " + dir +
                                       "/box_b.dmesh\ndirichlet_gradient = 1 0 0\n"),
                                1);
  EXPECT_EQ(sc.domain.dim(), 3);
  EXPECT_FALSE(sc.domain.dirichlet().empty());
  for (const auto& dv : sc.domain.dirichlet())
    EXPECT_DOUBLE_EQ(dv.value, sc.domain[dv.subdomain].vertices()(dv.vertex, 0));
}

TEST(MakeScenario, CustomMissingMesh) {
  EXPECT_THROW(make_scenario(config("scenario = custom\nmeshes = /nonexistent.dmesh\n"), 1), Error);
}

TEST(RunConvergence, CsvShape) {
  const auto cfg = config("scenario = seg1d_poisson\nresolutions = 10 20 40\n");
  const auto rows = run_convergence(cfg);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[0].observed_order);
  EXPECT_TRUE(rows[1].observed_order);
  for (const auto& r : rows) {
    EXPECT_EQ(r.status, "ok");
    EXPECT_EQ(r.constraint_rows, 2);
  }
  EXPECT_GT(rows[0].h, rows[1].h);
  const std::string csv = convergence_csv(rows);
  EXPECT_EQ(first_line(csv), "h,n_total,error_linf,observed_order,constraint_rows,solve_status");
  EXPECT_EQ(line_count(csv), 4);
}

TEST(RunConvergence, ObservedOrderUsesMeshSizes) {
  const auto rows = run_convergence(config("scenario = seg1d_poisson\nresolutions = 11 21 41\n"));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double want = std::log(rows[i - 1].error_linf / rows[i].error_linf) / std::log(rows[i - 1].h / rows[i].h);
    EXPECT_NEAR(*rows[i].observed_order, want, 1e-12);
  }
}

TEST(RunConvergence, NeedsReference) {
  const std::string dir = DECON_TEST_DATA_DIR;
  const auto cfg = config("scenario = custom\nmeshes = " + dir + "/box_a.dmesh " + dir + "/box_b.dmesh\n");
  EXPECT_THROW(run_convergence(cfg), ConfigError);
}

TEST(RunConvergence, Reproducible) {
  const auto cfg = config("scenario = annulus2d_poisson\nquadrature = monte_carlo\nquadrature_samples = 5\n"
                          "quadrature_seed = 3\nresolutions = 2 3\n");
  EXPECT_EQ(convergence_csv(run_convergence(cfg)), convergence_csv(run_convergence(cfg)));
}

TEST(LockingProbe, AllVerticesLocksBoundaryOnlyDoesNot) {
  const auto locked = locking_probe(config("coupling = all_vertices\nresolutions = 20 80\n"));
  for (const auto& r : locked) EXPECT_LE(r.linear_fit_residual, 1e-8);
  const auto free = locking_probe(config("coupling = boundary_only\nresolutions = 20 80\n"));
  EXPECT_GE(free.back().linear_fit_residual, 1e-3);
  EXPECT_GT(free.back().overlap_vertices, 0);
  const std::string csv = probe_csv(free);
  EXPECT_EQ(first_line(csv), "resolution,overlap_vertices,linear_fit_residual,derivative_jump,solve_status");
}

TEST(LockingProbe, NoOverlapThrows) {
  const DeconstructedDomain dom({generate_segment(0, 1, 4), generate_segment(2, 3, 4)});
  EXPECT_THROW(overlap_fit_residual(dom, Eigen::VectorXd::Zero(8)), InvalidArgument);
}

TEST(OverlapFit, AffineDataHasZeroResidual) {
  const DeconstructedDomain dom({generate_disk(Eigen::Vector2d(0, 0), 1.0, 3, 18),
                                 generate_disk(Eigen::Vector2d(0.8, 0), 1.0, 3, 18, 0.1)});
  Eigen::VectorXd u(dom.total_vertices());
  for (int k = 0; k < 2; ++k)
    for (int v = 0; v < dom[k].vertex_count(); ++v)
      u(dom.global_index(k, v)) = 2.0 + dom[k].vertices()(v, 0) - 3.0 * dom[k].vertices()(v, 1);
  int count = 0;
  EXPECT_LE(overlap_fit_residual(dom, u, &count), 1e-12);
  EXPECT_GT(count, 0);
}

TEST(OutputCsv, SolutionColumns) {
  const auto cfg = config("scenario = annulus2d_laplace\nresolutions = 1 2\n");
  const std::string csv = solution_csv(cfg);
  EXPECT_EQ(first_line(csv), "subdomain,vertex,x,y,u");
  const auto sc = make_scenario(cfg, 2);
  EXPECT_EQ(line_count(csv), 1 + sc.domain.total_vertices());
}

TEST(OutputCsv, HeatStep) {
  const std::string csv = solution_csv(config("scenario = duplicated_mesh\nresolutions = 5 9\ndt = 0.01\n"));
  EXPECT_EQ(first_line(csv), "subdomain,vertex,x,u");
  EXPECT_EQ(line_count(csv), 1 + 18);
}

TEST(OutputCsv, ConstraintsAndModesAndPenalty) {
  const auto cfg = config("scenario = seg1d_poisson\nresolutions = 5 9\nmodes = 3\npenalty_weights = 0.1 10\n");
  const std::string cons = constraints_csv(cfg);
  EXPECT_EQ(line_count(cons), 3);
  const std::string modes = modes_csv(cfg);
  EXPECT_EQ(first_line(modes), "mode,eigenvalue,reference");
  EXPECT_EQ(line_count(modes), 4);
  const std::string pen = penalty_csv(cfg);
  EXPECT_EQ(first_line(pen), "omega,error_linf");
  EXPECT_EQ(line_count(pen), 3);
}

TEST(OutputCsv, PenaltyErrorShrinksWithWeight) {
  const auto cfg = config("scenario = seg1d_poisson\nresolutions = 10 40\npenalty_weights = 1e-4 1 1e4\n");
  std::istringstream in(penalty_csv(cfg));
  std::string line;
  std::getline(in, line);
  std::vector<double> errs;
  while (std::getline(in, line)) errs.push_back(std::stod(line.substr(line.find(',') + 1)));
  ASSERT_EQ(errs.size(), 3u);
  EXPECT_GT(errs[0], errs[1]);
  EXPECT_GT(errs[1], errs[2]);
  const auto exact = run_convergence(config("scenario = seg1d_poisson\nresolutions = 10 40\n"));
  EXPECT_NEAR(errs[2], exact.back().error_linf, 1e-3);
}

TEST(MeshSize, MaxCircumradius) {
  const DeconstructedDomain dom({generate_segment(0, 1, 5), generate_segment(0, 1, 3)});
  EXPECT_DOUBLE_EQ(mesh_size(dom), 0.25);
}
