#include <algorithm>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "decon/coupling.hpp"
#include "decon/error.hpp"
#include "decon/harness.hpp"

using namespace decon;

namespace {

using Key = std::pair<int, int>;

DeconstructedDomain two_segments(int n) {
  return DeconstructedDomain({generate_segment(0.0, 2.0 / 3.0, n), generate_segment(1.0 / 3.0, 1.0, n)});
}

DeconstructedDomain three_segments() {
  return DeconstructedDomain(
      {generate_segment(0.0, 0.6, 7), generate_segment(0.2, 0.8, 9), generate_segment(0.4, 1.0, 11)});
}

DeconstructedDomain three_disks() {
  return DeconstructedDomain({generate_disk(Eigen::Vector2d(0.0, 0.0), 1.0, 4, 24),
                              generate_disk(Eigen::Vector2d(0.8, 0.0), 1.0, 4, 24, 0.1),
                              generate_disk(Eigen::Vector2d(0.4, 0.7), 1.0, 4, 24, 0.2)});
}

ConstraintSet rows_for(const DeconstructedDomain& dom, CouplingMode mode) {
  const auto trees = build_trees(dom);
  return build_constraints(dom, trees, mode);
}

std::set<Key> targets(const ConstraintSet& cs) {
  std::set<Key> out;
  for (const auto& r : cs.rows) out.emplace(r.target_subdomain, r.target_vertex);
  return out;
}

// Thinning oracle: recompute every score from scratch and pick the kept row per target.
std::vector<ConstraintRow> thin_oracle(const ConstraintSet& cs, const DeconstructedDomain& dom) {
  auto involved = [&](const ConstraintRow& r) {
    std::vector<Key> keys{{r.target_subdomain, r.target_vertex}};
    for (int c = 0; c <= dom.dim(); ++c)
      keys.emplace_back(r.anchor_subdomain, dom[r.anchor_subdomain].simplices()(r.anchor_simplex, c));
    return keys;
  };
  std::map<Key, int> score;
  for (const auto& r : cs.rows)
    for (const auto& k : involved(r)) score[k] += 1;
  std::map<Key, int> kept;
  std::vector<double> rs;
  for (const auto& r : cs.rows) {
    const auto keys = involved(r);
    double s = 0.0;
    for (const auto& k : keys) s += score[k];
    rs.push_back(s / keys.size());
  }
  for (int i = 0; i < cs.size(); ++i) {
    const Key t{cs.rows[i].target_subdomain, cs.rows[i].target_vertex};
    auto it = kept.find(t);
    if (it == kept.end()) {
      kept[t] = i;
      continue;
    }
    const int j = it->second;
    const auto& a = cs.rows[i];
    const auto& b = cs.rows[j];
    if (std::tie(rs[i], a.anchor_subdomain, a.anchor_simplex) < std::tie(rs[j], b.anchor_subdomain, b.anchor_simplex))
      it->second = i;
  }
  std::vector<int> idx;
  for (const auto& [t, i] : kept) idx.push_back(i);
  std::sort(idx.begin(), idx.end());
  std::vector<ConstraintRow> out;
  for (int i : idx) out.push_back(cs.rows[i]);
  return out;
}

}  // namespace

TEST(CouplingMode, NamesRoundTrip) {
  for (auto m : {CouplingMode::all_vertices, CouplingMode::boundary_only, CouplingMode::boundary_only_thinned})
    EXPECT_EQ(parse_coupling_mode(to_string(m)), m);
  EXPECT_THROW(parse_coupling_mode("everything"), InvalidArgument);
}

TEST(AllVertexConstraints, DisjointIsEmpty) {
  const DeconstructedDomain dom({generate_segment(0, 1, 5), generate_segment(2, 3, 5)});
  EXPECT_EQ(rows_for(dom, CouplingMode::all_vertices).size(), 0);
  EXPECT_EQ(rows_for(dom, CouplingMode::boundary_only).size(), 0);
}

TEST(AllVertexConstraints, TwoSegmentsCount) {
  const auto dom = two_segments(5);
  const auto cs = rows_for(dom, CouplingMode::all_vertices);
  ASSERT_EQ(cs.size(), 6);
  // Vertices {0, 1/6, 1/3, 1/2, 2/3} and {1/3, 1/2, 2/3, 5/6, 1}: closed overlap [1/3, 2/3].
  const std::set<Key> want{{0, 2}, {0, 3}, {0, 4}, {1, 0}, {1, 1}, {1, 2}};
  EXPECT_EQ(targets(cs), want);
  for (const auto& r : cs.rows) {
    EXPECT_NE(r.target_subdomain, r.anchor_subdomain);
    EXPECT_NEAR(r.coefficients.sum(), 1.0, 1e-12);
  }
}

TEST(AllVertexConstraints, MatchingMeshesGiveIndicators) {
  const auto m = generate_annulus(1.0, 2.0, 2, 12, 0.0);
  const DeconstructedDomain dom({m, m});
  const auto cs = rows_for(dom, CouplingMode::all_vertices);
  EXPECT_EQ(cs.size(), 2 * m.vertex_count());
  for (const auto& r : cs.rows) {
    const int hot = static_cast<int>((r.coefficients.array() > 0.5).count());
    EXPECT_EQ(hot, 1);
    EXPECT_NEAR(r.coefficients.maxCoeff(), 1.0, 1e-12);
    EXPECT_NEAR(r.coefficients.cwiseAbs().minCoeff(), 0.0, 1e-12);
  }
}

TEST(AllVertexConstraints, PinnedTargetsSkipped) {
  DeconstructedDomain dom({generate_segment(0.0, 2.0 / 3.0, 5), generate_segment(1.0 / 3.0, 1.0, 5)},
                          {{0, 4, 0.0}});
  const auto cs = rows_for(dom, CouplingMode::all_vertices);
  EXPECT_EQ(cs.size(), 5);
  EXPECT_FALSE(targets(cs).count({0, 4}));
  // The pinned vertex may still serve as an anchor corner.
  bool anchored = false;
  const auto& T = dom[0].simplices();
  for (const auto& r : cs.rows)
    if (r.anchor_subdomain == 0 && (T(r.anchor_simplex, 0) == 4 || T(r.anchor_simplex, 1) == 4)) anchored = true;
  EXPECT_TRUE(anchored);
}

TEST(BoundaryOnlyConstraints, TwoSegmentsTwoRows) {
  for (int n : {3, 5, 20, 161}) {
    const auto dom = two_segments(n);
    const auto cs = rows_for(dom, CouplingMode::boundary_only);
    ASSERT_EQ(cs.size(), 2) << n;
    EXPECT_EQ(cs.rows[0].target_subdomain, 0);
    EXPECT_EQ(cs.rows[0].target_vertex, n - 1);
    EXPECT_EQ(cs.rows[0].anchor_subdomain, 1);
    EXPECT_EQ(cs.rows[1].target_subdomain, 1);
    EXPECT_EQ(cs.rows[1].target_vertex, 0);
    EXPECT_EQ(cs.rows[1].anchor_subdomain, 0);
  }
}

TEST(BoundaryOnlyConstraints, SubsetOfAllVertices) {
  for (const auto& dom : {two_segments(9), three_segments(), three_disks(), DeconstructedDomain(annulus_pair(2))}) {
    const auto all = rows_for(dom, CouplingMode::all_vertices);
    const auto bnd = rows_for(dom, CouplingMode::boundary_only);
    for (const auto& r : bnd.rows)
      EXPECT_NE(std::find(all.rows.begin(), all.rows.end(), r), all.rows.end());
  }
}

TEST(BoundaryOnlyConstraints, AnnuliTargetsMatchOracle) {
  const double pi = std::numbers::pi;
  const DeconstructedDomain dom({generate_annulus(1, 2, 4, 32, 0.0), generate_annulus(1, 2, 4, 32, pi / 32)});
  const auto cs = rows_for(dom, CouplingMode::boundary_only);
  std::set<Key> want;
  for (int a = 0; a < 2; ++a)
    for (int v : boundary_vertices(dom[a]))
      if (locate_point_brute_force(dom[1 - a], dom[a].vertex(v))) want.emplace(a, v);
  EXPECT_EQ(targets(cs), want);
  EXPECT_FALSE(want.empty());
  for (const auto& [a, v] : want) {
    const double r = dom[a].vertex(v).norm();
    EXPECT_TRUE(std::abs(r - 1.0) < 1e-12 || std::abs(r - 2.0) < 1e-12);
  }
}

TEST(ThinConstraints, OneRowPerTargetIsIdentity) {
  const auto dom = two_segments(7);
  const auto trees = build_trees(dom);
  const auto cs = boundary_only_constraints(dom, trees);
  const auto thin = thin_constraints(cs, dom);
  EXPECT_EQ(thin.rows, cs.rows);
  EXPECT_EQ(thin.mode, CouplingMode::boundary_only_thinned);
}

TEST(ThinConstraints, RequiresBoundaryOnlyInput) {
  const auto dom = two_segments(5);
  const auto trees = build_trees(dom);
  EXPECT_THROW(thin_constraints(all_vertex_constraints(dom, trees), dom), InvalidArgument);
}

TEST(ThinConstraints, ThreeSegmentsHandScored) {
  // [0,0.6] h=0.1, [0.2,0.8] h=0.075, [0.4,1.0] h=0.06.
  const auto dom = three_segments();
  const auto trees = build_trees(dom);
  const auto cs = boundary_only_constraints(dom, trees);
  // Targets: 0.6 of mesh 0 (in 1 and 2), 0.2 of mesh 1 (in 0), 0.8 of mesh 1 (in 2), 0.4 of mesh 2 (in 0 and 1).
  ASSERT_EQ(cs.size(), 6);
  const auto thin = thin_constraints(cs, dom);
  ASSERT_EQ(thin.size(), 4);
  EXPECT_EQ(targets(thin), targets(cs));
  EXPECT_EQ(thin.rows, thin_oracle(cs, dom));

  // Every competing pair ties at 4/3 (all corners are used once, the target twice),
  // so the lower anchor subdomain wins.
  for (const auto& r : thin.rows) {
    if (r.target_subdomain == 0) {
      EXPECT_EQ(r.anchor_subdomain, 1);
    }
    if (r.target_subdomain == 2) {
      EXPECT_EQ(r.anchor_subdomain, 0);
    }
  }
}

TEST(ThinConstraints, PrefersLessSaturatedAnchor) {
  // Target (0,0) has one row into mesh 1 and one into mesh 2. Mesh 1's anchor element takes
  // part in 5 other rows, mesh 2's in 2. Vertex scores: (0,0) = 2, mesh-1 corners 6 each,
  // mesh-2 corners 3 each. Row scores 14/3 and 8/3: the mesh-2 row survives.
  const DeconstructedDomain dom({generate_segment(0, 1, 10), generate_segment(0, 1, 3), generate_segment(0, 1, 3)});
  ConstraintSet cs;
  cs.mode = CouplingMode::boundary_only;
  const Eigen::Vector2d half(0.5, 0.5);
  cs.rows.push_back({0, 0, 1, 0, half});
  cs.rows.push_back({0, 0, 2, 0, half});
  for (int v = 1; v <= 5; ++v) cs.rows.push_back({0, v, 1, 0, half});
  for (int v = 6; v <= 7; ++v) cs.rows.push_back({0, v, 2, 0, half});
  const auto thin = thin_constraints(cs, dom);
  ASSERT_EQ(thin.size(), 8);
  EXPECT_EQ(thin.rows.front(), cs.rows[1]);
  EXPECT_EQ(std::vector<ConstraintRow>(thin.rows.begin() + 1, thin.rows.end()),
            std::vector<ConstraintRow>(cs.rows.begin() + 2, cs.rows.end()));
  EXPECT_EQ(thin.rows, thin_oracle(cs, dom));
}

TEST(ThinConstraints, ThreeDisksStructure) {
  const auto dom = three_disks();
  const auto trees = build_trees(dom);
  const auto cs = boundary_only_constraints(dom, trees);
  const auto thin = thin_constraints(cs, dom);
  EXPECT_EQ(static_cast<std::size_t>(thin.size()), targets(cs).size());
  EXPECT_LT(thin.size(), cs.size());
  EXPECT_EQ(targets(thin), targets(cs));
  for (const auto& r : thin.rows) EXPECT_NE(std::find(cs.rows.begin(), cs.rows.end(), r), cs.rows.end());
  EXPECT_EQ(thin.rows, thin_oracle(cs, dom));
}

TEST(ConstraintMatrix, BarycentricRow) {
  const DeconstructedDomain dom({generate_segment(0.0, 2.0 / 3.0, 3), generate_segment(0.5, 1.0, 6)});
  const auto cs = rows_for(dom, CouplingMode::boundary_only);
  ASSERT_GE(cs.size(), 1);
  const auto& r = cs.rows[0];
  ASSERT_EQ(r.target_subdomain, 0);
  ASSERT_EQ(r.anchor_simplex, 1);  // [0.6, 0.7]
  const Eigen::MatrixXd C = Eigen::MatrixXd(constraint_matrix(cs, dom));
  EXPECT_DOUBLE_EQ(C(0, 2), 1.0);
  EXPECT_NEAR(C(0, 3 + 1), -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(C(0, 3 + 2), -2.0 / 3.0, 1e-12);
}

TEST(ConstraintMatrix, ConstantAndLinearPrecision) {
  for (const auto& dom : {two_segments(11), three_disks(), DeconstructedDomain(annulus_pair(4))}) {
    for (auto mode : {CouplingMode::all_vertices, CouplingMode::boundary_only}) {
      const auto cs = rows_for(dom, mode);
      const SparseMatrix C = constraint_matrix(cs, dom);
      ASSERT_EQ(C.cols(), dom.total_vertices());
      if (cs.size() == 0) continue;
      EXPECT_EQ((C * Eigen::VectorXd::Ones(C.cols())).cwiseAbs().maxCoeff(), 0.0);
      for (int c = 0; c < dom.dim(); ++c) {
        Eigen::VectorXd x(dom.total_vertices());
        for (int k = 0; k < dom.size(); ++k) x.segment(dom.offsets()[k], dom[k].vertex_count()) = dom[k].vertices().col(c);
        EXPECT_LE((C * x).cwiseAbs().maxCoeff(), 1e-10);
      }
    }
  }
}

TEST(ConstraintMatrix, Deterministic) {
  const auto dom = three_disks();
  const SparseMatrix a = constraint_matrix(rows_for(dom, CouplingMode::boundary_only_thinned), dom);
  const SparseMatrix b = constraint_matrix(rows_for(dom, CouplingMode::boundary_only_thinned), dom);
  EXPECT_EQ(Eigen::MatrixXd(a), Eigen::MatrixXd(b));
}

TEST(ConstraintsCsv, HeaderAndPrecision) {
  const auto dom = two_segments(4);
  const auto cs = rows_for(dom, CouplingMode::boundary_only);
  const std::string csv = constraints_to_csv(cs, 1);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "target_subdomain,target_vertex,anchor_subdomain,anchor_simplex,c0,c1");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  // 17 significant digits round-trip the coefficients.
  const auto line = csv.substr(csv.find('\n') + 1);
  const auto c0 = std::stod(line.substr(line.find(',', line.find(',', line.find(',', line.find(',') + 1) + 1) + 1) + 1));
  EXPECT_EQ(c0, cs.rows[0].coefficients(0));
}
