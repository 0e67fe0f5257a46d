#include "decon/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <tuple>

#include "decon/error.hpp"

namespace decon {
namespace {

// Coefficients on a 2^-44 grid: partial sums are exact, so each row annihilates constants exactly.
Eigen::VectorXd snap_to_grid(Eigen::VectorXd c) {
  constexpr int kBits = 44;
  Eigen::Index big = 0;
  c.cwiseAbs().maxCoeff(&big);
  double rest = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (j == big) continue;
    c(j) = std::ldexp(std::nearbyint(std::ldexp(c(j), kBits)), -kBits);
    rest += c(j);
  }
  c(big) = 1.0 - rest;
  return c;
}

template <typename VertexFilter>
ConstraintSet collect(const DeconstructedDomain& domain, std::span<const AabbTree> trees,
                      CouplingMode mode, VertexFilter&& targets_of) {
  if (static_cast<int>(trees.size()) != domain.size())
    throw InvalidArgument("one tree per subdomain required");
  ConstraintSet cs;
  cs.mode = mode;
  for (int a = 0; a < domain.size(); ++a) {
    const SimplicialMesh& mesh = domain[a];
    for (int v : targets_of(mesh)) {
      if (domain.is_pinned(a, v)) continue;
      const Point p = mesh.vertex(v);
      for (int b = 0; b < domain.size(); ++b) {
        if (b == a) continue;
        if (auto loc = locate_point(trees[b], p))
          cs.rows.push_back({a, v, b, loc->simplex, snap_to_grid(std::move(loc->coords))});
      }
    }
  }
  return cs;
}

std::vector<int> all_of(const SimplicialMesh& mesh) {
  std::vector<int> v(mesh.vertex_count());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

std::string_view to_string(CouplingMode mode) {
  switch (mode) {
    case CouplingMode::all_vertices: return "all_vertices";
    case CouplingMode::boundary_only: return "boundary_only";
    case CouplingMode::boundary_only_thinned: return "boundary_only_thinned";
  }
  return "unknown";
}

CouplingMode parse_coupling_mode(std::string_view name) {
  if (name == "all_vertices") return CouplingMode::all_vertices;
  if (name == "boundary_only") return CouplingMode::boundary_only;
  if (name == "boundary_only_thinned") return CouplingMode::boundary_only_thinned;
  throw InvalidArgument("unknown coupling mode '" + std::string(name) + "'");
}

ConstraintSet all_vertex_constraints(const DeconstructedDomain& domain, std::span<const AabbTree> trees) {
  return collect(domain, trees, CouplingMode::all_vertices, all_of);
}

ConstraintSet boundary_only_constraints(const DeconstructedDomain& domain, std::span<const AabbTree> trees) {
  return collect(domain, trees, CouplingMode::boundary_only,
                 [](const SimplicialMesh& m) { return boundary_vertices(m); });
}

ConstraintSet thin_constraints(const ConstraintSet& cs, const DeconstructedDomain& domain) {
  if (cs.mode != CouplingMode::boundary_only)
    throw InvalidArgument("thin_constraints expects a boundary_only constraint set");

  using Key = std::pair<int, int>;  // (subdomain, vertex)
  auto involved = [&](const ConstraintRow& r) {
    std::vector<Key> keys{{r.target_subdomain, r.target_vertex}};
    const auto& T = domain[r.anchor_subdomain].simplices();
    for (int c = 0; c < T.cols(); ++c) keys.emplace_back(r.anchor_subdomain, T(r.anchor_simplex, c));
    return keys;
  };

  std::map<Key, int> vertex_score;
  for (const auto& r : cs.rows)
    for (const Key& k : involved(r)) ++vertex_score[k];

  std::vector<double> row_score(cs.rows.size());
  for (std::size_t i = 0; i < cs.rows.size(); ++i) {
    const auto keys = involved(cs.rows[i]);
    double s = 0.0;
    for (const Key& k : keys) s += vertex_score[k];
    row_score[i] = s / static_cast<double>(keys.size());
  }

  std::map<Key, std::size_t> best;  // target -> kept row
  for (std::size_t i = 0; i < cs.rows.size(); ++i) {
    const auto& r = cs.rows[i];
    const Key target{r.target_subdomain, r.target_vertex};
    auto it = best.find(target);
    if (it == best.end()) {
      best.emplace(target, i);
      continue;
    }
    const auto& cur = cs.rows[it->second];
    const auto candidate = std::make_tuple(row_score[i], r.anchor_subdomain, r.anchor_simplex, i);
    const auto incumbent = std::make_tuple(row_score[it->second], cur.anchor_subdomain, cur.anchor_simplex, it->second);
    if (candidate < incumbent) it->second = i;
  }

  std::vector<std::size_t> kept;
  for (const auto& [target, i] : best) kept.push_back(i);
  std::sort(kept.begin(), kept.end());

  ConstraintSet out;
  out.mode = CouplingMode::boundary_only_thinned;
  for (std::size_t i : kept) out.rows.push_back(cs.rows[i]);
  return out;
}

ConstraintSet build_constraints(const DeconstructedDomain& domain, std::span<const AabbTree> trees,
                                CouplingMode mode) {
  switch (mode) {
    case CouplingMode::all_vertices: return all_vertex_constraints(domain, trees);
    case CouplingMode::boundary_only: return boundary_only_constraints(domain, trees);
    case CouplingMode::boundary_only_thinned:
      return thin_constraints(boundary_only_constraints(domain, trees), domain);
  }
  throw InvalidArgument("unknown coupling mode");
}

SparseMatrix constraint_matrix(const ConstraintSet& cs, const DeconstructedDomain& domain) {
  std::vector<Triplet> trips;
  for (int r = 0; r < cs.size(); ++r) {
    const auto& row = cs.rows[r];
    trips.emplace_back(r, domain.global_index(row.target_subdomain, row.target_vertex), 1.0);
    const auto& T = domain[row.anchor_subdomain].simplices();
    for (int c = 0; c < T.cols(); ++c)
      trips.emplace_back(r, domain.global_index(row.anchor_subdomain, T(row.anchor_simplex, c)),
                         -row.coefficients(c));
  }
  return from_triplets(cs.size(), domain.total_vertices(), trips);
}

std::string constraints_to_csv(const ConstraintSet& cs, int dim) {
  std::string out = "target_subdomain,target_vertex,anchor_subdomain,anchor_simplex";
  for (int c = 0; c <= dim; ++c) out += ",c" + std::to_string(c);
  out += '\n';
  char buf[32];
  for (const auto& r : cs.rows) {
    out += std::to_string(r.target_subdomain) + ',' + std::to_string(r.target_vertex) + ',' +
           std::to_string(r.anchor_subdomain) + ',' + std::to_string(r.anchor_simplex);
    for (int c = 0; c < r.coefficients.size(); ++c) {
      std::snprintf(buf, sizeof buf, ",%.17g", r.coefficients(c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace decon
