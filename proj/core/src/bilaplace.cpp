#include <cmath>
#include <string>

#include "decon/error.hpp"
#include "decon/solver.hpp"

namespace decon {
namespace {

std::vector<std::pair<int, double>> z_fixed(const DeconstructedDomain& domain,
                                            const std::vector<DirichletValue>& values) {
  std::vector<std::pair<int, double>> out;
  std::vector<char> seen(domain.total_vertices(), 0);
  for (const auto& dv : values) {
    if (dv.subdomain < 0 || dv.subdomain >= domain.size() || dv.vertex < 0 ||
        dv.vertex >= domain[dv.subdomain].vertex_count())
      throw InvalidArgument("prescribed z refers to a missing vertex");
    const int g = domain.global_index(dv.subdomain, dv.vertex);
    if (seen[g]) throw InvalidArgument("z prescribed twice at global vertex " + std::to_string(g));
    seen[g] = 1;
    out.emplace_back(g, dv.value);
  }
  return out;
}

// One-sided derivative rows: slope of the target's boundary element minus
// slope of the anchor element, one per boundary target.
SparseMatrix derivative_rows(const DeconstructedDomain& domain, const ConstraintSet& cs) {
  std::vector<SparseMatrix> G;
  for (const auto& mesh : domain.subdomains()) G.push_back(gradient_matrix(mesh));
  std::vector<Triplet> trips;
  int r = 0;
  for (const auto& row : cs.rows) {
    const SimplicialMesh& mesh = domain[row.target_subdomain];
    const auto& T = mesh.simplices();
    int element = -1, incident = 0;
    for (int e = 0; e < mesh.simplex_count(); ++e)
      if (T(e, 0) == row.target_vertex || T(e, 1) == row.target_vertex) {
        element = e;
        ++incident;
      }
    if (incident != 1) continue;  // interior target
    auto add = [&](int sub, int e, double sign) {
      const SparseMatrix& Gs = G[sub];
      for (int k = 0; k < Gs.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(Gs, k); it; ++it)
          if (it.row() == e) trips.emplace_back(r, domain.global_index(sub, static_cast<int>(it.col())), sign * it.value());
    };
    add(row.target_subdomain, element, 1.0);
    add(row.anchor_subdomain, row.anchor_simplex, -1.0);
    ++r;
  }
  return from_triplets(r, domain.total_vertices(), trips);
}

SparseMatrix stack(const SparseMatrix& top, const SparseMatrix& bottom) {
  std::vector<Triplet> trips;
  for (int k = 0; k < top.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(top, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int k = 0; k < bottom.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(bottom, k); it; ++it)
      trips.emplace_back(static_cast<int>(top.rows() + it.row()), static_cast<int>(it.col()), it.value());
  return from_triplets(static_cast<int>(top.rows() + bottom.rows()), static_cast<int>(top.cols()), trips);
}

// A placed at column offset `shift` of a matrix with `cols` columns.
SparseMatrix place_cols(const SparseMatrix& A, int shift, int cols) {
  std::vector<Triplet> trips;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), shift + static_cast<int>(it.col()), it.value());
  return from_triplets(static_cast<int>(A.rows()), cols, trips);
}

double mixed_energy(const SparseMatrix& M, const Eigen::VectorXd& u, const Eigen::VectorXd& z,
                    const Eigen::VectorXd& f) {
  return 0.5 * z.dot(M * z) - f.dot(M * u);
}

}  // namespace

std::string_view to_string(BilaplaceCoupling coupling) {
  switch (coupling) {
    case BilaplaceCoupling::value_only: return "value_only";
    case BilaplaceCoupling::low_order: return "low_order";
    case BilaplaceCoupling::high_order: return "high_order";
  }
  return "unknown";
}

BilaplaceCoupling parse_bilaplace_coupling(std::string_view name) {
  if (name == "value_only") return BilaplaceCoupling::value_only;
  if (name == "low_order") return BilaplaceCoupling::low_order;
  if (name == "high_order") return BilaplaceCoupling::high_order;
  throw InvalidArgument("unknown bi-Laplace coupling '" + std::string(name) + "'");
}

SolveReport solve_bilaplace(const DeconstructedDomain& domain, const QuadratureSpec& quad,
                            const BilaplaceOptions& options) {
  if (options.coupling == BilaplaceCoupling::low_order && domain.dim() != 1)
    throw InvalidArgument("low_order bi-Laplace coupling is only discretized in 1D");

  const Discretization disc = discretize(domain, quad, options.rows);
  const int n = domain.total_vertices();
  const SparseMatrix& L = disc.ops.L;
  const SparseMatrix& M = disc.ops.M;

  std::vector<Triplet> trips;
  for (int k = 0; k < L.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(L, k); it; ++it) {
      const int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
      trips.emplace_back(i, n + j, it.value());
      trips.emplace_back(n + i, j, it.value());
    }
  for (int k = 0; k < M.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(M, k); it; ++it)
      trips.emplace_back(n + static_cast<int>(it.row()), n + static_cast<int>(it.col()), -it.value());
  const SparseMatrix H = from_triplets(2 * n, 2 * n, trips);

  SparseMatrix Au = disc.A;
  if (options.coupling == BilaplaceCoupling::low_order) Au = stack(Au, derivative_rows(domain, disc.constraints));
  SparseMatrix B = place_cols(Au, 0, 2 * n);
  int mz = 0;
  if (options.coupling == BilaplaceCoupling::high_order) {
    B = stack(B, place_cols(disc.A, n, 2 * n));
    mz = static_cast<int>(disc.A.rows());
  }

  const Eigen::VectorXd f = expand_source(options.load, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * n);
  b.head(n) = M * f;

  auto fixed = domain.fixed_values();
  for (const auto& [g, v] : z_fixed(domain, options.dirichlet_z)) fixed.emplace_back(n + g, v);

  SolveReport full = solve_kkt(H, b, B, Eigen::VectorXd::Zero(B.rows()), fixed);

  SolveReport rep;
  rep.u = full.u.head(n);
  rep.z = full.u.tail(n);
  rep.offsets = domain.offsets();
  const int mu = static_cast<int>(Au.rows());
  rep.multipliers = full.multipliers.head(mu);
  rep.multipliers_z = full.multipliers.tail(mz);
  rep.constraint_residual = full.constraint_residual;
  rep.constraint_rows = full.constraint_rows;
  rep.dropped_rows = full.dropped_rows;
  rep.energy = mixed_energy(M, rep.u, rep.z, f);
  return rep;
}

SolveReport solve_bilaplace_convex(const DeconstructedDomain& domain, const QuadratureSpec& quad,
                                   const BilaplaceOptions& options) {
  if (options.coupling != BilaplaceCoupling::high_order)
    throw InvalidArgument("the convex form exists for high_order coupling only");

  const Discretization disc = discretize(domain, quad, options.rows);
  const int n = domain.total_vertices();
  const SparseMatrix& L = disc.ops.L;
  const SparseMatrix& M = disc.ops.M;
  const Eigen::VectorXd mass = M.diagonal();
  for (int i = 0; i < n; ++i)
    if (!(mass(i) > 0.0)) throw InvalidArgument("zero mass at global vertex " + std::to_string(i));

  Eigen::VectorXd z_pinned = Eigen::VectorXd::Zero(n);
  std::vector<char> pinned(n, 0);
  for (const auto& [g, v] : z_fixed(domain, options.dirichlet_z)) {
    z_pinned(g) = v;
    pinned[g] = 1;
  }
  std::vector<int> zfree;
  for (int i = 0; i < n; ++i)
    if (!pinned[i]) zfree.push_back(i);
  const int nf = static_cast<int>(zfree.size());

  // lambda_z must be unique: keep independent rows of A on the free z entries.
  const std::vector<int> kept =
      disc.A.rows() ? independent_rows(select_cols(disc.A, zfree)) : std::vector<int>{};
  const SparseMatrix Az = select_rows(disc.A, kept);
  const int mz = static_cast<int>(kept.size());
  const int m = static_cast<int>(disc.A.rows());
  const int nx = n + mz + nf;

  std::vector<Triplet> qt;
  for (int i = 0; i < nf; ++i) qt.emplace_back(n + mz + i, n + mz + i, 1.0);
  const SparseMatrix Q = from_triplets(nx, nx, qt);

  const Eigen::VectorXd f = expand_source(options.load, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nx);
  b.head(n) = M * f - L * z_pinned;
  b.segment(n, mz) = -(Az * z_pinned);

  std::vector<Triplet> ct;
  for (int k = 0; k < disc.A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(disc.A, k); it; ++it)
      ct.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  std::vector<int> where(n, -1);
  for (int i = 0; i < nf; ++i) where[zfree[i]] = i;
  for (int k = 0; k < L.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(L, k); it; ++it)
      if (const int r = where[it.row()]; r >= 0) ct.emplace_back(m + r, static_cast<int>(it.col()), it.value());
  for (int k = 0; k < Az.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(Az, k); it; ++it)
      if (const int r = where[it.col()]; r >= 0) ct.emplace_back(m + r, n + static_cast<int>(it.row()), it.value());
  for (int i = 0; i < nf; ++i) ct.emplace_back(m + i, n + mz + i, -std::sqrt(mass(zfree[i])));
  const SparseMatrix C = from_triplets(m + nf, nx, ct);

  const auto fixed = domain.fixed_values();
  SolveReport full = solve_kkt(Q, b, C, Eigen::VectorXd::Zero(C.rows()), fixed);

  SolveReport rep;
  rep.u = full.u.head(n);
  rep.z = z_pinned;
  for (int i = 0; i < nf; ++i) rep.z(zfree[i]) = full.u(n + mz + i) / std::sqrt(mass(zfree[i]));
  rep.offsets = domain.offsets();
  rep.multipliers = full.multipliers.head(m);
  rep.multipliers_z = Eigen::VectorXd::Zero(m);
  for (int r = 0; r < mz; ++r) rep.multipliers_z(kept[r]) = full.u(n + r);
  rep.constraint_residual = m ? (disc.A * rep.u).lpNorm<Eigen::Infinity>() : 0.0;
  rep.constraint_rows = m;
  rep.dropped_rows = full.dropped_rows + (m - mz);
  rep.energy = mixed_energy(M, rep.u, rep.z, f);
  return rep;
}

}  // namespace decon
