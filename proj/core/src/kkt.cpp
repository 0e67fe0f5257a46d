#include <algorithm>
#include <cmath>
#include <string>

#include "decon/error.hpp"
#include "decon/solver.hpp"

namespace decon {

SolveReport solve_kkt(const SparseMatrix& Q, const Eigen::VectorXd& b, const SparseMatrix& A,
                      const Eigen::VectorXd& c, std::span<const std::pair<int, double>> fixed) {
  const int n = static_cast<int>(Q.rows());
  const int m = static_cast<int>(A.rows());
  if (Q.cols() != n || b.size() != n) throw InvalidArgument("solve_kkt: Q and b dimensions differ");
  if (A.cols() != n || c.size() != m) throw InvalidArgument("solve_kkt: A and c dimensions differ");

  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  std::vector<char> is_fixed(n, 0);
  for (const auto& [i, v] : fixed) {
    if (i < 0 || i >= n) throw InvalidArgument("solve_kkt: fixed index out of range");
    if (is_fixed[i]) throw InvalidArgument("solve_kkt: index " + std::to_string(i) + " fixed twice");
    is_fixed[i] = 1;
    u(i) = v;
  }
  std::vector<int> free;
  for (int i = 0; i < n; ++i)
    if (!is_fixed[i]) free.push_back(i);
  const int nf = static_cast<int>(free.size());

  const Eigen::VectorXd b_shift = b - Q * u;
  const Eigen::VectorXd c_shift = c - A * u;
  const SparseMatrix Qff = select_rows(select_cols(Q, free), free);
  const SparseMatrix Af = select_cols(A, free);
  Eigen::VectorXd bf(nf);
  for (int i = 0; i < nf; ++i) bf(i) = b_shift(free[i]);

  auto saddle = [&](const std::vector<int>& kept) {
    const int mr = static_cast<int>(kept.size());
    const SparseMatrix Ar = select_rows(Af, kept);
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(Qff.nonZeros() + 2 * Ar.nonZeros()));
    for (int k = 0; k < Qff.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(Qff, k); it; ++it)
        trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int k = 0; k < Ar.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(Ar, k); it; ++it) {
        trips.emplace_back(nf + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        trips.emplace_back(static_cast<int>(it.col()), nf + static_cast<int>(it.row()), it.value());
      }
    const SparseMatrix K = from_triplets(nf + mr, nf + mr, trips);
    Eigen::VectorXd rhs(nf + mr);
    rhs.head(nf) = bf;
    for (int r = 0; r < mr; ++r) rhs(nf + r) = c_shift(kept[r]);
    return solve_linear(K, rhs);
  };

  // Small systems are rank-reduced up front. Large ones try the full system and reduce on failure.
  std::vector<int> kept(m);
  for (int r = 0; r < m; ++r) kept[r] = r;
  const bool reduce_first = m > 0 && nf + m < kDenseSolveLimit;
  if (reduce_first) kept = independent_rows(Af);
  Eigen::VectorXd x;
  try {
    x = saddle(kept);
  } catch (const SolverError&) {
    if (m == 0 || reduce_first) throw;
    kept = independent_rows(Af);
    x = saddle(kept);
  }
  const int mr = static_cast<int>(kept.size());

  SolveReport rep;
  for (int i = 0; i < nf; ++i) u(free[i]) = x(i);
  rep.u = u;
  rep.multipliers = Eigen::VectorXd::Zero(m);
  for (int r = 0; r < mr; ++r) rep.multipliers(kept[r]) = x(nf + r);
  rep.constraint_rows = m;
  rep.dropped_rows = m - mr;

  const Eigen::VectorXd Qu = Q * u;
  const Eigen::VectorXd station = Qu - b + A.transpose() * rep.multipliers;
  double station_free = 0.0;
  for (int i : free) station_free = std::max(station_free, std::abs(station(i)));
  const double station_scale = b.lpNorm<Eigen::Infinity>() + Qu.lpNorm<Eigen::Infinity>();
  if (!(station_free <= 1e-8 * std::max(station_scale, 1e-300)))
    throw SolverError("KKT stationarity residual " + std::to_string(station_free) + " too large", nf + mr);

  rep.constraint_residual = m ? (A * u - c).lpNorm<Eigen::Infinity>() : 0.0;
  const double feas_scale = std::max(u.lpNorm<Eigen::Infinity>(), c.size() ? c.lpNorm<Eigen::Infinity>() : 0.0);
  if (!(rep.constraint_residual <= 1e-9 * std::max(feas_scale, 1e-300)))
    throw SolverError("constraints infeasible with the fixed values (residual " +
                      std::to_string(rep.constraint_residual) + ")", mr);

  rep.energy = 0.5 * u.dot(Qu) - b.dot(u);
  return rep;
}

}  // namespace decon
