#include "decon/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Dense>

#include "decon/error.hpp"
#include "decon/geometry.hpp"

namespace decon {
namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int finest(const ExperimentConfig& cfg) {
  if (cfg.resolutions.empty()) throw ConfigError("no resolutions configured");
  return cfg.resolutions.back();
}

// Slope of the piecewise-linear u on 1D element e of subdomain k.
double element_slope(const DeconstructedDomain& domain, const Eigen::VectorXd& u, int k, int e) {
  const SimplicialMesh& m = domain[k];
  const int v0 = m.simplices()(e, 0), v1 = m.simplices()(e, 1);
  return (u(domain.global_index(k, v1)) - u(domain.global_index(k, v0))) /
         (m.vertices()(v1, 0) - m.vertices()(v0, 0));
}

}  // namespace

SolveReport solve_scenario(const Scenario& sc, const ExperimentConfig& cfg) {
  if (sc.pde == Pde::bilaplace) {
    BilaplaceOptions opt;
    opt.coupling = cfg.bilaplace_coupling;
    opt.rows = cfg.coupling;
    opt.load = sc.source;
    opt.dirichlet_z = sc.dirichlet_z;
    return solve_bilaplace(sc.domain, cfg.quadrature, opt);
  }
  return solve_poisson(sc.domain, cfg.quadrature, cfg.coupling, sc.source);
}

double mesh_size(const DeconstructedDomain& domain) {
  double h = 0.0;
  for (const auto& m : domain.subdomains()) h = std::max(h, max_circumradius(m));
  return h;
}

double linf_error(const Scenario& sc, const SolveReport& rep) {
  if (!sc.reference) throw ConfigError("scenario has no closed-form reference");
  double err = 0.0;
  for (int k = 0; k < sc.domain.size(); ++k) {
    const SimplicialMesh& m = sc.domain[k];
    for (int v = 0; v < m.vertex_count(); ++v)
      err = std::max(err, std::abs(rep.u(sc.domain.global_index(k, v)) - sc.reference(m.vertex(v))));
  }
  return err;
}

std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& cfg) {
  std::vector<ConvergenceRow> rows;
  const ConvergenceRow* prev = nullptr;
  for (int res : cfg.resolutions) {
    const Scenario sc = make_scenario(cfg, res);
    if (!sc.reference) throw ConfigError("scenario '" + cfg.scenario + "' has no closed-form reference");
    ConvergenceRow row;
    row.h = mesh_size(sc.domain);
    row.n_total = sc.domain.total_vertices();
    try {
      const SolveReport rep = solve_scenario(sc, cfg);
      row.error_linf = linf_error(sc, rep);
      row.constraint_rows = rep.constraint_rows;
      if (prev && prev->error_linf > 0.0 && row.error_linf > 0.0)
        row.observed_order = std::log(prev->error_linf / row.error_linf) / std::log(prev->h / row.h);
    } catch (const SolverError& e) {
      row.error_linf = std::numeric_limits<double>::quiet_NaN();
      row.status = std::string("solver_error: ") + e.what();
    }
    rows.push_back(row);
    if (row.status == "ok") prev = &rows.back();
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "h,n_total,error_linf,observed_order,constraint_rows,solve_status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out += fmt(r.h) + ',' + std::to_string(r.n_total) + ',' + fmt(r.error_linf) + ',' +
           (r.observed_order ? fmt(*r.observed_order) : std::string()) + ',' + std::to_string(r.constraint_rows) +
           ',' + status + '\n';
  }
  return out;
}

double overlap_fit_residual(const DeconstructedDomain& domain, const Eigen::VectorXd& u, int* count) {
  const auto trees = build_trees(domain);
  const int d = domain.dim();
  std::vector<Point> pts;
  std::vector<double> vals;
  for (int a = 0; a < domain.size(); ++a) {
    const SimplicialMesh& m = domain[a];
    for (int v = 0; v < m.vertex_count(); ++v) {
      const Point p = m.vertex(v);
      for (int b = 0; b < domain.size(); ++b)
        if (b != a && locate_point(trees[b], p)) {
          pts.push_back(p);
          vals.push_back(u(domain.global_index(a, v)));
          break;
        }
    }
  }
  if (pts.empty()) throw InvalidArgument("locking probe: subdomains do not overlap");
  if (count) *count = static_cast<int>(pts.size());

  Eigen::MatrixXd X(pts.size(), d + 1);
  Eigen::VectorXd y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    X(i, 0) = 1.0;
    X.row(i).tail(d) = pts[i].transpose();
    y(i) = vals[i];
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  const double residual = (X * beta - y).lpNorm<Eigen::Infinity>();
  const double range = u.maxCoeff() - u.minCoeff();
  return residual / std::max(range, std::numeric_limits<double>::min());
}

double overlap_derivative_jump(const DeconstructedDomain& domain, const Eigen::VectorXd& u) {
  if (domain.dim() != 1) throw InvalidArgument("derivative jump is defined for 1D domains");
  const auto trees = build_trees(domain);
  double jump = 0.0;
  bool any = false;
  for (int a = 0; a < domain.size(); ++a) {
    const SimplicialMesh& ma = domain[a];
    const auto& T = ma.simplices();
    for (int v : boundary_vertices(ma)) {
      int owner = -1;
      for (int e = 0; e < ma.simplex_count() && owner < 0; ++e)
        if (T(e, 0) == v || T(e, 1) == v) owner = e;
      const double own = element_slope(domain, u, a, owner);
      for (int b = 0; b < domain.size(); ++b) {
        if (b == a) continue;
        const auto loc = locate_point(trees[b], ma.vertex(v));
        if (!loc) continue;
        jump = std::max(jump, std::abs(own - element_slope(domain, u, b, loc->simplex)));
        any = true;
      }
    }
  }
  if (!any) throw InvalidArgument("locking probe: no boundary vertex lies inside another segment");
  return jump;
}

std::vector<ProbeRow> locking_probe(const ExperimentConfig& cfg) {
  std::vector<ProbeRow> rows;
  for (int res : cfg.resolutions) {
    const Scenario sc = make_scenario(cfg, res);
    ProbeRow row;
    row.resolution = res;
    try {
      const SolveReport rep = solve_scenario(sc, cfg);
      row.linear_fit_residual = overlap_fit_residual(sc.domain, rep.u, &row.overlap_vertices);
      if (sc.domain.dim() == 1) row.derivative_jump = overlap_derivative_jump(sc.domain, rep.u);
    } catch (const SolverError& e) {
      row.linear_fit_residual = std::numeric_limits<double>::quiet_NaN();
      row.status = std::string("solver_error: ") + e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string probe_csv(const std::vector<ProbeRow>& rows) {
  std::string out = "resolution,overlap_vertices,linear_fit_residual,derivative_jump,solve_status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out += std::to_string(r.resolution) + ',' + std::to_string(r.overlap_vertices) + ',' +
           fmt(r.linear_fit_residual) + ',' + (r.derivative_jump ? fmt(*r.derivative_jump) : std::string()) + ',' +
           status + '\n';
  }
  return out;
}

std::string modes_csv(const ExperimentConfig& cfg) {
  const int res = finest(cfg);
  const Scenario sc = make_scenario(cfg, res);
  const Discretization disc = discretize(sc.domain, cfg.quadrature, cfg.coupling);
  const Modes modes = constrained_modes(disc.ops.L, disc.ops.M, disc.A, cfg.modes);
  Eigen::VectorXd reference;
  if (cfg.scenario == "halfdisk") {
    const DeconstructedDomain single = halfdisk_reference(res);
    const GlobalOperators ops = assemble_global(single, cfg.quadrature);
    reference = constrained_modes(ops.L, ops.M, SparseMatrix(0, single.total_vertices()), cfg.modes).values;
  }
  std::string out = "mode,eigenvalue,reference\n";
  for (int i = 0; i < modes.values.size(); ++i)
    out += std::to_string(i + 1) + ',' + fmt(modes.values(i)) + ',' +
           (i < reference.size() ? fmt(reference(i)) : std::string()) + '\n';
  return out;
}

std::string constraints_csv(const ExperimentConfig& cfg) {
  const Scenario sc = make_scenario(cfg, finest(cfg));
  const auto trees = build_trees(sc.domain);
  return constraints_to_csv(build_constraints(sc.domain, trees, cfg.coupling), sc.domain.dim());
}

std::string solution_csv(const DeconstructedDomain& domain, const Eigen::VectorXd& u) {
  static const char* axes[] = {"x", "y", "z"};
  std::string out = "subdomain,vertex";
  for (int c = 0; c < domain.dim(); ++c) out += std::string(",") + axes[c];
  out += ",u\n";
  for (int k = 0; k < domain.size(); ++k) {
    const SimplicialMesh& m = domain[k];
    for (int v = 0; v < m.vertex_count(); ++v) {
      out += std::to_string(k) + ',' + std::to_string(v);
      for (int c = 0; c < domain.dim(); ++c) out += ',' + fmt(m.vertices()(v, c));
      out += ',' + fmt(u(domain.global_index(k, v))) + '\n';
    }
  }
  return out;
}

std::string solution_csv(const ExperimentConfig& cfg) {
  const Scenario sc = make_scenario(cfg, finest(cfg));
  if (cfg.dt > 0.0) {
    if (sc.pde != Pde::poisson) throw ConfigError("dt applies to second-order scenarios only");
    // One backward Euler step of u_t = Laplace(u) + f from u = 0.
    const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(sc.domain.total_vertices(), cfg.dt * sc.source);
    return solution_csv(sc.domain, implicit_step(sc.domain, cfg.quadrature, cfg.coupling, cfg.dt, rhs).u);
  }
  return solution_csv(sc.domain, solve_scenario(sc, cfg).u);
}

std::string penalty_csv(const ExperimentConfig& cfg) {
  if (cfg.penalty_weights.empty()) throw ConfigError("penalty_weights is empty");
  const Scenario sc = make_scenario(cfg, finest(cfg));
  if (sc.pde != Pde::poisson) throw ConfigError("the penalty sweep supports second-order scenarios only");
  const Discretization disc = discretize(sc.domain, cfg.quadrature, cfg.coupling);
  const Eigen::VectorXd b = disc.ops.M * expand_source(sc.source, sc.domain.total_vertices());
  const SparseMatrix AtA = SparseMatrix(disc.A.transpose()) * disc.A;
  const auto fixed = sc.domain.fixed_values();
  const SparseMatrix none(0, sc.domain.total_vertices());
  std::string out = "omega,error_linf\n";
  for (double w : cfg.penalty_weights) {
    const SparseMatrix Q = disc.ops.L + 2.0 * w * AtA;
    const SolveReport rep = solve_kkt(Q, b, none, Eigen::VectorXd(0), fixed);
    out += fmt(w) + ',' + (sc.reference ? fmt(linf_error(sc, rep)) : std::string()) + '\n';
  }
  return out;
}

}  // namespace decon
