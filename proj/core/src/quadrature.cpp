#include <cmath>
#include <numbers>
#include <random>

#include "decon/error.hpp"
#include "decon/fem.hpp"

namespace decon {
namespace {

// Gauss-Legendre rule on [0, 1] by Newton iteration on P_n.
QuadratureRule gauss_legendre(int n) {
  QuadratureRule rule;
  rule.points.resize(n, 2);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double s = 0.5 * (1.0 - x);
    rule.points.row(i) << 1.0 - s, s;
    rule.weights(i) = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2)P'^2) scaled to [0,1]
  }
  return rule;
}

// Appends the distinct permutations of (a, a, 1-2a).
void orbit21(std::vector<Eigen::Vector3d>& pts, std::vector<double>& w, double a, double weight) {
  const double b = 1.0 - 2.0 * a;
  for (const Eigen::Vector3d& p : {Eigen::Vector3d(a, a, b), Eigen::Vector3d(a, b, a), Eigen::Vector3d(b, a, a)}) {
    pts.push_back(p);
    w.push_back(weight);
  }
}

QuadratureRule triangle_rule(int n) {
  std::vector<Eigen::Vector3d> pts;
  std::vector<double> w;
  switch (n) {
    case 1:
      pts.emplace_back(1.0 / 3, 1.0 / 3, 1.0 / 3);
      w.push_back(1.0);
      break;
    case 4:
      // Equal weights, exact for quadratics.
      pts.emplace_back(1.0 / 3, 1.0 / 3, 1.0 / 3);
      w.push_back(0.25);
      orbit21(pts, w, (1.0 - 1.0 / std::sqrt(3.0)) / 3.0, 0.25);
      break;
    case 10:
      // Centroid plus three (a, a, 1-2a) orbits, exact for quartics.
      pts.emplace_back(1.0 / 3, 1.0 / 3, 1.0 / 3);
      w.push_back(0.12538895735123430585);
      orbit21(pts, w, 0.09, 0.099522018773718472031);
      orbit21(pts, w, 0.22, 0.088154533190466115672);
      orbit21(pts, w, 0.48, 0.10386046225207064368);
      break;
    default:
      throw InvalidArgument("symmetric rules have 1, 4 or 10 points");
  }
  QuadratureRule rule;
  rule.points.resize(static_cast<int>(pts.size()), 3);
  rule.weights.resize(static_cast<int>(w.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rule.points.row(i) = pts[i].transpose();
    rule.weights(i) = w[i];
  }
  return rule;
}

QuadratureRule tetrahedron_rule(int n) {
  std::vector<Eigen::Vector4d> pts;
  std::vector<double> w;
  auto orbit31 = [&](double a, double weight) {
    const double b = 1.0 - 3.0 * a;
    for (int i = 0; i < 4; ++i) {
      Eigen::Vector4d p = Eigen::Vector4d::Constant(a);
      p(i) = b;
      pts.push_back(p);
      w.push_back(weight);
    }
  };
  auto orbit22 = [&](double a, double weight) {
    const double b = 0.5 - a;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        Eigen::Vector4d p = Eigen::Vector4d::Constant(b);
        p(i) = a;
        p(j) = a;
        pts.push_back(p);
        w.push_back(weight);
      }
  };
  switch (n) {
    case 1:
      pts.push_back(Eigen::Vector4d::Constant(0.25));
      w.push_back(1.0);
      break;
    case 4:
      orbit31(0.1381966011250105151795, 0.25);
      break;
    case 10:
      // Equal weights over a (a,a,a,1-3a) orbit and an (a,a,1/2-a,1/2-a) orbit; exact for cubics.
      orbit31(0.112419697962723888171891, 0.1);
      orbit22(0.0930180870843275871554644, 0.1);
      break;
    default:
      throw InvalidArgument("symmetric rules have 1, 4 or 10 points");
  }
  QuadratureRule rule;
  rule.points.resize(static_cast<int>(pts.size()), 4);
  rule.weights.resize(static_cast<int>(w.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rule.points.row(i) = pts[i].transpose();
    rule.weights(i) = w[i];
  }
  return rule;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

QuadratureSpec QuadratureSpec::symmetric_fixed_order(int n_points) {
  if (n_points != 1 && n_points != 4 && n_points != 10)
    throw InvalidArgument("symmetric_fixed_order supports 1, 4 or 10 points");
  return {Scheme::symmetric_fixed_order, n_points, 0, 0};
}

QuadratureSpec QuadratureSpec::monte_carlo(int samples_per_element, std::uint64_t seed) {
  if (samples_per_element < 1) throw InvalidArgument("monte_carlo needs at least one sample");
  return {Scheme::monte_carlo, 0, samples_per_element, seed};
}

std::string QuadratureSpec::name() const {
  switch (scheme) {
    case Scheme::corner_average: return "corner_average";
    case Scheme::barycenter: return "barycenter";
    case Scheme::symmetric_fixed_order: return "symmetric_" + std::to_string(points);
    case Scheme::monte_carlo: return "monte_carlo_" + std::to_string(samples_per_element);
  }
  return "unknown";
}

QuadratureRule quadrature_rule(const QuadratureSpec& spec, int dim, int element) {
  if (dim < 1 || dim > 3) throw InvalidArgument("quadrature dimension must be 1, 2 or 3");
  switch (spec.scheme) {
    case QuadratureSpec::Scheme::corner_average: {
      QuadratureRule rule;
      rule.points = Eigen::MatrixXd::Identity(dim + 1, dim + 1);
      rule.weights = Eigen::VectorXd::Constant(dim + 1, 1.0 / (dim + 1));
      return rule;
    }
    case QuadratureSpec::Scheme::barycenter:
      return quadrature_rule(QuadratureSpec::symmetric_fixed_order(1), dim, element);
    case QuadratureSpec::Scheme::symmetric_fixed_order:
      if (dim == 1) {
        if (spec.points != 1 && spec.points != 4 && spec.points != 10)
          throw InvalidArgument("symmetric rules have 1, 4 or 10 points");
        return gauss_legendre(spec.points);
      }
      return dim == 2 ? triangle_rule(spec.points) : tetrahedron_rule(spec.points);
    case QuadratureSpec::Scheme::monte_carlo: {
      // Independent stream per element so results do not depend on visit order.
      std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(static_cast<std::uint64_t>(element))));
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      const int q = spec.samples_per_element;
      QuadratureRule rule;
      rule.points.resize(q, dim + 1);
      rule.weights = Eigen::VectorXd::Constant(q, 1.0 / q);
      for (int s = 0; s < q; ++s) {
        // Normalized exponentials are uniform on the simplex.
        double total = 0.0;
        for (int c = 0; c <= dim; ++c) {
          const double e = -std::log1p(-uniform(rng));
          rule.points(s, c) = e;
          total += e;
        }
        rule.points.row(s) /= total;
      }
      return rule;
    }
  }
  throw InvalidArgument("unknown quadrature scheme");
}

}  // namespace decon
