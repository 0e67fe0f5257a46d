#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "decon/error.hpp"
#include "decon/mesh.hpp"

namespace decon {
namespace {

using Curve = std::function<Eigen::Vector2d(double)>;

// Triangulates a region star-shaped w.r.t. `center` whose boundary is the
// closed counter-clockwise curve `boundary(s)`, s in [0, 1). Ring k of n_r has
// about n_boundary * k / n_r vertices placed at center + k/n_r (boundary(s) - center);
// consecutive rings are zipped together by parameter order.
SimplicialMesh star_mesh(const Eigen::Vector2d& center, const Curve& boundary, int n_r,
                         int n_boundary) {
  if (n_r < 1) throw InvalidArgument("need at least one ring");
  if (n_boundary < 3) throw InvalidArgument("need at least three boundary vertices");

  std::vector<Eigen::Vector2d> pts{center};
  std::vector<int> ring_start{0}, ring_size{1};
  for (int k = 1; k <= n_r; ++k) {
    const int m = std::max(3, static_cast<int>(std::lround(double(n_boundary) * k / n_r)));
    ring_start.push_back(static_cast<int>(pts.size()));
    ring_size.push_back(m);
    const double scale = double(k) / n_r;
    for (int j = 0; j < m; ++j) pts.push_back(center + scale * (boundary(double(j) / m) - center));
  }

  std::vector<Eigen::Vector3i> tris;
  // Fan around the center.
  for (int j = 0; j < ring_size[1]; ++j)
    tris.emplace_back(0, ring_start[1] + j, ring_start[1] + (j + 1) % ring_size[1]);
  for (int k = 2; k <= n_r; ++k) {
    const int ma = ring_size[k - 1], mb = ring_size[k];
    const int ia = ring_start[k - 1], ib = ring_start[k];
    int i = 0, j = 0;
    while (i < ma || j < mb) {
      // Advance along the ring whose next vertex comes first: (j+1)/mb <= (i+1)/ma.
      const bool advance_outer =
          j < mb && (i == ma || static_cast<long>(j + 1) * ma <= static_cast<long>(i + 1) * mb);
      if (advance_outer) {
        tris.emplace_back(ia + i % ma, ib + j, ib + (j + 1) % mb);
        ++j;
      } else {
        tris.emplace_back(ia + i, ib + j % mb, ia + (i + 1) % ma);
        ++i;
      }
    }
  }

  Eigen::MatrixXd V(pts.size(), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) V.row(i) = pts[i].transpose();
  Eigen::MatrixXi T(tris.size(), 3);
  for (std::size_t i = 0; i < tris.size(); ++i) T.row(i) = tris[i].transpose();
  return SimplicialMesh(std::move(V), std::move(T));
}

}  // namespace

SimplicialMesh generate_segment(double a, double b, int n) {
  if (n < 2) throw InvalidArgument("segment needs at least 2 vertices");
  if (!(a < b)) throw InvalidArgument("segment requires a < b");
  Eigen::MatrixXd V(n, 1);
  for (int i = 0; i < n; ++i) V(i, 0) = a + (b - a) * double(i) / (n - 1);
  V(n - 1, 0) = b;
  Eigen::MatrixXi T(n - 1, 2);
  for (int i = 0; i + 1 < n; ++i) T.row(i) << i, i + 1;
  return SimplicialMesh(std::move(V), std::move(T));
}

SimplicialMesh generate_annulus(std::span<const double> radii, int n_t, double theta_offset) {
  const int rings = static_cast<int>(radii.size());
  if (rings < 2) throw InvalidArgument("annulus needs at least one ring of elements");
  if (!(radii[0] > 0.0)) throw InvalidArgument("annulus radii must be positive");
  for (int i = 1; i < rings; ++i)
    if (!(radii[i] > radii[i - 1])) throw InvalidArgument("annulus radii must be strictly increasing");
  if (n_t < 3) throw InvalidArgument("annulus needs at least three angular samples");

  Eigen::MatrixXd V(rings * n_t, 2);
  for (int i = 0; i < rings; ++i) {
    for (int j = 0; j < n_t; ++j) {
      const double theta = theta_offset + 2.0 * std::numbers::pi * double(j) / n_t;
      V.row(i * n_t + j) << radii[i] * std::cos(theta), radii[i] * std::sin(theta);
    }
  }
  Eigen::MatrixXi T(2 * (rings - 1) * n_t, 3);
  int t = 0;
  for (int i = 0; i + 1 < rings; ++i) {
    for (int j = 0; j < n_t; ++j) {
      const int v00 = i * n_t + j;
      const int v10 = (i + 1) * n_t + j;
      const int v11 = (i + 1) * n_t + (j + 1) % n_t;
      const int v01 = i * n_t + (j + 1) % n_t;
      T.row(t++) << v00, v10, v11;
      T.row(t++) << v00, v11, v01;
    }
  }
  return SimplicialMesh(std::move(V), std::move(T));
}

SimplicialMesh generate_annulus(double r_in, double r_out, int n_r, int n_t, double theta_offset) {
  if (!(r_in > 0.0 && r_in < r_out)) throw InvalidArgument("annulus requires 0 < r_in < r_out");
  if (n_r < 1) throw InvalidArgument("annulus needs at least one ring of elements");
  std::vector<double> radii(n_r + 1);
  for (int i = 0; i <= n_r; ++i) radii[i] = r_in + (r_out - r_in) * double(i) / n_r;
  radii[n_r] = r_out;
  return generate_annulus(radii, n_t, theta_offset);
}

SimplicialMesh generate_disk(const Eigen::Vector2d& center, double radius, int n_r,
                             int n_boundary, double theta_offset) {
  if (!(radius > 0.0)) throw InvalidArgument("disk radius must be positive");
  const Curve circle = [&](double s) -> Eigen::Vector2d {
    const double theta = theta_offset + 2.0 * std::numbers::pi * s;
    return center + radius * Eigen::Vector2d(std::cos(theta), std::sin(theta));
  };
  return star_mesh(center, circle, n_r, n_boundary);
}

SimplicialMesh generate_cut_disk(double radius, double offset, int side, int n_r, int n_boundary) {
  if (!(radius > 0.0)) throw InvalidArgument("disk radius must be positive");
  if (!(std::abs(offset) < radius)) throw InvalidArgument("cut offset must lie inside the disk");
  if (side != 1 && side != -1) throw InvalidArgument("side must be +1 or -1");

  // Right piece {x >= -offset}: arc over angles [-beta, beta] then the chord x = -offset.
  const double beta = std::acos(-offset / radius);
  const double arc = 2.0 * radius * beta;
  const double chord = 2.0 * radius * std::sin(beta);
  const double perimeter = arc + chord;
  const Curve right = [=](double s) -> Eigen::Vector2d {
    const double t = s * perimeter;
    if (t < arc) {
      const double theta = -beta + t / radius;
      return {radius * std::cos(theta), radius * std::sin(theta)};
    }
    return {-offset, radius * std::sin(beta) - (t - arc)};
  };
  // Mirroring reverses orientation, so traverse the mirrored curve backwards.
  const Curve curve = side == 1 ? right : Curve([=](double s) -> Eigen::Vector2d {
    const Eigen::Vector2d p = right(s == 0.0 ? 0.0 : 1.0 - s);
    return {-p.x(), p.y()};
  });
  const Eigen::Vector2d center(side * 0.5 * (radius - offset), 0.0);
  return star_mesh(center, curve, n_r, n_boundary);
}

}  // namespace decon
