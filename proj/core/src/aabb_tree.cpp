#include <algorithm>
#include <numeric>

#include "decon/geometry.hpp"

namespace decon {
namespace {
constexpr int kLeafSize = 8;
}

AabbTree::AabbTree(const SimplicialMesh& mesh) : mesh_(&mesh) {
  const int t = mesh.simplex_count();
  const int d = mesh.dim();
  const auto& V = mesh.vertices();
  const auto& T = mesh.simplices();
  lo_.resize(t, d);
  hi_.resize(t, d);
  for (int s = 0; s < t; ++s) {
    lo_.row(s) = V.row(T(s, 0));
    hi_.row(s) = V.row(T(s, 0));
    for (int c = 1; c <= d; ++c) {
      lo_.row(s) = lo_.row(s).cwiseMin(V.row(T(s, c)));
      hi_.row(s) = hi_.row(s).cwiseMax(V.row(T(s, c)));
    }
  }
  // A point whose barycentric coordinates are >= -tol is at most tol * diag
  // outside its simplex; pad boxes generously beyond that.
  pad_ = 10.0 * containment_tolerance(mesh) * std::max(1.0, mesh.bbox_diagonal());
  order_.resize(t);
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * (t / kLeafSize + 1));
  build(0, t);
}

int AabbTree::build(int begin, int end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Eigen::VectorXd lo = lo_.row(order_[begin]).transpose();
  Eigen::VectorXd hi = hi_.row(order_[begin]).transpose();
  for (int i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(lo_.row(order_[i]).transpose());
    hi = hi.cwiseMax(hi_.row(order_[i]).transpose());
  }
  nodes_[id].lo = lo.array() - pad_;
  nodes_[id].hi = hi.array() + pad_;

  if (end - begin <= kLeafSize) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     const double ca = lo_(a, axis) + hi_(a, axis);
                     const double cb = lo_(b, axis) + hi_(b, axis);
                     return ca < cb || (ca == cb && a < b);
                   });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<int> AabbTree::candidates(const Point& p) const {
  std::vector<int> out;
  if (nodes_.empty()) return out;
  std::vector<int> stack{0};
  const int d = mesh_->dim();
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    if ((p.array() < n.lo.array()).any() || (p.array() > n.hi.array()).any()) continue;
    if (n.left < 0) {
      for (int i = n.begin; i < n.end; ++i) {
        const int s = order_[i];
        bool inside = true;
        for (int c = 0; c < d && inside; ++c)
          inside = p(c) >= lo_(s, c) - pad_ && p(c) <= hi_(s, c) + pad_;
        if (inside) out.push_back(s);
      }
    } else {
      stack.push_back(n.left);
      stack.push_back(n.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace decon
