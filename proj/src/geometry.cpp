#include "packnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace packnet {

void for_each_pair_within(const Eigen::Matrix2Xd& positions, double reach,
                          const std::function<void(int, int, double)>& visit) {
  const auto n = static_cast<int>(positions.cols());
  if (n < 2 || !(reach >= 0.0)) return;

  const Eigen::Vector2d lo = positions.rowwise().minCoeff();
  const Eigen::Vector2d hi = positions.rowwise().maxCoeff();
  const Eigen::Vector2d extent = hi - lo;

  // Keep the grid at O(n) cells even when `reach` is tiny.
  double cell = reach;
  const double min_cell = std::sqrt(std::max(extent.x() * extent.y(), 0.0) / (4.0 * n));
  cell = std::max({cell, min_cell, extent.maxCoeff() / 4096.0, std::numeric_limits<double>::min()});

  const int nx = static_cast<int>(extent.x() / cell) + 1;
  const int ny = static_cast<int>(extent.y() / cell) + 1;
  auto cell_of = [&](int i) {
    const int cx = std::min(nx - 1, static_cast<int>((positions(0, i) - lo.x()) / cell));
    const int cy = std::min(ny - 1, static_cast<int>((positions(1, i) - lo.y()) / cell));
    return cy * nx + cx;
  };

  // Counting sort of points into cells.
  std::vector<int> start(static_cast<std::size_t>(nx) * ny + 1, 0);
  std::vector<int> cell_id(n);
  for (int i = 0; i < n; ++i) {
    cell_id[i] = cell_of(i);
    ++start[cell_id[i] + 1];
  }
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<int> members(n);
  std::vector<int> fill(start.begin(), start.end() - 1);
  for (int i = 0; i < n; ++i) members[fill[cell_id[i]]++] = i;

  const double reach2 = reach * reach;
  auto check = [&](int a, int b) {
    const double d2 = (positions.col(a) - positions.col(b)).squaredNorm();
    if (d2 <= reach2) visit(std::min(a, b), std::max(a, b), std::sqrt(d2));
  };

  static constexpr int kForward[4][2] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  for (int cy = 0; cy < ny; ++cy) {
    for (int cx = 0; cx < nx; ++cx) {
      const int c = cy * nx + cx;
      for (int a = start[c]; a < start[c + 1]; ++a) {
        for (int b = a + 1; b < start[c + 1]; ++b) check(members[a], members[b]);
      }
      for (const auto& d : kForward) {
        const int ox = cx + d[0];
        const int oy = cy + d[1];
        if (ox < 0 || ox >= nx || oy >= ny) continue;
        const int o = oy * nx + ox;
        for (int a = start[c]; a < start[c + 1]; ++a) {
          for (int b = start[o]; b < start[o + 1]; ++b) check(members[a], members[b]);
        }
      }
    }
  }
}

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

std::vector<int> convex_hull(const Eigen::Matrix2Xd& positions) {
  const auto n = static_cast<int>(positions.cols());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return positions(0, a) != positions(0, b) ? positions(0, a) < positions(0, b) : positions(1, a) < positions(1, b);
  });
  if (n < 3) return idx;

  std::vector<int> hull(2 * static_cast<std::size_t>(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(positions.col(hull[k - 2]), positions.col(hull[k - 1]), positions.col(idx[i])) <= 0) --k;
    hull[k++] = idx[i];
  }
  for (int i = n - 2, t = k + 1; i >= 0; --i) {
    while (k >= t && cross(positions.col(hull[k - 2]), positions.col(hull[k - 1]), positions.col(idx[i])) <= 0) --k;
    hull[k++] = idx[i];
  }
  hull.resize(k - 1);
  return hull;
}

double distance_to_hull(const Eigen::Vector2d& p, const Eigen::Matrix2Xd& positions, const std::vector<int>& hull) {
  if (hull.empty()) return std::numeric_limits<double>::infinity();
  if (hull.size() == 1) return (p - positions.col(hull[0])).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < hull.size(); ++e) {
    const auto a = positions.col(hull[e]);
    const auto b = positions.col(hull[(e + 1) % hull.size()]);
    best = std::min(best, segment_distance(p, a, b));
  }
  return best;
}

}  // namespace packnet
