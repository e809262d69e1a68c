#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace packnet {

/// Calls `visit(i, j)` once for every unordered pair i < j whose centers lie
/// within `reach` of each other. Uses a uniform cell grid; pairs are visited
/// in a fixed order for fixed input.
void for_each_pair_within(const Eigen::Matrix2Xd& positions, double reach,
                          const std::function<void(int, int, double)>& visit);

/// Convex hull in counter-clockwise order (Andrew's monotone chain), returned
/// as point indices. Collinear boundary points are dropped.
std::vector<int> convex_hull(const Eigen::Matrix2Xd& positions);

/// Distance from `p` to the closest edge of the polygon given by `hull`
/// (indices into `positions`). Degenerate hulls fall back to point/segment
/// distance.
double distance_to_hull(const Eigen::Vector2d& p, const Eigen::Matrix2Xd& positions,
                        const std::vector<int>& hull);

}  // namespace packnet
