#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "packnet/network.hpp"
#include "packnet/particles.hpp"

namespace packnet {

/// Stationary mode of a clamped rectangular plate:
///   C sin(m pi x / a) sin(n pi y / b) + D sin(p pi x / a) sin(q pi y / b)
struct ChladniMode {
  int m = 1;
  int n = 1;
  int p = 1;
  int q = 1;
  double c = 1.0;
  double d = 0.0;
  double a = 1.0;
  double b = 1.0;

  /// Throws DomainError unless indices >= 1, (c, d) != 0 and a, b > 0.
  void validate() const;
  bool pure() const { return d == 0.0; }
};

double chladni_field(const ChladniMode& mode, double x, double y);

/// Evaluates the mode at node positions mapped affinely from `box` onto the
/// plate and returns the unit-normalized samples. An all-zero sample (every
/// node on a nodal line) is returned as zeros.
Eigen::VectorXd sample_mode(const ChladniMode& mode, const Eigen::Matrix2Xd& positions, const Box& box);

struct ModeMatch {
  ChladniMode mode;
  double score = 0.0;           // |cos| between eigenvector and sampled mode
  double sign_agreement = 0.0;  // fraction of nodes with matching sign after orientation
};

struct MatchOptions {
  int max_index = 4;
  std::vector<double> ratios{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};  // D / C
  std::optional<Box> plate;  // defaults to plate_box(net)
};

/// Node bounding box grown by the median edge length on every side, i.e. the
/// clamped rim sits one lattice spacing outside the outermost nodes.
Box plate_box(const Network& net);

/// Exhaustive search over 1 <= m, n, p, q <= max_index and the ratio grid
/// for the mode best aligned with `v`. Pure modes are searched even when the
/// grid has no 0. Ties keep the lexicographically smallest (m, n, p, q), then
/// the smallest ratio.
ModeMatch match_mode(const Eigen::VectorXd& v, const Network& net, const MatchOptions& options = {});

/// `m n p q C D score`.
void write_mode_report(std::ostream& out, const ModeMatch& match);

}  // namespace packnet
