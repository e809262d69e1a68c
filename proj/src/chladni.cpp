#include "packnet/chladni.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "packnet/error.hpp"

namespace packnet {

void ChladniMode::validate() const {
  if (m < 1 || n < 1 || p < 1 || q < 1) throw DomainError("mode indices must be >= 1");
  if (c == 0.0 && d == 0.0) throw DomainError("mode amplitudes C and D are both zero");
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("plate dimensions must be positive");
}

double chladni_field(const ChladniMode& mode, double x, double y) {
  mode.validate();
  const double slack = 1e-12;
  if (!(x >= -slack * mode.a && x <= mode.a * (1 + slack) && y >= -slack * mode.b && y <= mode.b * (1 + slack))) {
    throw DomainError("point outside the plate");
  }
  using std::numbers::pi;
  // Integer multiples of pi do not evaluate to exact zeros in floating point,
  // so the clamped rim is pinned explicitly.
  if (x <= 0.0 || y <= 0.0 || x >= mode.a || y >= mode.b) return 0.0;
  const double u = x / mode.a;
  const double w = y / mode.b;
  double value = mode.c * std::sin(mode.m * pi * u) * std::sin(mode.n * pi * w);
  if (mode.d != 0.0) value += mode.d * std::sin(mode.p * pi * u) * std::sin(mode.q * pi * w);
  return value;
}

namespace {

// Node coordinates in the unit square.
Eigen::Matrix2Xd to_unit_square(const Eigen::Matrix2Xd& positions, const Box& box) {
  if (!(box.width() > 0.0) || !(box.height() > 0.0)) throw DomainError("plate box has zero extent");
  Eigen::Matrix2Xd unit(2, positions.cols());
  const double slack = 1e-9;
  for (Eigen::Index i = 0; i < positions.cols(); ++i) {
    double u = (positions(0, i) - box.x_min) / box.width();
    double w = (positions(1, i) - box.y_min) / box.height();
    if (u < -slack || u > 1 + slack || w < -slack || w > 1 + slack) throw DomainError("node outside the plate box");
    unit(0, i) = std::clamp(u, 0.0, 1.0);
    unit(1, i) = std::clamp(w, 0.0, 1.0);
  }
  return unit;
}

}  // namespace

Eigen::VectorXd sample_mode(const ChladniMode& mode, const Eigen::Matrix2Xd& positions, const Box& box) {
  mode.validate();
  const Eigen::Matrix2Xd unit = to_unit_square(positions, box);
  Eigen::VectorXd out(positions.cols());
  for (Eigen::Index i = 0; i < positions.cols(); ++i) {
    out[i] = chladni_field(mode, unit(0, i) * mode.a, unit(1, i) * mode.b);
  }
  const double norm = out.norm();
  if (norm > 0.0) out /= norm;
  return out;
}

Box plate_box(const Network& net) {
  if (!net.has_positions()) throw DomainError("plate box needs node positions");
  const auto& pos = net.positions();
  std::vector<double> lengths;
  lengths.reserve(net.edges().size());
  for (const Edge& e : net.edges()) lengths.push_back((pos.col(e.i) - pos.col(e.j)).norm());
  double pad = 0.0;
  if (!lengths.empty()) {
    auto mid = lengths.begin() + static_cast<std::ptrdiff_t>(lengths.size() / 2);
    std::nth_element(lengths.begin(), mid, lengths.end());
    pad = *mid;
  }
  const Eigen::Vector2d lo = pos.rowwise().minCoeff();
  const Eigen::Vector2d hi = pos.rowwise().maxCoeff();
  if (pad == 0.0) pad = std::max(1e-12, 0.5 * (hi - lo).maxCoeff());
  return {lo.x() - pad, hi.x() + pad, lo.y() - pad, hi.y() + pad};
}

ModeMatch match_mode(const Eigen::VectorXd& v, const Network& net, const MatchOptions& options) {
  if (options.max_index < 1) throw DomainError("max_index must be >= 1");
  if (options.ratios.empty()) throw DomainError("amplitude ratio grid is empty");
  if (v.size() != net.size()) throw DomainError("vector length does not match node count");

  const Box box = options.plate ? *options.plate : plate_box(net);
  const Eigen::Matrix2Xd unit = to_unit_square(net.positions(), box);
  const int kmax = options.max_index;
  const Eigen::Index nodes = v.size();

  // Pure products sin(m pi u) sin(n pi w), one column per (m, n).
  using std::numbers::pi;
  Eigen::MatrixXd sx(nodes, kmax), sy(nodes, kmax);
  for (int k = 0; k < kmax; ++k) {
    for (Eigen::Index i = 0; i < nodes; ++i) {
      sx(i, k) = std::sin((k + 1) * pi * unit(0, i));
      sy(i, k) = std::sin((k + 1) * pi * unit(1, i));
    }
  }
  Eigen::MatrixXd pure(nodes, kmax * kmax);
  for (int m = 0; m < kmax; ++m)
    for (int n = 0; n < kmax; ++n) pure.col(m * kmax + n) = sx.col(m).cwiseProduct(sy.col(n));
  const Eigen::VectorXd proj = pure.transpose() * v;
  const Eigen::MatrixXd gram = pure.transpose() * pure;
  const double vnorm = v.norm();

  ModeMatch best;
  best.mode = ChladniMode{};
  best.score = -1.0;
  std::vector<double> ratios = options.ratios;
  ratios.push_back(0.0);
  std::sort(ratios.begin(), ratios.end());
  ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());
  for (int m = 0; m < kmax; ++m) {
    for (int n = 0; n < kmax; ++n) {
      const int a = m * kmax + n;
      for (int p = 0; p < kmax; ++p) {
        for (int q = 0; q < kmax; ++q) {
          const int b = p * kmax + q;
          // (p, q) == (m, n) stands for the pure mode; mixtures need D != 0.
          for (double r : ratios) {
            if ((a == b) != (r == 0.0)) continue;
            const double norm2 = gram(a, a) + 2.0 * r * gram(a, b) + r * r * gram(b, b);
            double score = 0.0;
            if (norm2 > 1e-24 * nodes && vnorm > 0.0) {
              score = std::abs(proj[a] + r * proj[b]) / (vnorm * std::sqrt(norm2));
            }
            if (score > best.score + 1e-12) {
              best.score = score;
              best.mode = ChladniMode{m + 1, n + 1, p + 1, q + 1, 1.0, r};
            }
          }
        }
      }
    }
  }
  best.score = std::min(1.0, std::max(0.0, best.score));

  const Eigen::VectorXd sampled = sample_mode(best.mode, net.positions(), box);
  const double orientation = v.dot(sampled) < 0.0 ? -1.0 : 1.0;
  int agree = 0;
  for (Eigen::Index i = 0; i < nodes; ++i) agree += (v[i] * orientation * sampled[i] >= 0.0);
  best.sign_agreement = nodes ? static_cast<double>(agree) / static_cast<double>(nodes) : 0.0;
  return best;
}

void write_mode_report(std::ostream& out, const ModeMatch& match) {
  char buf[160];
  const ChladniMode& md = match.mode;
  std::snprintf(buf, sizeof buf, "%d %d %d %d %.6g %.6g %.6g\n", md.m, md.n, md.p, md.q, md.c, md.d, match.score);
  out << buf;
}

}  // namespace packnet
