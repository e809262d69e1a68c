#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "packnet/particles.hpp"

namespace packnet {

/// Undirected edge, always stored with i < j.
struct Edge {
  int i = 0;
  int j = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Unweighted undirected contact graph with optional node positions.
///
/// Immutable after construction. Stores the edge list, a CSR neighbor table,
/// the degree vector and the 0/1 adjacency as an Eigen sparse matrix.
class Network {
 public:
  Network() = default;

  /// Edges may be given in either orientation; self loops, out-of-range
  /// endpoints and repeated edges throw ValidationError. `positions` is
  /// either empty or 2 x n.
  Network(int n, std::vector<Edge> edges, Eigen::Matrix2Xd positions = {});

  int size() const { return n_; }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const int> neighbors(int i) const {
    return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
  }
  int degree(int i) const { return degrees_[i]; }
  const Eigen::VectorXi& degrees() const { return degrees_; }
  int max_degree() const { return n_ ? degrees_.maxCoeff() : 0; }
  bool has_edge(int i, int j) const;

  const Eigen::SparseMatrix<double>& adjacency() const { return matrix_; }

  bool has_positions() const { return positions_.cols() == n_ && n_ > 0; }
  const Eigen::Matrix2Xd& positions() const { return positions_; }

  /// Subgraph induced by `nodes`; node k of the result is nodes[k].
  Network induced(std::span<const int> nodes) const;

  /// Components as ascending node lists, ordered by their smallest node.
  std::vector<std::vector<int>> components() const;
  bool connected() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<int> adj_;
  Eigen::VectorXi degrees_;
  Eigen::SparseMatrix<double> matrix_;
  Eigen::Matrix2Xd positions_;
};

inline constexpr double kDefaultContactTolerance = 1e-3;

/// Contact graph: edge {i,j} iff |r_i - r_j| <= (R_i + R_j)(1 + tolerance).
/// Centers closer than 1e-9 m are rejected as duplicate nodes.
Network build_adjacency(const ParticleSet& set, double tolerance = kDefaultContactTolerance);

/// Mean degree (1/N) sum k_r.
double average_degree(const Network& net);

std::map<int, int> coordination_histogram(const Network& net);

/// Binary PGM (P5, maxval 255): 255 where A(i,j) = 1, 0 elsewhere.
void export_adjacency_image(const Network& net, std::ostream& out);
void export_adjacency_image(const Network& net, const std::filesystem::path& path);

/// Text lines `i j` with i < j.
void write_edge_list(const Network& net, std::ostream& out);
void write_edge_list(const Network& net, const std::filesystem::path& path);
Network read_edge_list(std::istream& in, int n = -1);

}  // namespace packnet
