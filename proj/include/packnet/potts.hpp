#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "packnet/network.hpp"
#include "packnet/partition.hpp"
#include "packnet/particles.hpp"

namespace packnet {

/// Neighborhood cutoff x_c for the missing-edge penalty. Pairs are summed
/// once each (i < j).
struct PottsParams {
  double cutoff = 0.0;  // meters
};

/// x_c = 2.5 mean particle diameters: nearest and next-nearest neighbors of a
/// triangular packing.
PottsParams default_potts_params(const ParticleSet& set);

/// Pair weights w_ij = a_ij A_ij - theta(x_c - |r_i - r_j|) |b_ij| (1 - A_ij)
/// with a_ij = b_ij = (k_i + k_j) / 2 - <k>. Only non-zero weights are kept.
///
/// With these, Q(sigma) = (1 / 2m) sum_{i<j} w_ij (2 delta(sigma_i, sigma_j) - 1).
class PottsWeights {
 public:
  PottsWeights(const Network& net, const PottsParams& params);

  struct Entry {
    int node;
    double weight;
  };

  int size() const { return static_cast<int>(offsets_.size()) - 1; }
  double edge_count() const { return m_; }
  /// Sum of w_ij over all pairs i < j.
  double total() const { return total_; }
  std::span<const Entry> row(int i) const {
    return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
  }
  /// Strength a_ij = b_ij of a pair.
  double strength(int i, int j) const;

  /// Q from the within-community weight sum S_in: (2 S_in - total) / 2m.
  double modularity_from_internal(double internal) const { return (2.0 * internal - total_) / (2.0 * m_); }

 private:
  std::vector<int> offsets_;
  std::vector<Entry> entries_;
  std::vector<int> degrees_;
  double mean_degree_ = 0.0;
  double m_ = 0.0;
  double total_ = 0.0;
};

/// Potts modularity of a community assignment. Throws DomainError when the
/// network has no edges or no positions.
double potts_modularity(const Network& net, std::span<const int> assignment, const PottsParams& params);

inline constexpr int kMaxBruteForceNodes = 12;

/// Exhaustive maximizer over all set partitions (n <= 12). Ties prefer fewer
/// communities, then the lexicographically smallest canonical assignment.
Partition brute_force_best_partition(const Network& net, const PottsParams& params);

struct GreedyOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
};

/// Greedy local search: from singletons, move single nodes to the community
/// (or a fresh one) with the largest gain while the gain is positive, then
/// merge community pairs while that helps; repeat until neither step
/// improves. The first restart sweeps nodes in index order, later ones in a
/// seeded shuffled order. The best restart wins, with the same tie rules as
/// the exhaustive search.
Partition maximize_modularity(const Network& net, const PottsParams& params, const GreedyOptions& options = {});

}  // namespace packnet
