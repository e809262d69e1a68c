#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "packnet/network.hpp"
#include "packnet/partition.hpp"
#include "packnet/spectrum.hpp"

namespace packnet {

/// Splits `nodes` by the sign of `v` (v[k] belongs to nodes[k]). Zero goes
/// with the non-negative group. Either side may be empty.
std::pair<std::vector<int>, std::vector<int>> sign_split(const Eigen::VectorXd& v, std::span<const int> nodes);

/// Newman-Girvan modularity Q = sum_c [e_c / m - (d_c / 2m)^2].
/// Throws DomainError on an edgeless network.
double newman_modularity(const Network& net, std::span<const int> assignment);

/// Contribution e_S / m - (d_S / 2m)^2 of one node set to Newman Q.
double newman_term(const Network& net, std::span<const int> nodes);

struct SpectralOptions {
  int max_depth = 32;
  SolverOptions solver;
};

/// One accepted bisection, for inspection and tests.
struct SplitRecord {
  int depth = 0;
  int eigen_rank = 0;  // 1-based rank of the eigenvector that split it
  std::vector<int> parent;
  std::vector<int> first;
  std::vector<int> second;
  double parent_term = 0.0;
  double children_term = 0.0;
};

/// Recursive sign bisection. For each subgraph the induced adjacency
/// eigenvectors are scanned in decreasing eigenvalue order and the first one
/// with a non-trivial sign split proposes the cut; the cut is kept when the
/// children's Newman terms sum to more than the parent's. Disconnected
/// subgraphs are first separated into their components. Community ids follow
/// the order of each community's smallest node. `score` holds Newman Q.
Partition spectral_partition(const Network& net, const SpectralOptions& options = {},
                             std::vector<SplitRecord>* trace = nullptr);

}  // namespace packnet
