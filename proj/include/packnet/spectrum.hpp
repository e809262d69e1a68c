#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "packnet/network.hpp"

namespace packnet {

/// Eigenvalue of the adjacency matrix with its unit eigenvector.
struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// Pairs in descending eigenvalue order, mutually orthonormal.
using EigenSet = std::vector<EigenPair>;

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  std::uint64_t seed = 7;  // start block of the top-k solver
};

/// Principal (Perron) pair by shifted power iteration. The vector is oriented
/// so its components sum to a positive value, which makes every component
/// non-negative on a connected graph.
///
/// Throws DisconnectedError for graphs with several components and
/// ConvergenceError when `max_iter` is exhausted.
EigenPair principal_eigenpair(const Network& net, const SolverOptions& options = {});

/// The `k` algebraically largest pairs (1 <= k <= n) by block orthogonal
/// iteration with Rayleigh-Ritz projection. Deterministic for a fixed seed.
EigenSet top_k_eigenpairs(const Network& net, int k, const SolverOptions& options = {});

/// Applies the sign convention used by both solvers.
void orient_eigenvector(Eigen::VectorXd& v);

/// Equal-width histogram of vector components.
struct BinnedVector {
  std::vector<double> edges;  // nbins + 1, strictly increasing
  std::vector<int> bin_of;    // per component
  std::vector<int> counts;    // per bin

  int bins() const { return static_cast<int>(counts.size()); }
};

/// Bins over [min(v), max(v)]; the maximum lands in the last bin. A constant
/// vector puts every component in bin 0 of unit-span edges starting at the
/// value.
BinnedVector bin_vector(const Eigen::VectorXd& v, int nbins = 10);

struct CentralityClass {
  double level = 0.0;      // mean component of the class
  std::vector<int> nodes;  // ascending
};

/// Groups nodes whose components differ by at most merge_tol * range
/// (single-linkage over the sorted values). Classes come out most central
/// first.
std::vector<CentralityClass> centrality_classes(const Eigen::VectorXd& v, double merge_tol = 1e-6);

/// `node_id component bin_index` per line. `labels` may be empty (row ids).
void write_eigenvector(std::ostream& out, const Eigen::VectorXd& v, const BinnedVector& bins,
                       std::span<const std::int64_t> labels = {});
/// `rank lambda` per line, rank starting at 1.
void write_spectrum(std::ostream& out, const EigenSet& pairs);

}  // namespace packnet
