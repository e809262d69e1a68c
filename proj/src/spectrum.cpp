#include "packnet/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "packnet/error.hpp"
#include "packnet/linalg.hpp"

namespace packnet {

namespace {

void require_connected(const Network& net) {
  if (net.size() == 0) throw DomainError("eigen analysis of an empty network");
  auto comps = net.components();
  if (comps.size() > 1) throw DisconnectedError(std::move(comps));
}

}  // namespace

void orient_eigenvector(Eigen::VectorXd& v) { linalg::orient(v); }

EigenPair principal_eigenpair(const Network& net, const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");
  require_connected(net);
  if (net.size() == 1) return {0.0, Eigen::VectorXd::Ones(1)};

  // Spectrum of A lies in [-d_max, d_max]; shifting by d_max / 2 keeps the
  // Perron value strictly dominant in magnitude, bipartite graphs included.
  const double shift = 0.5 * net.max_degree();
  const Eigen::VectorXd start = Eigen::VectorXd::Ones(net.size());
  auto result = linalg::power_iteration(net.adjacency(), start, shift, options.tol, options.max_iter);
  if (!result.converged) {
    throw ConvergenceError("power iteration did not converge in " + std::to_string(options.max_iter) +
                           " iterations");
  }
  EigenPair pair{result.value, std::move(result.vector)};
  orient_eigenvector(pair.vector);
  return pair;
}

EigenSet top_k_eigenpairs(const Network& net, int k, const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");
  require_connected(net);
  if (k < 1 || k > net.size()) {
    throw DomainError("k must be in [1, " + std::to_string(net.size()) + "], got " + std::to_string(k));
  }
  if (net.size() == 1) return {EigenPair{0.0, Eigen::VectorXd::Ones(1)}};

  const double shift = net.max_degree();
  auto result = linalg::subspace_iteration(net.adjacency(), k, shift, options.tol, options.max_iter, options.seed);
  if (!result.converged) {
    throw ConvergenceError("subspace iteration did not converge in " + std::to_string(options.max_iter) +
                           " iterations");
  }
  EigenSet out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    EigenPair pair{result.values[i], result.vectors.col(i)};
    orient_eigenvector(pair.vector);
    out.push_back(std::move(pair));
  }
  return out;
}

BinnedVector bin_vector(const Eigen::VectorXd& v, int nbins) {
  if (v.size() < 1) throw DomainError("cannot bin an empty vector");
  if (nbins < 1) throw DomainError("bin count must be >= 1");

  BinnedVector out;
  const double lo = v.minCoeff();
  const double hi = v.maxCoeff();
  const double width = hi > lo ? (hi - lo) / nbins : 1.0 / nbins;
  out.edges.resize(static_cast<std::size_t>(nbins) + 1);
  for (int b = 0; b <= nbins; ++b) out.edges[b] = lo + width * b;
  if (hi > lo) out.edges.back() = hi;

  out.counts.assign(static_cast<std::size_t>(nbins), 0);
  out.bin_of.resize(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    int b = hi > lo ? static_cast<int>(std::floor((v[i] - lo) / width)) : 0;
    b = std::clamp(b, 0, nbins - 1);
    out.bin_of[static_cast<std::size_t>(i)] = b;
    ++out.counts[b];
  }
  return out;
}

std::vector<CentralityClass> centrality_classes(const Eigen::VectorXd& v, double merge_tol) {
  if (!(merge_tol > 0.0)) throw DomainError("merge tolerance must be positive");
  std::vector<CentralityClass> out;
  if (v.size() == 0) return out;

  std::vector<int> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] > v[b]; });
  const double gap = merge_tol * (v.maxCoeff() - v.minCoeff());

  std::vector<std::vector<int>> groups{{order[0]}};
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (v[order[k - 1]] - v[order[k]] > gap) groups.emplace_back();
    groups.back().push_back(order[k]);
  }
  for (auto& g : groups) {
    double sum = 0.0;
    for (int i : g) sum += v[i];
    std::sort(g.begin(), g.end());
    out.push_back({sum / static_cast<double>(g.size()), std::move(g)});
  }
  return out;
}

void write_eigenvector(std::ostream& out, const Eigen::VectorXd& v, const BinnedVector& bins,
                       std::span<const std::int64_t> labels) {
  char buf[96];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const long long id = labels.empty() ? i : labels[static_cast<std::size_t>(i)];
    std::snprintf(buf, sizeof buf, "%lld %.17g %d\n", id, v[i], bins.bin_of[static_cast<std::size_t>(i)]);
    out << buf;
  }
}

void write_spectrum(std::ostream& out, const EigenSet& pairs) {
  char buf[64];
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%zu %.17g\n", r + 1, pairs[r].value);
    out << buf;
  }
}

}  // namespace packnet
