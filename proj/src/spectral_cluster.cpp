#include "packnet/spectral_cluster.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>

#include "packnet/error.hpp"

namespace packnet {

std::pair<std::vector<int>, std::vector<int>> sign_split(const Eigen::VectorXd& v, std::span<const int> nodes) {
  if (static_cast<std::size_t>(v.size()) != nodes.size()) throw DomainError("sign_split: size mismatch");
  std::pair<std::vector<int>, std::vector<int>> out;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    (v[static_cast<Eigen::Index>(k)] >= 0.0 ? out.first : out.second).push_back(nodes[k]);
  }
  return out;
}

double newman_term(const Network& net, std::span<const int> nodes) {
  const auto m = static_cast<double>(net.edge_count());
  if (m == 0.0) throw DomainError("modularity of an edgeless network is undefined");
  std::vector<char> inside(static_cast<std::size_t>(net.size()), 0);
  for (int i : nodes) inside[i] = 1;
  double internal = 0.0;  // counted twice
  double degree_sum = 0.0;
  for (int i : nodes) {
    degree_sum += net.degree(i);
    for (int j : net.neighbors(i)) internal += inside[j];
  }
  const double frac = degree_sum / (2.0 * m);
  return 0.5 * internal / m - frac * frac;
}

double newman_modularity(const Network& net, std::span<const int> assignment) {
  if (assignment.size() != static_cast<std::size_t>(net.size())) throw DomainError("assignment size mismatch");
  const auto m = static_cast<double>(net.edge_count());
  if (m == 0.0) throw DomainError("modularity of an edgeless network is undefined");
  const int c = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<double> internal(static_cast<std::size_t>(c), 0.0), degree(static_cast<std::size_t>(c), 0.0);
  for (const Edge& e : net.edges()) {
    if (assignment[e.i] == assignment[e.j]) internal[assignment[e.i]] += 1.0;
  }
  for (int i = 0; i < net.size(); ++i) degree[assignment[i]] += net.degree(i);
  double q = 0.0;
  for (int k = 0; k < c; ++k) {
    const double frac = degree[k] / (2.0 * m);
    q += internal[k] / m - frac * frac;
  }
  return q;
}

Partition spectral_partition(const Network& net, const SpectralOptions& options, std::vector<SplitRecord>* trace) {
  const int n = net.size();
  if (n == 0) return {};
  if (net.edge_count() == 0) {
    std::vector<int> singletons(static_cast<std::size_t>(n));
    std::iota(singletons.begin(), singletons.end(), 0);
    return make_partition(std::move(singletons), 0.0);
  }

  std::vector<std::vector<int>> finished;

  std::function<void(std::vector<int>, int)> process = [&](std::vector<int> nodes, int depth) {
    const Network sub = net.induced(nodes);
    auto comps = sub.components();
    if (comps.size() > 1) {
      for (auto& comp : comps) {
        for (int& k : comp) k = nodes[k];
        process(std::move(comp), depth);
      }
      return;
    }
    if (nodes.size() < 2 || depth >= options.max_depth) {
      finished.push_back(std::move(nodes));
      return;
    }

    // Leading eigenvectors first; the principal one is single-signed on a
    // connected subgraph, so the cut normally comes from the second.
    const int size = static_cast<int>(nodes.size());
    std::pair<std::vector<int>, std::vector<int>> cut;
    int rank = 0;
    for (int k = std::min(size, 2); rank == 0; k = std::min(size, 2 * k)) {
      const EigenSet pairs = top_k_eigenpairs(sub, k, options.solver);
      for (int r = 0; r < k; ++r) {
        auto candidate = sign_split(pairs[r].vector, nodes);
        if (!candidate.first.empty() && !candidate.second.empty()) {
          cut = std::move(candidate);
          rank = r + 1;
          break;
        }
      }
      if (k == size) break;
    }
    if (rank == 0) {
      finished.push_back(std::move(nodes));
      return;
    }

    const double parent_term = newman_term(net, nodes);
    const double children_term = newman_term(net, cut.first) + newman_term(net, cut.second);
    if (!(children_term > parent_term)) {
      finished.push_back(std::move(nodes));
      return;
    }
    if (trace) trace->push_back({depth, rank, nodes, cut.first, cut.second, parent_term, children_term});
    process(std::move(cut.first), depth + 1);
    process(std::move(cut.second), depth + 1);
  };

  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  process(std::move(all), 0);

  std::sort(finished.begin(), finished.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < finished.size(); ++c) {
    for (int i : finished[c]) assignment[i] = static_cast<int>(c);
  }
  Partition out = make_partition(std::move(assignment));
  out.score = newman_modularity(net, out.assignment);
  return out;
}

}  // namespace packnet
