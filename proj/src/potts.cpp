#include "packnet/potts.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "packnet/error.hpp"
#include "packnet/geometry.hpp"

namespace packnet {

namespace {

constexpr double kGainEps = 1e-12;

// Is `a` a strictly better result than `b`? Higher Q, then fewer
// communities, then the smaller canonical assignment.
bool better(const Partition& a, const Partition& b, double q_eps) {
  if (a.score > b.score + q_eps) return true;
  if (a.score < b.score - q_eps) return false;
  if (a.count != b.count) return a.count < b.count;
  return a.assignment < b.assignment;
}

}  // namespace

PottsParams default_potts_params(const ParticleSet& set) {
  if (set.empty()) throw DomainError("default cutoff needs at least one particle");
  double sum = 0.0;
  for (const Particle& p : set.particles) sum += 2.0 * p.radius;
  return {2.5 * sum / static_cast<double>(set.size())};
}

PottsWeights::PottsWeights(const Network& net, const PottsParams& params) {
  const int n = net.size();
  if (net.edge_count() == 0) throw DomainError("Potts modularity needs at least one edge");
  if (!net.has_positions()) throw DomainError("Potts modularity needs node positions");
  if (!(params.cutoff > 0.0)) throw DomainError("cutoff distance must be positive");

  m_ = static_cast<double>(net.edge_count());
  mean_degree_ = 2.0 * m_ / n;
  degrees_.assign(net.degrees().data(), net.degrees().data() + n);

  std::map<std::pair<int, int>, double> pairs;
  for (const Edge& e : net.edges()) pairs[{e.i, e.j}] = strength(e.i, e.j);
  for_each_pair_within(net.positions(), params.cutoff, [&](int i, int j, double dist) {
    if (dist < params.cutoff && !net.has_edge(i, j)) pairs[{i, j}] = -std::abs(strength(i, j));
  });

  std::vector<int> count(static_cast<std::size_t>(n), 0);
  for (const auto& [key, w] : pairs) {
    if (w == 0.0) continue;
    ++count[key.first];
    ++count[key.second];
    total_ += w;
  }
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + count[i];
  entries_.resize(static_cast<std::size_t>(offsets_[n]));
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [key, w] : pairs) {
    if (w == 0.0) continue;
    entries_[fill[key.first]++] = {key.second, w};
    entries_[fill[key.second]++] = {key.first, w};
  }
}

double PottsWeights::strength(int i, int j) const {
  return 0.5 * (degrees_[i] + degrees_[j]) - mean_degree_;
}

double potts_modularity(const Network& net, std::span<const int> assignment, const PottsParams& params) {
  if (assignment.size() != static_cast<std::size_t>(net.size())) throw DomainError("assignment size mismatch");
  const PottsWeights weights(net, params);
  double internal = 0.0;
  for (int i = 0; i < weights.size(); ++i) {
    for (const auto& [j, w] : weights.row(i)) {
      if (j > i && assignment[i] == assignment[j]) internal += w;
    }
  }
  return weights.modularity_from_internal(internal);
}

Partition brute_force_best_partition(const Network& net, const PottsParams& params) {
  const int n = net.size();
  if (n > kMaxBruteForceNodes) {
    throw DomainError("exhaustive search limited to " + std::to_string(kMaxBruteForceNodes) + " nodes, got " +
                      std::to_string(n));
  }
  const PottsWeights weights(net, params);
  std::vector<std::vector<double>> w(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (const auto& [j, wij] : weights.row(i)) w[i][j] = wij;

  // Restricted growth strings in lexicographic order.
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  Partition best;
  best.score = -std::numeric_limits<double>::infinity();
  const double q_eps = 1e-12;

  auto dfs = [&](auto&& self, int i, int used, double internal) -> void {
    if (i == n) {
      const double q = weights.modularity_from_internal(internal);
      if (q > best.score + q_eps || (q >= best.score - q_eps && used < best.count)) {
        best.assignment = rgs;
        best.count = used;
        best.score = q;
      }
      return;
    }
    for (int c = 0; c <= used && c < n; ++c) {
      double gain = 0.0;
      for (int j = 0; j < i; ++j) {
        if (rgs[j] == c) gain += w[i][j];
      }
      rgs[i] = c;
      self(self, i + 1, std::max(used, c + 1), internal + gain);
    }
  };
  dfs(dfs, 0, 0, 0.0);
  best.score = potts_modularity(net, best.assignment, params);
  return best;
}

namespace {

class GreedyState {
 public:
  explicit GreedyState(const PottsWeights& weights)
      : weights_(weights),
        comm_(static_cast<std::size_t>(weights.size())),
        size_(static_cast<std::size_t>(weights.size()), 1),
        scratch_(static_cast<std::size_t>(weights.size()), 0.0) {
    std::iota(comm_.begin(), comm_.end(), 0);
  }

  double internal() const { return internal_; }
  const std::vector<int>& assignment() const { return comm_; }

  // One pass over `order`; returns whether any node moved.
  bool sweep(const std::vector<int>& order) {
    bool moved = false;
    for (int i : order) moved |= move_node(i);
    return moved;
  }

  bool merge_once() {
    std::map<std::pair<int, int>, double> between;
    for (int i = 0; i < weights_.size(); ++i) {
      for (const auto& [j, w] : weights_.row(i)) {
        if (j <= i || comm_[i] == comm_[j]) continue;
        between[{std::min(comm_[i], comm_[j]), std::max(comm_[i], comm_[j])}] += w;
      }
    }
    std::pair<int, int> pick{-1, -1};
    double gain = kGainEps;
    for (const auto& [key, w] : between) {
      if (w > gain) {
        gain = w;
        pick = key;
      }
    }
    if (pick.first < 0) return false;
    for (int& c : comm_) {
      if (c == pick.second) c = pick.first;
    }
    size_[pick.first] += size_[pick.second];
    size_[pick.second] = 0;
    advance(gain);
    return true;
  }

 private:
  bool move_node(int i) {
    const int own = comm_[i];
    touched_.clear();
    for (const auto& [j, w] : weights_.row(i)) {
      const int c = comm_[j];
      if (scratch_[c] == 0.0) touched_.push_back(c);
      scratch_[c] += w;
    }
    const double stay = scratch_[own];
    std::sort(touched_.begin(), touched_.end());

    int target = own;
    double gain = kGainEps;
    for (int c : touched_) {
      if (c != own && scratch_[c] - stay > gain) {
        gain = scratch_[c] - stay;
        target = c;
      }
    }
    // A fresh community is the last candidate.
    if (size_[own] > 1 && -stay > gain) {
      gain = -stay;
      target = static_cast<int>(std::find(size_.begin(), size_.end(), 0) - size_.begin());
    }
    for (int c : touched_) scratch_[c] = 0.0;
    scratch_[own] = 0.0;
    if (target == own) return false;

    comm_[i] = target;
    --size_[own];
    ++size_[target];
    advance(gain);
    return true;
  }

  void advance(double gain) {
    assert(gain > 0.0);
    internal_ += gain;
  }

  const PottsWeights& weights_;
  std::vector<int> comm_;
  std::vector<int> size_;
  std::vector<double> scratch_;
  std::vector<int> touched_;
  double internal_ = 0.0;
};

}  // namespace

Partition maximize_modularity(const Network& net, const PottsParams& params, const GreedyOptions& options) {
  if (options.restarts < 1) throw DomainError("restarts must be >= 1");
  const PottsWeights weights(net, params);
  const int n = net.size();

  std::mt19937_64 rng(options.seed);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  Partition best;
  best.score = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    if (r > 0) std::shuffle(order.begin(), order.end(), rng);
    GreedyState state(weights);
    bool changed = true;
    while (changed) {
      while (state.sweep(order)) {
      }
      changed = false;
      while (state.merge_once()) changed = true;
    }
    Partition candidate = make_partition(state.assignment());
    candidate.score = potts_modularity(net, candidate.assignment, params);
    if (better(candidate, best, 1e-12)) best = std::move(candidate);
  }
  return best;
}

}  // namespace packnet
