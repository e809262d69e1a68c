#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "oracles/jacobi.hpp"
#include "packnet/network.hpp"
#include "packnet/particles.hpp"

namespace fixtures {

// Triangle 0-1-2 with a pendant 3 hanging off node 2, laid out as touching
// unit discs.
inline packnet::ParticleSet paw_particles(double r = 1e-3) {
  const double h = std::sqrt(3.0) * r;
  return packnet::make_particle_set({
      {{0.0, 0.0}, r, packnet::sphere_mass(r)},
      {{2 * r, 0.0}, r, packnet::sphere_mass(r)},
      {{r, h}, r, packnet::sphere_mass(r)},
      {{r, h + 2 * r}, r, packnet::sphere_mass(r)},
  });
}

inline packnet::Network paw() { return packnet::build_adjacency(paw_particles()); }

// Nodes spread on a unit circle so the Potts cutoff has positions to use.
inline Eigen::Matrix2Xd ring_positions(int n, double radius = 1.0) {
  Eigen::Matrix2Xd pos(2, n);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * i / n;
    pos.col(i) << radius * std::cos(t), radius * std::sin(t);
  }
  return pos;
}

inline packnet::Network complete(int n) {
  std::vector<packnet::Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  return {n, edges, ring_positions(n)};
}

inline packnet::Network path(int n) {
  std::vector<packnet::Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return {n, edges, ring_positions(n)};
}

// Disjoint cliques; clique c sits on a small ring centered 100 units from
// the others so a short cutoff never reaches across.
inline packnet::Network cliques(const std::vector<int>& sizes, const std::vector<packnet::Edge>& extra = {}) {
  int n = 0;
  for (int s : sizes) n += s;
  std::vector<packnet::Edge> edges = extra;
  Eigen::Matrix2Xd pos(2, n);
  int base = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    const Eigen::Matrix2Xd ring = ring_positions(sizes[c]);
    for (int i = 0; i < sizes[c]; ++i) {
      pos.col(base + i) = ring.col(i) + Eigen::Vector2d(100.0 * static_cast<double>(c), 0.0);
      for (int j = i + 1; j < sizes[c]; ++j) edges.push_back({base + i, base + j});
    }
    base += sizes[c];
  }
  return {n, edges, pos};
}

// Two K4s (0..3, 4..7) joined by the bridge 3-4.
inline packnet::Network bridged_k4() { return cliques({4, 4}, {{3, 4}}); }

// Random geometric graph in the unit square with connection radius `reach`,
// redrawn until connected.
inline packnet::Network random_geometric(int n, double reach, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    Eigen::Matrix2Xd pos(2, n);
    for (int i = 0; i < n; ++i) pos.col(i) << u(rng), u(rng);
    std::vector<packnet::Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if ((pos.col(i) - pos.col(j)).norm() < reach) edges.push_back({i, j});
    packnet::Network net(n, edges, pos);
    if (net.connected() && net.edge_count() > 0) return net;
  }
}

inline oracle::DenseMatrix<double> dense(const packnet::Network& net) {
  oracle::DenseMatrix<double> a(static_cast<std::size_t>(net.size()),
                                std::vector<double>(static_cast<std::size_t>(net.size()), 0.0));
  for (const auto& e : net.edges()) a[e.i][e.j] = a[e.j][e.i] = 1.0;
  return a;
}

}  // namespace fixtures
