#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles/brute.hpp"
#include "packnet/error.hpp"
#include "packnet/potts.hpp"

using namespace packnet;

namespace {

constexpr double kAllPairs = 1.0;  // larger than any paw distance (meters)

}  // namespace

TEST(PottsModularity, PawHandEvaluation) {
  const Network net = fixtures::paw();
  const PottsParams all{kAllPairs};
  EXPECT_DOUBLE_EQ(potts_modularity(net, std::vector<int>{0, 0, 0, 1}, all), 0.25);
  EXPECT_DOUBLE_EQ(potts_modularity(net, std::vector<int>{0, 0, 0, 0}, all), 0.0);
  EXPECT_DOUBLE_EQ(oracle::potts_q(net, {0, 0, 0, 1}, kAllPairs), 0.25);
}

TEST(PottsModularity, Guards) {
  EXPECT_THROW(potts_modularity(Network(2, {}, fixtures::ring_positions(2)), std::vector<int>{0, 0}, {1.0}),
               DomainError);
  EXPECT_THROW(potts_modularity(Network(2, {{0, 1}}), std::vector<int>{0, 0}, {1.0}), DomainError);
  EXPECT_THROW(potts_modularity(fixtures::paw(), std::vector<int>{0, 0}, {1.0}), DomainError);
  EXPECT_THROW(PottsWeights(fixtures::paw(), {0.0}), DomainError);
}

TEST(PottsModularity, CutoffExcludesDistantMissingEdges) {
  // Path 0-1-2 on a ring of radius 1: with the cutoff below every distance,
  // only the connected terms remain. Strengths are 1.5 - 4/3 = 1/6 on both
  // edges, so Q = (1/6 + 1/6) / 4 for one community.
  const Network net = fixtures::path(3);
  EXPECT_NEAR(potts_modularity(net, std::vector<int>{0, 0, 0}, {0.1}), 1.0 / 12.0, 1e-15);
  // With all pairs in reach the missing edge {0,2} (strength 1 - 4/3) adds
  // -|-1/3| inside the community.
  EXPECT_NEAR(potts_modularity(net, std::vector<int>{0, 0, 0}, {10.0}), (1.0 / 3.0 - 1.0 / 3.0) / 4.0, 1e-15);
  // K2: the only pair is an edge, strength 1 - 1 = 0.
  EXPECT_DOUBLE_EQ(potts_modularity(fixtures::complete(2), std::vector<int>{0, 0}, {0.1}), 0.0);
}

TEST(PottsModularity, AgreesWithTermByTermOracle) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> label(0, 2);
  for (int t = 0; t < 40; ++t) {
    const Network net = fixtures::random_geometric(9, 0.45, rng);
    std::vector<int> sigma(9);
    for (int& s : sigma) s = label(rng);
    for (double xc : {0.3, 0.7, 2.0}) {
      EXPECT_NEAR(potts_modularity(net, sigma, {xc}), oracle::potts_q(net, sigma, xc), 1e-12);
    }
  }
}

TEST(PottsModularity, RelabelingInvariant) {
  const Network net = build_adjacency(generate_hex_packing(2));
  const PottsParams params = default_potts_params(generate_hex_packing(2));
  std::vector<int> sigma(19);
  for (int i = 0; i < 19; ++i) sigma[i] = i % 3;
  std::vector<int> relabeled = sigma;
  for (int& s : relabeled) s = (s + 1) % 3 + 7;
  EXPECT_EQ(potts_modularity(net, sigma, params), potts_modularity(net, relabeled, params));
}

TEST(DefaultParams, TwoAndAHalfDiameters) {
  EXPECT_DOUBLE_EQ(default_potts_params(generate_hex_packing(1, 2e-3)).cutoff, 1e-2);
  EXPECT_THROW(default_potts_params(ParticleSet{}), DomainError);
}

TEST(BruteForce, Examples) {
  const Partition paw = brute_force_best_partition(fixtures::paw(), {kAllPairs});
  EXPECT_EQ(paw.assignment, (std::vector<int>{0, 0, 0, 1}));
  EXPECT_DOUBLE_EQ(paw.score, 0.25);

  // Two 2-regular triangles: every strength (k_i + k_j)/2 - <k> is zero, so
  // the split into triangles ties with everything at Q = 0 and the tie rule
  // keeps one community.
  const Network two_k3 = fixtures::cliques({3, 3});
  const Partition triangles = brute_force_best_partition(two_k3, {2.5});
  EXPECT_DOUBLE_EQ(triangles.score, 0.0);
  EXPECT_DOUBLE_EQ(potts_modularity(two_k3, std::vector<int>{0, 0, 0, 1, 1, 1}, {2.5}), triangles.score);
  EXPECT_EQ(triangles.count, 1);

  const Partition k4 = brute_force_best_partition(fixtures::complete(4), {10.0});
  EXPECT_EQ(k4.count, 1);

  EXPECT_THROW(brute_force_best_partition(fixtures::path(13), {1.0}), DomainError);
}

TEST(BruteForce, MatchesIndependentEnumeration) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const Network net = fixtures::random_geometric(8, 0.5, rng);
    const Partition p = brute_force_best_partition(net, {0.6});
    EXPECT_NEAR(p.score, oracle::best_potts_q(net, 0.6), 1e-12);
  }
}

TEST(BruteForce, ArgmaxInvariantUnderCommonScaling) {
  // Scaling every position scales nothing in the weights, but scaling the
  // cutoff with them must keep the selected partition.
  std::mt19937_64 rng(31);
  for (int t = 0; t < 5; ++t) {
    const Network net = fixtures::random_geometric(8, 0.5, rng);
    const Network scaled(net.size(), net.edges(), 3.0 * net.positions());
    EXPECT_EQ(brute_force_best_partition(net, {0.6}).assignment,
              brute_force_best_partition(scaled, {1.8}).assignment);
  }
}

TEST(Greedy, PawMatchesOracle) {
  const Partition p = maximize_modularity(fixtures::paw(), {kAllPairs});
  EXPECT_EQ(p.assignment, (std::vector<int>{0, 0, 0, 1}));
  EXPECT_DOUBLE_EQ(p.score, 0.25);
}

TEST(Greedy, DominatesTrivialPartitionsOnHex) {
  const ParticleSet set = generate_hex_packing(2);
  const Network net = build_adjacency(set);
  const PottsParams params{2.1 * 2 * 1e-3};
  const Partition p = maximize_modularity(net, params);
  std::vector<int> one(19, 0), singles(19);
  for (int i = 0; i < 19; ++i) singles[i] = i;
  EXPECT_GE(p.score, potts_modularity(net, one, params) - 1e-12);
  EXPECT_GE(p.score, potts_modularity(net, singles, params) - 1e-12);
  EXPECT_NEAR(p.score, potts_modularity(net, p.assignment, params), 1e-12);
}

TEST(Greedy, EqualsOracleOnSmallFixtures) {
  std::mt19937_64 rng(77);
  int matched = 0, total = 0;
  for (int t = 0; t < 30; ++t) {
    const Network net = fixtures::random_geometric(7 + t % 4, 0.45, rng);
    const Partition greedy = maximize_modularity(net, {0.6}, {.restarts = 8, .seed = 1});
    const Partition exact = brute_force_best_partition(net, {0.6});
    EXPECT_LE(greedy.score, exact.score + 1e-12);
    matched += greedy.score >= exact.score - 1e-12;
    ++total;
  }
  EXPECT_GE(matched, total * 9 / 10);
}

TEST(Greedy, CliqueUnionsMatchOracle) {
  for (const auto& sizes : std::vector<std::vector<int>>{{3, 3}, {3, 4}, {4, 5}, {3, 4, 5}}) {
    const Network net = fixtures::cliques(sizes, {{0, sizes[0]}});
    const Partition exact = brute_force_best_partition(net, {2.5});
    const Partition greedy = maximize_modularity(net, {2.5});
    EXPECT_NEAR(greedy.score, exact.score, 1e-12);
    EXPECT_NEAR(oracle::best_potts_q(net, 2.5), exact.score, 1e-12);
  }
}

TEST(Greedy, DeterministicForSeed) {
  const ParticleSet set = generate_square_region_packing(10, 10);
  const Network net = build_adjacency(set);
  const PottsParams params = default_potts_params(set);
  const Partition a = maximize_modularity(net, params, {.restarts = 4, .seed = 3});
  const Partition b = maximize_modularity(net, params, {.restarts = 4, .seed = 3});
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.score, b.score);
  EXPECT_THROW(maximize_modularity(net, params, {.restarts = 0}), DomainError);
}

TEST(Greedy, LineDefectSeparatesRegions) {
  // 20 x 20 block with row 10 removed: the two halves lose contact.
  const double r = 1e-3;
  const ParticleSet full = generate_square_region_packing(20, 20, r);
  std::vector<Particle> kept;
  std::vector<double> ys;
  for (const Particle& p : full.particles) ys.push_back(p.position.y());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }), ys.end());
  const double removed = ys[10];
  for (const Particle& p : full.particles)
    if (std::abs(p.position.y() - removed) > 1e-9) kept.push_back(p);
  const ParticleSet set = make_particle_set(kept);
  const Network net = build_adjacency(set);
  const Partition p = maximize_modularity(net, default_potts_params(set));
  int across = 0, split = 0;
  for (int i = 0; i < net.size(); ++i) {
    for (int j = 0; j < net.size(); ++j) {
      if (set.particles[i].position.y() < removed && set.particles[j].position.y() > removed) {
        ++across;
        split += p.assignment[i] != p.assignment[j];
      }
    }
  }
  EXPECT_GE(split, across * 9 / 10);
}
