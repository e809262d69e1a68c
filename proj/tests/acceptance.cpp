// Acceptance checks. One PASS/FAIL line per criterion, exit status 1 if any
// fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles/brute.hpp"
#include "oracles/jacobi.hpp"
#include "packnet/chladni.hpp"
#include "packnet/dem.hpp"
#include "packnet/geometry.hpp"
#include "packnet/network.hpp"
#include "packnet/particles.hpp"
#include "packnet/partition.hpp"
#include "packnet/potts.hpp"
#include "packnet/spectral_cluster.hpp"
#include "packnet/spectrum.hpp"
#include "physics.hpp"

using namespace packnet;
namespace fs = std::filesystem;

namespace {

const fs::path kData = PACKNET_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <typename... Args>
std::string strf(const char* format, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Packing from the DEM criterion, reused as a structure for the spectral one.
std::optional<ParticleSet> dem_packing;

Outcome paw_eigen() {
  const ParticleSet set = load_particles(kData / "paw.txt");
  const Network net = build_adjacency(set);
  const EigenPair p = principal_eigenpair(net);
  int hub = 0;
  for (int i = 0; i < net.size(); ++i)
    if (net.degree(i) > net.degree(hub)) hub = i;
  const double top = p.vector.maxCoeff();
  const bool ok = std::abs(p.value - 2.170) <= 1e-3 && std::abs(p.vector[hub] - 0.612) <= 1e-3 && top == p.vector[hub];
  return {ok, strf("lambda = %.6f, hub component = %.6f", p.value, p.vector[hub])};
}

Outcome hex_classes() {
  const EigenPair p = principal_eigenpair(build_adjacency(generate_hex_packing(2)));
  const auto classes = centrality_classes(p.vector);
  const double levels[] = {0.37, 0.30, 0.18, 0.13};
  const std::size_t sizes[] = {1, 6, 6, 6};
  bool ok = classes.size() == 4;
  std::string detail;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (ok) ok = std::abs(classes[c].level - levels[c]) <= 0.01 && classes[c].nodes.size() == sizes[c];
    detail += strf("%s%.4f x%zu", c ? ", " : "", classes[c].level, classes[c].nodes.size());
  }
  return {ok, strf("%zu classes: ", classes.size()) + detail};
}

Outcome paw_communities() {
  const ParticleSet set = load_particles(kData / "paw.txt");
  const Network net = build_adjacency(set);
  const PottsParams params = default_potts_params(set);
  const Partition exact = brute_force_best_partition(net, params);
  const Partition greedy = maximize_modularity(net, params);
  const double oracle_q = oracle::best_potts_q(net, params.cutoff);
  const std::string e = format_groups(exact, set.labels), g = format_groups(greedy, set.labels);
  const bool ok = e == "{{1,2,3},{4}}" && g == e && std::abs(exact.score - 0.25) < 1e-12 &&
                  std::abs(greedy.score - 0.25) < 1e-12 && std::abs(oracle_q - 0.25) < 1e-12;
  return {ok, strf("brute %s Q=%.6g, greedy %s Q=%.6g, oracle Q=%.6g", e.c_str(), exact.score, g.c_str(),
                   greedy.score, oracle_q)};
}

Outcome oracle_sweep() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(4, 10);
  int matched = 0, exceeded = 0, eigen_bad = 0;
  double worst_eig = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = size(rng);
    const Network net = fixtures::random_geometric(n, 0.5, rng);
    const PottsParams params{0.6};
    const double best = oracle::best_potts_q(net, params.cutoff);
    const double got = maximize_modularity(net, params).score;
    matched += std::abs(got - best) <= 1e-12;
    exceeded += got > best + 1e-12;

    const auto dense = oracle::jacobi_eigen(fixtures::dense(net));
    const int k = std::min(n, 4);
    const EigenSet pairs = top_k_eigenpairs(net, k);
    bool ok = true;
    for (int r = 0; r < k; ++r) {
      const double dv = std::abs(pairs[r].value - dense.values[r]);
      const double res = (net.adjacency() * pairs[r].vector - pairs[r].value * pairs[r].vector).norm();
      worst_eig = std::max({worst_eig, dv, res});
      ok = ok && dv <= 1e-8 && res <= 1e-8;
      // Simple eigenvalues: the vectors agree up to sign.
      const bool simple = (r == 0 || dense.values[r - 1] - dense.values[r] > 1e-6) &&
                          (r + 1 == n || dense.values[r] - dense.values[r + 1] > 1e-6);
      if (simple) {
        Eigen::VectorXd u(n);
        for (int i = 0; i < n; ++i) u[i] = dense.vectors[r][i];
        if (u.dot(pairs[r].vector) < 0) u = -u;
        const double dvec = (u - pairs[r].vector).cwiseAbs().maxCoeff();
        worst_eig = std::max(worst_eig, dvec);
        ok = ok && dvec <= 1e-8;
      }
    }
    eigen_bad += !ok;
  }
  const bool ok = matched >= 45 && exceeded == 0 && eigen_bad == 0;
  return {ok, strf("greedy = oracle on %d/50, above oracle %d, eigen mismatches %d (worst %.2e)", matched, exceeded,
                   eigen_bad, worst_eig)};
}

Outcome chladni_modes() {
  const Network net = build_adjacency(generate_square_region_packing(20, 20));
  const EigenSet pairs = top_k_eigenpairs(net, 12);
  const ModeMatch first = match_mode(pairs[0].vector, net);
  std::set<std::tuple<int, int, int, int, double>> distinct;
  std::string higher;
  for (int r = 1; r < 12; ++r) {
    const ModeMatch m = match_mode(pairs[r].vector, net);
    const ChladniMode& c = m.mode;
    const bool low = c.m + c.n <= 5 && c.p + c.q <= 5;
    const bool fundamental = c.pure() && c.m == 1 && c.n == 1;
    if (m.score > 0.8 && low && !fundamental) distinct.insert({c.m, c.n, c.p, c.q, c.d / c.c});
    if (r <= 4) higher += strf(" (%d,%d)%s %.3f", c.m, c.n, c.pure() ? "" : "+", m.score);
  }
  const bool ok = first.mode.pure() && first.mode.m == 1 && first.mode.n == 1 && first.score > 0.9 &&
                  distinct.size() >= 2;
  return {ok, strf("principal (%d,%d) score %.4f; %zu distinct low modes above 0.8;", first.mode.m, first.mode.n,
                   first.score, distinct.size()) +
                  higher + " ..."};
}

Outcome dem_packing_run() {
  const dem::SimConfig config;
  const dem::SimResult result = dem::run(config, 1);
  const ParticleSet& set = result.particles;
  for (const Particle& p : set.particles)
    if (!p.position.allFinite()) return {false, "non-finite position"};
  dem_packing = set;

  const Network net = build_adjacency(set);
  const Eigen::Matrix2Xd pos = set.positions();
  const std::vector<int> hull = convex_hull(pos);
  const double reach = 6.0 * config.radius;
  std::vector<bool> deep(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) deep[i] = distance_to_hull(pos.col(i), pos, hull) >= reach;
  std::map<int, int> degrees;
  for (int i = 0; i < net.size(); ++i) {
    bool interior = deep[i];
    for (int j : net.neighbors(i)) interior = interior && deep[j];
    if (interior) ++degrees[net.degree(i)];
  }
  int mode = -1, mode_count = 0, total = 0;
  for (const auto& [d, c] : degrees) {
    total += c;
    if (c > mode_count) mode = d, mode_count = c;
  }
  const double pf = dem::measure_packing_fraction(set, dem::central_region(set));
  std::string hist;
  for (const auto& [d, c] : degrees) hist += strf(" %d:%d", d, c);
  const bool ok = total > 0 && mode == 6 && pf >= 0.80;
  return {ok, strf("%lld steps (%s), interior %d, degree mode %d, degrees", static_cast<long long>(result.steps),
                   dem::to_string(result.reason).c_str(), total, mode) +
                  hist + strf(", packing fraction %.4f", pf)};
}

Outcome integrator_physics() {
  const double elastic = physics::head_on_energy_ratio(physics::conservative());
  dem::SimConfig damped = physics::conservative();
  damped.damping = 0.01;
  damped.tangential_damping = 10.0;
  damped.friction = 0.5;
  const double lossy = physics::head_on_energy_ratio(damped);
  const double rise = physics::worst_energy_rise(damped);
  double momentum = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) momentum = std::max(momentum, physics::worst_momentum_change(seed));
  const double drift = physics::harmonic_drift();
  const bool ok = std::abs(elastic - 1.0) <= 1e-3 && lossy < 1.0 && rise <= 1e-12 && momentum <= 1e-12 && drift < 1e-6;
  return {ok, strf("elastic E ratio %.7f, damped %.4f (max rise %.1e), momentum %.1e/step, oscillator drift %.1e",
                   elastic, lossy, rise, momentum, drift)};
}

Outcome verlet_exactness() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> count(20, 300);
  std::uniform_real_distribution<double> density(0.05, 0.8), skin_frac(0.1, 1.0);
  int exact = 0;
  std::size_t pairs = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = count(rng);
    const double r = 1e-3;
    const double side = std::sqrt(n * M_PI * r * r / density(rng));
    const dem::SimState s = physics::random_state(n, r, side, rng);
    const double skin = skin_frac(rng) * r;
    const dem::VerletList list = dem::build_verlet(s, skin);
    const auto got = physics::verlet_pairs(list);
    exact += got == oracle::pairs_within_gap(s.position(), s.radius, skin);
    pairs += got.size();
  }
  return {exact == 100, strf("%d/100 states exact (%zu pairs total)", exact, pairs)};
}

ParticleSet without(const ParticleSet& set, const std::function<bool(const Particle&)>& drop) {
  std::vector<Particle> kept;
  for (const Particle& p : set.particles)
    if (!drop(p)) kept.push_back(p);
  return make_particle_set(kept);
}

Outcome spectral_sanity() {
  // Every multiset of 2 to 4 clique sizes from 3..6.
  int fixtures_total = 0, recovered = 0;
  std::function<void(std::vector<int>&, int)> each = [&](std::vector<int>& sizes, int lo) {
    if (sizes.size() >= 2) {
      ++fixtures_total;
      const Network net = fixtures::cliques(sizes);
      std::vector<int> labels;
      for (std::size_t c = 0; c < sizes.size(); ++c) labels.insert(labels.end(), sizes[c], static_cast<int>(c));
      const Partition p = spectral_partition(net);
      recovered += p.assignment == make_partition(labels).assignment &&
                   std::abs(p.score - oracle::newman_q(net, p.assignment)) < 1e-12;
    }
    if (sizes.size() == 4) return;
    for (int s = lo; s <= 6; ++s) {
      sizes.push_back(s);
      each(sizes, s);
      sizes.pop_back();
    }
  };
  std::vector<int> scratch;
  each(scratch, 3);

  // Structure-style inputs: paw, hex, DEM pile, lattice block, line and point
  // defects.
  const double r = kDefaultRadius;
  const ParticleSet block = generate_square_region_packing(20, 20, r);
  std::vector<double> ys;
  for (const Particle& p : block.particles) ys.push_back(p.position.y());
  std::sort(ys.begin(), ys.end());
  const double row = ys[ys.size() / 2];
  std::vector<ParticleSet> structures = {
      fixtures::paw_particles(),
      generate_hex_packing(2),
      dem_packing ? *dem_packing : generate_hex_packing(8),
      block,
      without(block, [&](const Particle& p) { return std::abs(p.position.y() - row) < 1e-9; }),
      without(block, [&](const Particle& p) { return p.position.norm() < 3.5 * r; }),
  };
  int produced = 0, monotone = 0, splits = 0;
  std::string counts;
  for (const ParticleSet& set : structures) {
    const Network net = build_adjacency(set);
    std::vector<SplitRecord> trace;
    const Partition p = spectral_partition(net, {}, &trace);
    bool valid = p.assignment.size() == set.size() && make_partition(p.assignment).assignment == p.assignment;
    produced += valid;
    bool up = true;
    for (const SplitRecord& s : trace) up = up && s.children_term > s.parent_term;
    monotone += up;
    splits += static_cast<int>(trace.size());
    counts += strf(" %d", p.count);
  }
  const bool ok = recovered == fixtures_total && produced == 6 && monotone == 6;
  return {ok, strf("cliques %d/%d, structures %d/6 valid, %d splits all increasing Q: %s, communities", recovered,
                   fixtures_total, produced, splits, monotone == 6 ? "yes" : "no") +
                  counts};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int call(const std::vector<std::string>& args, std::string& out) {
  std::vector<const char*> argv{"packnet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  return code;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "packnet_acceptance";
  fs::remove_all(root);
  const std::string paw = (kData / "paw.txt").string();
  int compared = 0, differing = 0, failed_runs = 0;

  std::map<std::string, std::string> first;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    std::string out;
    const std::vector<std::vector<std::string>> commands = {
        {"pipeline", "-n", "60", "--steps", "300000", "--seed", "3", "--out-dir", (dir / "pipeline").string()},
        {"simulate", "-n", "30", "--steps", "50000", "--seed", "8", "-o", (dir / "sim.txt").string(), "--series",
         (dir / "series.csv").string()},
        {"eigen", "-i", paw, "--top", "3", "--vector", (dir / "v.txt").string(), "--render", (dir / "v.svg").string()},
        {"community", "-i", paw, "--seed", "4", "-o", (dir / "part.txt").string()},
        {"spectral", "-i", paw},
    };
    for (std::size_t c = 0; c < commands.size(); ++c) {
      failed_runs += call(commands[c], out) != 0;
      std::ofstream(dir / strf("stdout_%zu.txt", c), std::ios::binary) << out;
    }
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      const std::string rel = fs::relative(entry.path(), dir).string();
      const std::string bytes = slurp(entry.path());
      if (first.count(rel)) {
        ++compared;
        differing += first[rel] != bytes;
      } else {
        first[rel] = bytes;
      }
    }
  }
  const bool ok = failed_runs == 0 && compared == static_cast<int>(first.size()) && compared > 10 && differing == 0;
  if (ok) fs::remove_all(root);
  return {ok, strf("%d files compared, %d differ, %d failed commands", compared, differing, failed_runs)};
}

struct Criterion {
  const char* name;
  double budget_s;
  Outcome (*check)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"AC1 paw principal eigenpair", 1.0, paw_eigen},
      {"AC2 hex centrality classes", 1.0, hex_classes},
      {"AC3 paw Potts communities", 1.0, paw_communities},
      {"AC4 oracle equivalence sweep", 60.0, oracle_sweep},
      {"AC5 Chladni mode matching", 30.0, chladni_modes},
      {"AC6 DEM packing", 600.0, dem_packing_run},
      {"AC7 integrator physics", 30.0, integrator_physics},
      {"AC8 Verlet exactness", 10.0, verlet_exactness},
      {"AC9 spectral clustering sanity", 30.0, spectral_sanity},
      {"AC10 determinism", 600.0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += strf(" [over the %.0f s budget]", c.budget_s);
    }
    failures += !o.pass;
    std::printf("%s %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures ? 1 : 0;
}
