#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "packnet/chladni.hpp"
#include "packnet/dem.hpp"
#include "packnet/error.hpp"
#include "packnet/network.hpp"
#include "packnet/particles.hpp"
#include "packnet/partition.hpp"
#include "packnet/potts.hpp"
#include "packnet/render.hpp"
#include "packnet/spectral_cluster.hpp"
#include "packnet/spectrum.hpp"

namespace packnet {

namespace {

namespace fs = std::filesystem;

template <typename... Args>
std::string strf(const char* format, Args... args) {
  const int len = std::snprintf(nullptr, 0, format, args...);
  std::string s(static_cast<std::size_t>(len) + 1, '\0');
  std::snprintf(s.data(), s.size(), format, args...);
  s.pop_back();
  return s;
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path.string());
  fn(file);
  file.flush();
  if (!file) throw IoError("failed writing " + path.string());
}

ParticleSet subset(const ParticleSet& set, std::span<const int> nodes) {
  ParticleSet out;
  out.box = set.box;
  for (int k : nodes) {
    out.particles.push_back(set.particles[k]);
    out.labels.push_back(set.labels[k]);
  }
  return out;
}

struct Graph {
  ParticleSet set;
  Network net;
};

Graph make_graph(ParticleSet set, double tol, bool largest) {
  Graph g{std::move(set), {}};
  g.net = build_adjacency(g.set, tol);
  if (largest && g.net.size() > 0 && !g.net.connected()) {
    const auto comps = g.net.components();
    const auto& big = *std::max_element(comps.begin(), comps.end(),
                                        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    g.set = subset(g.set, big);
    g.net = build_adjacency(g.set, tol);
  }
  return g;
}

// Options shared by the analysis subcommands.
struct InputOptions {
  std::string input;
  double tol = kDefaultContactTolerance;
  bool largest = false;

  void add(CLI::App* sub, bool with_largest = true) {
    sub->add_option("-i,--input", input, "Particle file `id x y radius [mass]`")->required();
    sub->add_option("--tol", tol, "Relative contact tolerance")->capture_default_str();
    if (with_largest) sub->add_flag("--largest", largest, "Analyze only the largest connected component");
  }
  Graph load() const { return make_graph(load_particles(input), tol, largest); }
};

struct SolverFlags {
  double tol = 1e-10;
  int max_iter = 100000;
  std::uint64_t seed = 7;

  void add(CLI::App* sub) {
    sub->add_option("--eig-tol", tol, "Eigensolver tolerance")->capture_default_str();
    sub->add_option("--max-iter", max_iter, "Eigensolver iteration cap")->capture_default_str();
    sub->add_option("--seed", seed, "Seed of the top-k start block")->capture_default_str();
  }
  SolverOptions options() const { return {tol, max_iter, seed}; }
};

// simulate -----------------------------------------------------------------

struct SimulateOptions {
  std::string config;
  std::uint64_t seed = 1;
  std::optional<int> n;
  std::optional<std::int64_t> steps;
  std::string output = "packing.txt";
  std::string series;
  std::string write_config;

  void add(CLI::App* sub) {
    sub->add_option("--config", config, "`key = value` simulation config");
    sub->add_option("--seed", seed, "Placement seed")->capture_default_str();
    sub->add_option("-n,--particles", n, "Override the particle count");
    sub->add_option("--steps", steps, "Override max_steps");
  }
  void add_outputs(CLI::App* sub) {
    sub->add_option("-o,--output", output, "Final packing")->capture_default_str();
    sub->add_option("--series", series, "CSV time series of KE and packing fraction");
    sub->add_option("--write-config", write_config, "Write the effective config");
  }
  dem::SimConfig config_value() const {
    dem::SimConfig c = config.empty() ? dem::SimConfig{} : dem::load_sim_config(config);
    if (n) c.n_particles = *n;
    if (steps) c.max_steps = *steps;
    c.validate();
    return c;
  }
};

dem::SimResult simulate(const dem::SimConfig& config, std::uint64_t seed, std::ostream& out) {
  dem::SimResult result = dem::run(config, seed);
  const double ke = result.series.empty() ? 0.0 : result.series.back().kinetic_energy;
  const double pf = result.series.empty() ? 0.0 : result.series.back().packing_fraction;
  out << strf("steps = %lld\ntermination = %s\nparticles = %zu\nkinetic_energy = %.6g\npacking_fraction = %.6g\n",
              static_cast<long long>(result.steps), dem::to_string(result.reason).c_str(), result.particles.size(), ke,
              pf);
  return result;
}

int run_simulate(const SimulateOptions& o, std::ostream& out) {
  const dem::SimConfig config = o.config_value();
  if (!o.write_config.empty()) write_file(o.write_config, [&](std::ostream& f) { dem::write_sim_config(config, f); });
  const dem::SimResult result = simulate(config, o.seed, out);
  write_particles(result.particles, fs::path(o.output));
  if (!o.series.empty()) write_file(o.series, [&](std::ostream& f) { dem::write_series(result.series, f); });
  return 0;
}

// graph --------------------------------------------------------------------

struct GraphOptions {
  InputOptions in;
  std::string edges, image, render;
};

void print_graph_summary(const Network& net, std::ostream& out) {
  out << strf("nodes = %d\nedges = %lld\n", net.size(), static_cast<long long>(net.edge_count()));
  if (net.size() > 0) {
    out << strf("average_degree = %.6g\ncomponents = %zu\n", average_degree(net), net.components().size());
  }
  for (const auto& [k, count] : coordination_histogram(net)) out << strf("degree %d: %d\n", k, count);
}

int run_graph(const GraphOptions& o, std::ostream& out) {
  const Graph g = o.in.load();
  print_graph_summary(g.net, out);
  if (!o.edges.empty()) write_edge_list(g.net, fs::path(o.edges));
  if (!o.image.empty()) export_adjacency_image(g.net, fs::path(o.image));
  if (!o.render.empty()) {
    render_particles(fs::path(o.render), g.set, g.net.degrees().cast<double>(), {.title = "coordination number"});
  }
  return 0;
}

// eigen --------------------------------------------------------------------

struct EigenOptions {
  InputOptions in;
  SolverFlags solver;
  int top = 1;
  int rank = 1;
  int bins = 10;
  std::string vector = "eigenvector.txt";
  std::string spectrum, render, histogram;
};

EigenSet solve(const Network& net, int top, const SolverOptions& options) {
  if (top == 1) return {principal_eigenpair(net, options)};
  return top_k_eigenpairs(net, top, options);
}

int run_eigen(const EigenOptions& o, std::ostream& out) {
  if (o.rank < 1 || o.rank > o.top) throw DomainError("--rank must lie in [1, --top]");
  const Graph g = o.in.load();
  const EigenSet pairs = solve(g.net, o.top, o.solver.options());
  for (std::size_t r = 0; r < pairs.size(); ++r) out << strf("lambda_%zu = %.10g\n", r + 1, pairs[r].value);

  const Eigen::VectorXd& v = pairs[o.rank - 1].vector;
  const BinnedVector binned = bin_vector(v, o.bins);
  const auto classes = centrality_classes(v);
  out << strf("classes = %zu\n", classes.size());
  if (classes.size() <= 16) {
    for (const auto& c : classes) out << strf("  level %.6g size %zu\n", c.level, c.nodes.size());
  }

  write_file(o.vector, [&](std::ostream& f) { write_eigenvector(f, v, binned, g.set.labels); });
  if (!o.spectrum.empty()) write_file(o.spectrum, [&](std::ostream& f) { write_spectrum(f, pairs); });
  if (!o.render.empty()) {
    render_particles(fs::path(o.render), g.set, v, {.bins = o.bins, .title = strf("eigenvector %d", o.rank)});
  }
  if (!o.histogram.empty()) render_histogram(fs::path(o.histogram), binned, strf("eigenvector %d", o.rank));
  return 0;
}

// chladni ------------------------------------------------------------------

struct ChladniOptions {
  InputOptions in;
  SolverFlags solver;
  int top = 12;
  int max_index = 4;
  std::string report, render;
  int rank = 1;
};

int run_chladni(const ChladniOptions& o, std::ostream& out) {
  const Graph g = o.in.load();
  if (o.rank < 1 || o.rank > o.top) throw DomainError("--rank must lie in [1, --top]");
  const EigenSet pairs = top_k_eigenpairs(g.net, o.top, o.solver.options());
  MatchOptions mo;
  mo.max_index = o.max_index;
  std::vector<ModeMatch> matches;
  out << "rank lambda m n p q C D score sign_agreement\n";
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const ModeMatch& m = matches.emplace_back(match_mode(pairs[r].vector, g.net, mo));
    out << strf("%zu %.6g %d %d %d %d %.6g %.6g %.6g %.6g\n", r + 1, pairs[r].value, m.mode.m, m.mode.n, m.mode.p,
                m.mode.q, m.mode.c, m.mode.d, m.score, m.sign_agreement);
  }
  if (!o.report.empty()) {
    write_file(o.report, [&](std::ostream& f) {
      for (const ModeMatch& m : matches) write_mode_report(f, m);
    });
  }
  if (!o.render.empty()) {
    const ModeMatch& m = matches[o.rank - 1];
    const Eigen::VectorXd sample = sample_mode(m.mode, g.net.positions(), plate_box(g.net));
    render_particles(fs::path(o.render), g.set, sample,
                     {.title = strf("mode (%d,%d)+(%d,%d) D/C=%.3g", m.mode.m, m.mode.n, m.mode.p, m.mode.q,
                                    m.mode.d / m.mode.c)});
  }
  return 0;
}

// spectral / community -----------------------------------------------------

void print_partition(const Partition& p, std::span<const std::int64_t> labels, std::ostream& out) {
  out << strf("communities = %d\n", p.count) << "partition " << format_groups(p, labels) << '\n'
      << strf("Q = %.10g\n", p.score);
}

void emit_partition(const Partition& p, const Graph& g, const std::string& output, const std::string& render) {
  if (!output.empty()) write_file(output, [&](std::ostream& f) { write_partition(f, p, g.set.labels); });
  if (!render.empty()) {
    Eigen::VectorXd ids(static_cast<Eigen::Index>(p.assignment.size()));
    for (std::size_t i = 0; i < p.assignment.size(); ++i) ids[static_cast<Eigen::Index>(i)] = p.assignment[i];
    render_particles(fs::path(render), g.set, ids, {.kind = ScalarKind::categorical, .title = "communities"});
  }
}

struct SpectralFlags {
  InputOptions in;
  SolverFlags solver;
  int max_depth = 32;
  std::string output, render;
};

int run_spectral(const SpectralFlags& o, std::ostream& out) {
  const Graph g = o.in.load();
  std::vector<SplitRecord> trace;
  const Partition p = spectral_partition(g.net, {o.max_depth, o.solver.options()}, &trace);
  print_partition(p, g.set.labels, out);
  out << strf("splits = %zu\n", trace.size());
  emit_partition(p, g, o.output, o.render);
  return 0;
}

struct CommunityOptions {
  InputOptions in;
  double xc = 0.0;
  int restarts = 8;
  std::uint64_t seed = 0;
  bool brute_force = false;
  std::string output, render;

  PottsParams params(const ParticleSet& set) const { return xc > 0.0 ? PottsParams{xc} : default_potts_params(set); }
};

Partition detect(const Graph& g, const CommunityOptions& o, std::ostream& out) {
  const PottsParams params = o.params(g.set);
  out << strf("cutoff = %.6g\n", params.cutoff);
  if (o.brute_force) return brute_force_best_partition(g.net, params);
  return maximize_modularity(g.net, params, {o.restarts, o.seed});
}

int run_community(const CommunityOptions& o, std::ostream& out) {
  if (o.xc < 0.0) throw DomainError("--xc must be positive");
  const Graph g = o.in.load();
  const Partition p = detect(g, o, out);
  print_partition(p, g.set.labels, out);
  emit_partition(p, g, o.output, o.render);
  return 0;
}

// render -------------------------------------------------------------------

struct RenderOptions {
  std::string input, scalar, output, histogram, title;
  std::string kind = "continuous";
  int column = 1;
  int bins = 10;
  int size = 800;
  double tol = kDefaultContactTolerance;
};

// Column `column` (1-based, after the id) of a `node_id value...` file,
// matched to particles by label.
Eigen::VectorXd read_scalar(const fs::path& path, const ParticleSet& set, int column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::map<std::int64_t, std::size_t> index;
  for (std::size_t i = 0; i < set.size(); ++i) index[set.labels[i]] = i;
  Eigen::VectorXd v(static_cast<Eigen::Index>(set.size()));
  std::vector<char> seen(set.size(), 0);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::int64_t id = 0;
    if (!(fields >> id)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError("expected a node id", line_no);
    }
    double value = 0.0;
    for (int c = 0; c < column; ++c) {
      if (!(fields >> value)) throw ParseError("missing column " + std::to_string(column), line_no);
    }
    const auto it = index.find(id);
    if (it == index.end()) throw ValidationError("line " + std::to_string(line_no) + ": unknown node " + std::to_string(id));
    v[static_cast<Eigen::Index>(it->second)] = value;
    seen[it->second] = 1;
  }
  if (const auto miss = std::find(seen.begin(), seen.end(), 0); miss != seen.end()) {
    throw ValidationError("no value for node " + std::to_string(set.labels[miss - seen.begin()]));
  }
  return v;
}

int run_render(const RenderOptions& o, std::ostream& out) {
  const ParticleSet set = load_particles(o.input);
  RenderSpec spec{.bins = o.bins, .size_px = o.size, .title = o.title};
  Eigen::VectorXd scalar;
  if (o.kind == "degree") {
    scalar = build_adjacency(set, o.tol).degrees().cast<double>();
  } else {
    if (o.scalar.empty()) throw DomainError("--scalar is required unless --kind degree");
    scalar = read_scalar(o.scalar, set, o.column);
    if (o.kind == "categorical") spec.kind = ScalarKind::categorical;
  }
  render_particles(fs::path(o.output), set, scalar, spec);
  if (!o.histogram.empty()) render_histogram(fs::path(o.histogram), bin_vector(scalar, o.bins), o.title);
  out << strf("rendered %zu particles\n", set.size());
  return 0;
}

// pipeline -----------------------------------------------------------------

struct PipelineOptions {
  SimulateOptions sim;
  CommunityOptions community;
  SolverFlags solver;
  std::string out_dir = "pipeline";
  int bins = 10;
  double tol = kDefaultContactTolerance;
};

int run_pipeline(const PipelineOptions& o, std::ostream& out) {
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  const dem::SimConfig config = o.sim.config_value();
  write_file(dir / "config.txt", [&](std::ostream& f) { dem::write_sim_config(config, f); });

  out << "[simulate]\n";
  const dem::SimResult result = simulate(config, o.sim.seed, out);
  write_particles(result.particles, dir / "packing.txt");
  write_file(dir / "series.csv", [&](std::ostream& f) { dem::write_series(result.series, f); });

  // Rattlers and loose debris carry no contacts; the analysis runs on the
  // largest connected piece.
  out << "[graph]\n";
  const Graph g = make_graph(result.particles, o.tol, true);
  print_graph_summary(g.net, out);
  write_particles(g.set, dir / "network.txt");
  write_edge_list(g.net, dir / "edges.txt");
  export_adjacency_image(g.net, dir / "adjacency.pgm");
  render_particles(dir / "degree.svg", g.set, g.net.degrees().cast<double>(), {.title = "coordination number"});

  out << "[eigen]\n";
  const EigenPair principal = principal_eigenpair(g.net, o.solver.options());
  out << strf("lambda_1 = %.10g\n", principal.value);
  const BinnedVector binned = bin_vector(principal.vector, o.bins);
  write_file(dir / "spectrum.txt", [&](std::ostream& f) { write_spectrum(f, {principal}); });
  write_file(dir / "eigenvector.txt",
             [&](std::ostream& f) { write_eigenvector(f, principal.vector, binned, g.set.labels); });
  render_particles(dir / "eigenvector.svg", g.set, principal.vector, {.bins = o.bins, .title = "principal eigenvector"});
  render_histogram(dir / "histogram.svg", binned, "principal eigenvector");

  out << "[community]\n";
  if (g.net.edge_count() == 0) throw DomainError("packing has no contacts; nothing to partition");
  const Partition p = detect(g, o.community, out);
  out << strf("communities = %d\nQ = %.10g\n", p.count, p.score);
  emit_partition(p, g, (dir / "partition.txt").string(), (dir / "communities.svg").string());
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contact networks of granular packings: simulate, build graphs, analyze spectra and communities"};
  app.name("packnet");
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the centripetal DEM packing protocol");
  sim.add(simulate_cmd);
  sim.add_outputs(simulate_cmd);

  GraphOptions graph;
  auto* graph_cmd = app.add_subcommand("graph", "Build the contact network and export it");
  graph.in.add(graph_cmd, false);
  graph_cmd->add_option("--edges", graph.edges, "Edge list output");
  graph_cmd->add_option("--image", graph.image, "Adjacency matrix as binary PGM");
  graph_cmd->add_option("--render", graph.render, "SVG colored by coordination number");

  EigenOptions eigen;
  auto* eigen_cmd = app.add_subcommand("eigen", "Principal or top-k adjacency eigenpairs");
  eigen.in.add(eigen_cmd);
  eigen.solver.add(eigen_cmd);
  eigen_cmd->add_option("--top", eigen.top, "Number of leading eigenpairs")->capture_default_str();
  eigen_cmd->add_option("--rank", eigen.rank, "Eigenvector to dump and render (1-based)")->capture_default_str();
  eigen_cmd->add_option("--bins", eigen.bins, "Histogram bins")->capture_default_str();
  eigen_cmd->add_option("--vector", eigen.vector, "Eigenvector dump `id component bin`")->capture_default_str();
  eigen_cmd->add_option("--spectrum", eigen.spectrum, "Spectrum dump `rank lambda`");
  eigen_cmd->add_option("--render", eigen.render, "SVG colored by component bin");
  eigen_cmd->add_option("--histogram", eigen.histogram, "SVG histogram of the components");

  ChladniOptions chladni;
  auto* chladni_cmd = app.add_subcommand("chladni", "Match eigenvectors against plate vibration modes");
  chladni.in.add(chladni_cmd);
  chladni.solver.add(chladni_cmd);
  chladni_cmd->add_option("--top", chladni.top, "Eigenvectors to match")->capture_default_str();
  chladni_cmd->add_option("--max-index", chladni.max_index, "Largest mode index searched")->capture_default_str();
  chladni_cmd->add_option("--report", chladni.report, "Mode report `m n p q C D score` per eigenvector");
  chladni_cmd->add_option("--render", chladni.render, "SVG of the best mode sampled at the nodes");
  chladni_cmd->add_option("--rank", chladni.rank, "Eigenvector whose mode is rendered")->capture_default_str();

  SpectralFlags spectral;
  auto* spectral_cmd = app.add_subcommand("spectral", "Recursive spectral bisection scored by Newman modularity");
  spectral.in.add(spectral_cmd);
  spectral.solver.add(spectral_cmd);
  spectral_cmd->add_option("--max-depth", spectral.max_depth, "Recursion limit")->capture_default_str();
  spectral_cmd->add_option("-o,--output", spectral.output, "Partition dump `id community`");
  spectral_cmd->add_option("--render", spectral.render, "SVG colored by community");

  CommunityOptions community;
  auto* community_cmd = app.add_subcommand("community", "Potts modularity community detection");
  community.in.add(community_cmd);
  community_cmd->add_option("--xc", community.xc, "Missing-edge cutoff in meters (default 2.5 mean diameters)");
  community_cmd->add_option("--restarts", community.restarts, "Greedy restarts")->capture_default_str();
  community_cmd->add_option("--seed", community.seed, "Seed of the sweep orders")->capture_default_str();
  community_cmd->add_flag("--brute-force", community.brute_force, "Exhaustive search (at most 12 nodes)");
  community_cmd->add_option("-o,--output", community.output, "Partition dump `id community`");
  community_cmd->add_option("--render", community.render, "SVG colored by community");

  RenderOptions render;
  auto* render_cmd = app.add_subcommand("render", "Re-render a saved scalar over a particle file");
  render_cmd->add_option("-i,--input", render.input, "Particle file")->required();
  render_cmd->add_option("--scalar", render.scalar, "`id value...` file (eigenvector or partition dump)");
  render_cmd->add_option("--column", render.column, "Value column after the id (1-based)")->capture_default_str();
  render_cmd->add_option("--kind", render.kind, "Coloring")
      ->check(CLI::IsMember({"continuous", "categorical", "degree"}))
      ->capture_default_str();
  render_cmd->add_option("--bins", render.bins, "Color bins")->capture_default_str();
  render_cmd->add_option("--size", render.size, "Image width in px")->capture_default_str();
  render_cmd->add_option("--title", render.title, "Caption");
  render_cmd->add_option("--tol", render.tol, "Contact tolerance for --kind degree")->capture_default_str();
  render_cmd->add_option("-o,--output", render.output, "SVG output")->required();
  render_cmd->add_option("--histogram", render.histogram, "SVG histogram of the scalar");

  PipelineOptions pipeline;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "simulate, graph, eigen and community in one run");
  pipeline.sim.add(pipeline_cmd);
  pipeline_cmd->add_option("--out-dir", pipeline.out_dir, "Directory for every artifact")->capture_default_str();
  pipeline_cmd->add_option("--bins", pipeline.bins, "Histogram bins")->capture_default_str();
  pipeline_cmd->add_option("--tol", pipeline.tol, "Relative contact tolerance")->capture_default_str();
  pipeline_cmd->add_option("--xc", pipeline.community.xc, "Missing-edge cutoff in meters");
  pipeline_cmd->add_option("--restarts", pipeline.community.restarts, "Greedy restarts")->capture_default_str();
  pipeline_cmd->add_option("--community-seed", pipeline.community.seed, "Seed of the sweep orders")
      ->capture_default_str();

  if (argc <= 1) {
    err << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (simulate_cmd->parsed()) return run_simulate(sim, out);
    if (graph_cmd->parsed()) return run_graph(graph, out);
    if (eigen_cmd->parsed()) return run_eigen(eigen, out);
    if (chladni_cmd->parsed()) return run_chladni(chladni, out);
    if (spectral_cmd->parsed()) return run_spectral(spectral, out);
    if (community_cmd->parsed()) return run_community(community, out);
    if (render_cmd->parsed()) return run_render(render, out);
    if (pipeline_cmd->parsed()) return run_pipeline(pipeline, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace packnet
