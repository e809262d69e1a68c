#include "packnet/dem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "packnet/error.hpp"
#include "packnet/geometry.hpp"

namespace packnet::dem {

namespace {

// Gear corrector coefficients for the 5-value scheme with velocity-dependent
// forces.
constexpr std::array<double, SimState::kOrder> kGear = {19.0 / 90.0, 3.0 / 4.0, 1.0, 1.0 / 2.0, 1.0 / 12.0};

}  // namespace

double SimConfig::side() const {
  if (box_size > 0.0) return box_size;
  return std::sqrt(n_particles * std::numbers::pi * radius * radius / initial_packing_fraction);
}

double SimConfig::particle_mass() const { return sphere_mass(radius, density); }

void SimConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive");
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be >= 0");
  };
  positive(youngs_modulus, "youngs_modulus");
  non_negative(friction, "friction");
  non_negative(damping, "damping");
  non_negative(tangential_damping, "tangential_damping");
  positive(density, "density");
  positive(dt, "dt");
  if (!(poisson >= 0.0 && poisson < 0.5)) throw DomainError("poisson must be in [0, 0.5)");
  non_negative(gravity, "gravity");
  positive(radius, "radius");
  non_negative(verlet_skin, "verlet_skin");
  non_negative(box_size, "box_size");
  if (n_particles < 0) throw DomainError("n_particles must be >= 0");
  if (box_size == 0.0) positive(initial_packing_fraction, "initial_packing_fraction");
  if (max_steps < 0) throw DomainError("max_steps must be >= 0");
  non_negative(ke_threshold, "ke_threshold");
  non_negative(target_packing_fraction, "target_packing_fraction");
  if (record_interval < 1) throw DomainError("record_interval must be >= 1");
}

SimConfig read_sim_config(std::istream& in) {
  SimConfig c;
  const std::map<std::string, double*> reals = {
      {"youngs_modulus", &c.youngs_modulus},
      {"friction", &c.friction},
      {"damping", &c.damping},
      {"tangential_damping", &c.tangential_damping},
      {"density", &c.density},
      {"dt", &c.dt},
      {"poisson", &c.poisson},
      {"gravity", &c.gravity},
      {"radius", &c.radius},
      {"verlet_skin", &c.verlet_skin},
      {"box_size", &c.box_size},
      {"initial_packing_fraction", &c.initial_packing_fraction},
      {"ke_threshold", &c.ke_threshold},
      {"target_packing_fraction", &c.target_packing_fraction},
  };
  const std::map<std::string, std::int64_t*> integers = {
      {"max_steps", &c.max_steps},
      {"record_interval", &c.record_interval},
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected `key = value`", line_no);
    std::istringstream key_in(line.substr(0, eq)), value_in(line.substr(eq + 1));
    std::string key, value, extra;
    if (!(key_in >> key) || !(value_in >> value) || (value_in >> extra)) {
      throw ParseError("expected `key = value`", line_no);
    }
    try {
      std::size_t used = 0;
      if (auto it = reals.find(key); it != reals.end()) {
        *it->second = std::stod(value, &used);
      } else if (auto jt = integers.find(key); jt != integers.end()) {
        *jt->second = std::stoll(value, &used);
      } else if (key == "n_particles") {
        c.n_particles = std::stoi(value, &used);
      } else if (key == "walls") {
        if (value != "true" && value != "false") throw ParseError("walls must be true or false", line_no);
        c.walls = value == "true";
        used = value.size();
      } else {
        throw ParseError("unknown key `" + key + "`", line_no);
      }
      if (used != value.size()) throw ParseError("bad value `" + value + "` for " + key, line_no);
    } catch (const std::logic_error&) {
      throw ParseError("bad value `" + value + "` for " + key, line_no);
    }
  }
  c.validate();
  return c;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_sim_config(in);
}

void write_sim_config(const SimConfig& c, std::ostream& out) {
  char buf[128];
  auto real = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
    out << buf;
  };
  real("youngs_modulus", c.youngs_modulus);
  real("friction", c.friction);
  real("damping", c.damping);
  real("tangential_damping", c.tangential_damping);
  real("density", c.density);
  real("dt", c.dt);
  real("poisson", c.poisson);
  real("gravity", c.gravity);
  real("radius", c.radius);
  real("verlet_skin", c.verlet_skin);
  out << "n_particles = " << c.n_particles << '\n';
  real("box_size", c.box_size);
  real("initial_packing_fraction", c.initial_packing_fraction);
  out << "walls = " << (c.walls ? "true" : "false") << '\n';
  out << "max_steps = " << c.max_steps << '\n';
  real("ke_threshold", c.ke_threshold);
  real("target_packing_fraction", c.target_packing_fraction);
  out << "record_interval = " << c.record_interval << '\n';
}

SimState initialize(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  const int n = config.n_particles;
  const double r = config.radius;
  const double side = config.side();
  const double fraction = n * std::numbers::pi * r * r / (side * side);
  if (fraction > 0.9) {
    throw DomainError("requested packing fraction " + std::to_string(fraction) + " exceeds 0.9; use a larger box");
  }

  SimState state;
  state.box = {-0.5 * side, 0.5 * side, -0.5 * side, 0.5 * side};
  for (auto& d : state.derivatives) d = Eigen::Matrix2Xd::Zero(2, n);
  state.forces = Eigen::Matrix2Xd::Zero(2, n);
  state.radius = Eigen::VectorXd::Constant(n, r);
  state.mass = Eigen::VectorXd::Constant(n, config.particle_mass());

  if (side <= 2.0 * r && n > 0) throw SimulationError("box too small for a single particle", 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(state.box.x_min + r, state.box.x_max - r);
  constexpr int kAttempts = 100000;
  Eigen::Matrix2Xd& pos = state.derivatives[0];
  const double min_dist2 = 4.0 * r * r;
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kAttempts && !placed; ++attempt) {
      const Eigen::Vector2d candidate(coord(rng), coord(rng));
      placed = true;
      for (int j = 0; j < i; ++j) {
        if ((pos.col(j) - candidate).squaredNorm() < min_dist2) {
          placed = false;
          break;
        }
      }
      if (placed) pos.col(i) = candidate;
    }
    if (!placed) {
      throw SimulationError("could not place particle " + std::to_string(i) + " without overlap after " +
                                std::to_string(kAttempts) + " attempts; use a larger box",
                            0);
    }
  }
  return state;
}

SimState predict(SimState state, double dt) {
  // Lower levels first so each update reads the old higher derivatives.
  constexpr int K = SimState::kOrder;
  for (int k = 0; k < K - 1; ++k) {
    double coef = 1.0;
    for (int j = k + 1; j < K; ++j) {
      coef *= dt / (j - k);
      state.derivatives[k] += coef * state.derivatives[j];
    }
  }
  state.time += dt;
  ++state.step;
  return state;
}

bool VerletList::stale(const Eigen::Matrix2Xd& positions) const {
  if (positions.cols() != reference.cols()) return true;
  const double limit2 = 0.25 * skin * skin;
  return ((positions - reference).colwise().squaredNorm().array() > limit2).any();
}

std::size_t VerletList::pair_count() const {
  std::size_t total = 0;
  for (const auto& nb : neighbors) total += nb.size();
  return total / 2;
}

VerletList build_verlet(const SimState& state, double skin) {
  if (!(skin > 0.0)) throw DomainError("Verlet skin must be positive");
  VerletList list;
  list.skin = skin;
  list.reference = state.position();
  list.neighbors.assign(static_cast<std::size_t>(state.size()), {});
  const double r_max = state.size() ? state.radius.maxCoeff() : 0.0;
  for_each_pair_within(state.position(), 2.0 * r_max + skin, [&](int i, int j, double dist) {
    if (dist - (state.radius[i] + state.radius[j]) <= skin) {
      list.neighbors[i].push_back(j);
      list.neighbors[j].push_back(i);
    }
  });
  for (auto& nb : list.neighbors) std::sort(nb.begin(), nb.end());
  return list;
}

double normal_force(double xi, double xi_rate, double effective_radius, const SimConfig& config) {
  if (xi <= 0.0) return 0.0;
  const double stiffness = 2.0 * config.youngs_modulus * std::sqrt(effective_radius) /
                           (3.0 * (1.0 - config.poisson * config.poisson));
  const double root = std::sqrt(xi);
  return std::max(0.0, stiffness * (xi * root + config.damping * root * xi_rate));
}

namespace {

// Force on a particle from one contact: `normal` points from the partner to
// the particle, `relative` is the particle's velocity minus the partner's.
Eigen::Vector2d contact_force(double xi, const Eigen::Vector2d& normal, const Eigen::Vector2d& relative,
                              double effective_radius, const SimConfig& config) {
  const double approach = relative.dot(normal);
  const double fn = normal_force(xi, -approach, effective_radius, config);
  Eigen::Vector2d force = fn * normal;
  const Eigen::Vector2d vt = relative - approach * normal;
  const double speed = vt.norm();
  if (speed > 0.0) {
    const double ft = std::min(config.tangential_damping * speed, config.friction * fn);
    force -= (ft / speed) * vt;
  }
  return force;
}

}  // namespace

Eigen::Matrix2Xd compute_forces(const SimState& state, const VerletList& list, const SimConfig& config) {
  const int n = state.size();
  const Eigen::Matrix2Xd& pos = state.position();
  const Eigen::Matrix2Xd& vel = state.velocity();
  Eigen::Matrix2Xd forces = Eigen::Matrix2Xd::Zero(2, n);

  for (int i = 0; i < n; ++i) {
    for (int j : list.neighbors[static_cast<std::size_t>(i)]) {
      if (j <= i) continue;
      const Eigen::Vector2d d = pos.col(i) - pos.col(j);
      const double dist = d.norm();
      const double ri = state.radius[i];
      const double rj = state.radius[j];
      const double xi = ri + rj - dist;
      if (xi <= 0.0 || dist == 0.0) continue;
      const Eigen::Vector2d f =
          contact_force(xi, d / dist, vel.col(i) - vel.col(j), ri * rj / (ri + rj), config);
      forces.col(i) += f;
      forces.col(j) -= f;
    }
  }

  if (config.walls) {
    const Box& b = state.box;
    for (int i = 0; i < n; ++i) {
      const double r = state.radius[i];
      const std::array<std::pair<double, Eigen::Vector2d>, 4> walls = {{
          {pos(0, i) - b.x_min, Eigen::Vector2d(1, 0)},
          {b.x_max - pos(0, i), Eigen::Vector2d(-1, 0)},
          {pos(1, i) - b.y_min, Eigen::Vector2d(0, 1)},
          {b.y_max - pos(1, i), Eigen::Vector2d(0, -1)},
      }};
      for (const auto& [gap, normal] : walls) {
        if (gap < r) forces.col(i) += contact_force(r - gap, normal, vel.col(i), r, config);
      }
    }
  }

  if (config.gravity > 0.0) {
    const Eigen::Vector2d center = state.box.center();
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d dir = center - pos.col(i);
      const double len = dir.norm();
      if (len > 0.0) forces.col(i) += (state.mass[i] * config.gravity / len) * dir;
    }
  }
  return forces;
}

SimState correct(SimState state, const Eigen::Matrix2Xd& forces, const SimConfig& config) {
  const double dt = config.dt;
  Eigen::Matrix2Xd delta = forces.array().rowwise() / state.mass.transpose().array();
  delta -= state.derivatives[2];
  // Level k receives kGear[k] * k! / dt^k * (dt^2 / 2) * delta.
  double scale = 0.5 * dt * dt;
  for (int k = 0; k < SimState::kOrder; ++k) {
    state.derivatives[k] += (kGear[k] * scale) * delta;
    scale *= (k + 1) / dt;
  }
  state.forces = forces;
  for (const auto& d : state.derivatives) {
    if (!d.allFinite()) throw SimulationError("non-finite state", state.step);
  }
  return state;
}

double kinetic_energy(const SimState& state) {
  return 0.5 * state.velocity().colwise().squaredNorm().dot(state.mass.transpose());
}

ParticleSet to_particle_set(const SimState& state) {
  ParticleSet set;
  const int n = state.size();
  set.particles.resize(static_cast<std::size_t>(n));
  set.labels.resize(static_cast<std::size_t>(n));
  bool inside = true;
  for (int i = 0; i < n; ++i) {
    set.particles[i] = {state.position().col(i), state.radius[i], state.mass[i]};
    set.labels[i] = i;
    inside = inside && state.box.contains(set.particles[i].position);
  }
  set.box = inside ? state.box : padded_bounds(set.particles);
  return set;
}

double measure_packing_fraction(const ParticleSet& set, const Box& region) {
  if (!(region.area() > 0.0)) throw DomainError("packing-fraction region has no area");
  double area = 0.0;
  for (const Particle& p : set.particles) {
    if (region.contains(p.position)) area += std::numbers::pi * p.radius * p.radius;
  }
  return area / region.area();
}

Box central_region(const ParticleSet& set) {
  if (set.empty()) throw DomainError("central region of an empty set");
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  double mean_radius = 0.0;
  for (const Particle& p : set.particles) {
    centroid += p.position;
    mean_radius += p.radius;
  }
  const auto n = static_cast<double>(set.size());
  centroid /= n;
  mean_radius /= n;
  const double hex_fraction = std::numbers::pi / (2.0 * std::sqrt(3.0));
  const double half = 0.5 * mean_radius * std::sqrt(n / hex_fraction);
  return {centroid.x() - half, centroid.x() + half, centroid.y() - half, centroid.y() + half};
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::max_steps:
      return "max_steps";
    case Termination::kinetic_energy:
      return "kinetic_energy";
    case Termination::packing_fraction:
      return "packing_fraction";
  }
  return "unknown";
}

SimResult run(const SimConfig& config, std::uint64_t seed, const Observer& observer) {
  return run(config, initialize(config, seed), observer);
}

SimResult run(const SimConfig& config, SimState state, const Observer& observer) {
  config.validate();
  const double skin = config.skin();
  VerletList list = build_verlet(state, skin);

  // Start from consistent accelerations.
  state.forces = compute_forces(state, list, config);
  state.derivatives[2] = state.forces.array().rowwise() / state.mass.transpose().array();

  // Upper bound on the energy the system can hold: what it starts with plus
  // the work the drive can do moving everything to the center.
  double energy_bound = kinetic_energy(state);
  const Eigen::Vector2d center = state.box.center();
  for (int i = 0; i < state.size(); ++i) {
    energy_bound += state.mass[i] * config.gravity * (state.position().col(i) - center).norm();
  }

  SimResult result;
  bool armed = false;
  for (std::int64_t step = 1; step <= config.max_steps; ++step) {
    state = predict(std::move(state), config.dt);
    if (list.stale(state.position())) list = build_verlet(state, skin);
    const Eigen::Matrix2Xd forces = compute_forces(state, list, config);
    state = correct(std::move(state), forces, config);
    result.steps = step;

    if (step % config.record_interval != 0 && step != config.max_steps) continue;
    const ParticleSet snapshot = to_particle_set(state);
    SeriesSample sample{step, kinetic_energy(state), 0.0};
    if (!snapshot.empty()) sample.packing_fraction = measure_packing_fraction(snapshot, central_region(snapshot));
    result.series.push_back(sample);
    if (observer) observer(state, sample);

    if (energy_bound > 0.0 && sample.kinetic_energy > 1e3 * energy_bound) {
      throw SimulationError("unstable: kinetic energy " + std::to_string(sample.kinetic_energy) +
                                " J exceeds 1000x the available work " + std::to_string(energy_bound) + " J",
                            step);
    }
    if (config.ke_threshold > 0.0) {
      if (sample.kinetic_energy > config.ke_threshold) {
        armed = true;
      } else if (armed) {
        result.reason = Termination::kinetic_energy;
        break;
      }
    }
    if (config.target_packing_fraction > 0.0 && sample.packing_fraction >= config.target_packing_fraction) {
      result.reason = Termination::packing_fraction;
      break;
    }
  }
  result.particles = to_particle_set(state);
  return result;
}

void write_series(const std::vector<SeriesSample>& series, std::ostream& out) {
  char buf[128];
  out << "step,ke,packing_fraction\n";
  for (const SeriesSample& s : series) {
    std::snprintf(buf, sizeof buf, "%lld,%.9g,%.9g\n", static_cast<long long>(s.step), s.kinetic_energy,
                  s.packing_fraction);
    out << buf;
  }
}

}  // namespace packnet::dem
