#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "packnet/particles.hpp"

namespace packnet::dem {

/// Simulation parameters. Material defaults: Y = 1e9 Pa, mu = 0.5,
/// A = 0.01 s, gamma' = 10 N s/m, rho = 8 g/cm^3, dt = 1e-6 s.
struct SimConfig {
  double youngs_modulus = 1e9;      // Pa
  double friction = 0.5;            // Coulomb coefficient
  double damping = 0.01;            // s, viscoelastic normal damping A
  double tangential_damping = 10.0; // N s / m
  double density = 8000.0;          // kg / m^3
  double dt = 1e-6;                 // s
  double poisson = 0.3;
  double gravity = 9.81;            // m / s^2, centripetal drive; 0 disables it
  double radius = 1e-2;             // m
  double verlet_skin = 0.0;         // m; 0 means radius / 2
  int n_particles = 200;
  double box_size = 0.0;            // m, square side; 0 derives it from the fraction
  double initial_packing_fraction = 0.12;
  bool walls = true;

  std::int64_t max_steps = 2'000'000;
  double ke_threshold = 0.0;             // J; 0 disables
  double target_packing_fraction = 0.0;  // 0 disables
  std::int64_t record_interval = 1000;

  double skin() const { return verlet_skin > 0.0 ? verlet_skin : 0.5 * radius; }
  double side() const;
  double particle_mass() const;
  /// Throws DomainError on non-physical values.
  void validate() const;
};

/// `key = value` lines, keys named after the fields; `#` comments.
SimConfig read_sim_config(std::istream& in);
SimConfig load_sim_config(const std::filesystem::path& path);
void write_sim_config(const SimConfig& config, std::ostream& out);

/// Gear state. derivatives[k] holds the k-th time derivative of the
/// positions (k = 0..4), one column per particle.
struct SimState {
  static constexpr int kOrder = 5;
  std::array<Eigen::Matrix2Xd, kOrder> derivatives;
  Eigen::VectorXd radius;
  Eigen::VectorXd mass;
  Eigen::Matrix2Xd forces;
  Box box;
  double time = 0.0;
  std::int64_t step = 0;

  int size() const { return static_cast<int>(radius.size()); }
  const Eigen::Matrix2Xd& position() const { return derivatives[0]; }
  const Eigen::Matrix2Xd& velocity() const { return derivatives[1]; }
};

/// Places `n_particles` non-overlapping discs uniformly in the box by
/// rejection sampling. All derivatives start at zero. Throws DomainError for
/// a requested fraction above 0.9 and SimulationError when placement fails.
SimState initialize(const SimConfig& config, std::uint64_t seed);

/// Taylor predictor over the derivative stack.
SimState predict(SimState state, double dt);

/// Candidate pairs with surface gap <= skin, taken at `reference`.
struct VerletList {
  std::vector<std::vector<int>> neighbors;  // ascending, symmetric
  Eigen::Matrix2Xd reference;
  double skin = 0.0;

  /// True once some particle moved more than skin / 2 since the build.
  bool stale(const Eigen::Matrix2Xd& positions) const;
  std::size_t pair_count() const;
};

VerletList build_verlet(const SimState& state, double skin);

/// Hertz normal force magnitude with viscoelastic damping for overlap `xi`
/// and overlap rate `xi_rate`, clamped at zero.
double normal_force(double xi, double xi_rate, double effective_radius, const SimConfig& config);

/// Contact forces over the Verlet pairs (viscoelastic Hertz normal,
/// Haff-Werner tangential), wall contacts and the centripetal drive.
Eigen::Matrix2Xd compute_forces(const SimState& state, const VerletList& list, const SimConfig& config);

/// Gear corrector: blends the acceleration error F/m - a_pred into every
/// level with coefficients 19/90, 3/4, 1, 1/2, 1/12. Throws SimulationError
/// on non-finite results.
SimState correct(SimState state, const Eigen::Matrix2Xd& forces, const SimConfig& config);

double kinetic_energy(const SimState& state);
ParticleSet to_particle_set(const SimState& state);

/// Disc area of particles centered in `region` over the region area.
double measure_packing_fraction(const ParticleSet& set, const Box& region);

/// Square around the centroid of the particles with half-side equal to half
/// the radius of an ideal hexagonal pile of the same count.
Box central_region(const ParticleSet& set);

struct SeriesSample {
  std::int64_t step = 0;
  double kinetic_energy = 0.0;
  double packing_fraction = 0.0;
};

enum class Termination { max_steps, kinetic_energy, packing_fraction };
std::string to_string(Termination t);

struct SimResult {
  ParticleSet particles;
  std::vector<SeriesSample> series;
  Termination reason = Termination::max_steps;
  std::int64_t steps = 0;
};

/// Called at every record interval.
using Observer = std::function<void(const SimState&, const SeriesSample&)>;

/// Predict, refresh the Verlet list, compute forces, correct; record every
/// `record_interval` steps. Stops at max_steps, when the kinetic energy drops
/// below the threshold after having exceeded it, or when the central packing
/// fraction reaches the target. Aborts with SimulationError when the kinetic
/// energy exceeds 1000 times the work the drive can do.
SimResult run(const SimConfig& config, std::uint64_t seed, const Observer& observer = {});
SimResult run(const SimConfig& config, SimState state, const Observer& observer = {});

/// CSV `step,ke,packing_fraction`.
void write_series(const std::vector<SeriesSample>& series, std::ostream& out);

}  // namespace packnet::dem
