#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace packnet {

inline constexpr double kDefaultDensity = 8000.0;  // kg/m^3
inline constexpr double kDefaultRadius = 1.0e-3;   // m

/// Axis-aligned rectangle in meters.
struct Box {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Eigen::Vector2d center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }
  bool operator==(const Box&) const = default;
};

struct Particle {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double radius = kDefaultRadius;
  double mass = 0.0;
};

/// Mass of a sphere of the given radius. Discs in the plane are treated as
/// spheres, the usual convention for 2D granular simulation.
double sphere_mass(double radius, double density = kDefaultDensity);

/// A 2D packing. The index of a particle is its node id in every downstream
/// matrix; `labels` keeps the ids it carried in its source file.
struct ParticleSet {
  std::vector<Particle> particles;
  Box box;
  std::vector<std::int64_t> labels;

  std::size_t size() const { return particles.size(); }
  bool empty() const { return particles.empty(); }

  Eigen::Matrix2Xd positions() const;
  Eigen::VectorXd radii() const;

  /// Throws ValidationError on non-positive radius/mass, duplicate labels,
  /// a label count mismatch or a center outside the box.
  void validate() const;
};

/// Tight bounds of the particle centers padded by two (maximum) radii.
Box padded_bounds(const std::vector<Particle>& particles);

/// Wraps particles into a validated set with labels 0..N-1 and a padded box.
ParticleSet make_particle_set(std::vector<Particle> particles);

/// Reads `id x y radius [mass]` lines; `#` starts a comment. A comment of the
/// form `# box x_min x_max y_min y_max` sets the box, otherwise the padded
/// bounds are used. Missing masses are sphere masses at `density`.
ParticleSet read_particles(std::istream& in, double density = kDefaultDensity);
ParticleSet load_particles(const std::filesystem::path& path, double density = kDefaultDensity);

void write_particles(const ParticleSet& set, std::ostream& out);
void write_particles(const ParticleSet& set, const std::filesystem::path& path);

/// Hexagonal cluster of equal touching discs: 1 + 3 s (s + 1) particles,
/// centered on the origin.
ParticleSet generate_hex_packing(int shells, double radius = kDefaultRadius,
                                 double density = kDefaultDensity);

/// `rows` x `cols` triangular-lattice block; odd rows are shifted by one
/// radius. Centered on the origin.
ParticleSet generate_square_region_packing(int rows, int cols, double radius = kDefaultRadius,
                                           double density = kDefaultDensity);

}  // namespace packnet
