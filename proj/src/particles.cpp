#include "packnet/particles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <unordered_set>

#include "packnet/error.hpp"

namespace packnet {

double sphere_mass(double radius, double density) {
  return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius * density;
}

Eigen::Matrix2Xd ParticleSet::positions() const {
  Eigen::Matrix2Xd out(2, static_cast<Eigen::Index>(particles.size()));
  for (std::size_t i = 0; i < particles.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = particles[i].position;
  return out;
}

Eigen::VectorXd ParticleSet::radii() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(particles.size()));
  for (std::size_t i = 0; i < particles.size(); ++i) out[static_cast<Eigen::Index>(i)] = particles[i].radius;
  return out;
}

void ParticleSet::validate() const {
  if (labels.size() != particles.size()) {
    throw ValidationError("label map size " + std::to_string(labels.size()) + " does not match " +
                          std::to_string(particles.size()) + " particles");
  }
  std::unordered_set<std::int64_t> seen;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const Particle& p = particles[i];
    if (!(p.radius > 0.0)) throw ValidationError("particle " + std::to_string(labels[i]) + ": radius must be positive");
    if (!(p.mass > 0.0)) throw ValidationError("particle " + std::to_string(labels[i]) + ": mass must be positive");
    if (!p.position.allFinite()) throw ValidationError("particle " + std::to_string(labels[i]) + ": non-finite position");
    if (!box.contains(p.position)) {
      throw ValidationError("particle " + std::to_string(labels[i]) + ": center outside box");
    }
    if (!seen.insert(labels[i]).second) throw ValidationError("duplicate particle id " + std::to_string(labels[i]));
  }
}

Box padded_bounds(const std::vector<Particle>& particles) {
  if (particles.empty()) return {};
  Box b{particles[0].position.x(), particles[0].position.x(), particles[0].position.y(), particles[0].position.y()};
  double r_max = 0.0;
  for (const Particle& p : particles) {
    b.x_min = std::min(b.x_min, p.position.x());
    b.x_max = std::max(b.x_max, p.position.x());
    b.y_min = std::min(b.y_min, p.position.y());
    b.y_max = std::max(b.y_max, p.position.y());
    r_max = std::max(r_max, p.radius);
  }
  const double pad = 2.0 * r_max;
  return {b.x_min - pad, b.x_max + pad, b.y_min - pad, b.y_max + pad};
}

ParticleSet make_particle_set(std::vector<Particle> particles) {
  ParticleSet set;
  set.box = padded_bounds(particles);
  set.labels.resize(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) set.labels[i] = static_cast<std::int64_t>(i);
  set.particles = std::move(particles);
  set.validate();
  return set;
}

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_box_comment(const std::string& comment, Box& box, std::size_t line_no) {
  std::istringstream ss(comment);
  std::string word;
  if (!(ss >> word) || word != "box") return false;
  if (!(ss >> box.x_min >> box.x_max >> box.y_min >> box.y_max)) throw ParseError("malformed box comment", line_no);
  if (!(box.x_max > box.x_min) || !(box.y_max > box.y_min)) throw ParseError("box has no extent", line_no);
  return true;
}

}  // namespace

ParticleSet read_particles(std::istream& in, double density) {
  std::vector<Particle> particles;
  std::vector<std::int64_t> labels;
  Box box;
  bool have_box = false;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      if (strip(line.substr(0, hash)).empty()) have_box |= parse_box_comment(line.substr(hash + 1), box, line_no);
      line.resize(hash);
    }
    line = strip(line);
    if (line.empty()) continue;

    std::istringstream ss(line);
    std::int64_t id = 0;
    Particle p;
    if (!(ss >> id >> p.position.x() >> p.position.y() >> p.radius)) {
      throw ParseError("expected `id x y radius [mass]`, got `" + line + "`", line_no);
    }
    if (!(ss >> p.mass)) {
      if (!ss.eof()) throw ParseError("malformed mass in `" + line + "`", line_no);
      p.mass = p.radius > 0.0 ? sphere_mass(p.radius, density) : 0.0;
    }
    std::string extra;
    if (ss.clear(), ss >> extra) throw ParseError("trailing field `" + extra + "`", line_no);
    if (!(p.radius > 0.0)) throw ValidationError("line " + std::to_string(line_no) + ": radius must be positive");
    particles.push_back(p);
    labels.push_back(id);
  }

  ParticleSet set;
  set.box = have_box ? box : padded_bounds(particles);
  set.particles = std::move(particles);
  set.labels = std::move(labels);
  set.validate();
  return set;
}

ParticleSet load_particles(const std::filesystem::path& path, double density) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_particles(in, density);
}

void write_particles(const ParticleSet& set, std::ostream& out) {
  char buf[256];
  out << "# id x y radius mass\n";
  if (!set.empty()) {
    std::snprintf(buf, sizeof buf, "# box %.17g %.17g %.17g %.17g\n", set.box.x_min, set.box.x_max, set.box.y_min,
                  set.box.y_max);
    out << buf;
  }
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Particle& p = set.particles[i];
    const long long id = i < set.labels.size() ? static_cast<long long>(set.labels[i]) : static_cast<long long>(i);
    std::snprintf(buf, sizeof buf, "%lld %.17g %.17g %.17g %.17g\n", id, p.position.x(), p.position.y(), p.radius,
                  p.mass);
    out << buf;
  }
}

void write_particles(const ParticleSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_particles(set, out);
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

ParticleSet generate_hex_packing(int shells, double radius, double density) {
  if (shells < 0) throw DomainError("shells must be >= 0");
  if (!(radius > 0.0)) throw DomainError("radius must be positive");

  struct Site {
    int ring;
    double angle;
    Eigen::Vector2d pos;
  };
  std::vector<Site> sites;
  const double spacing = 2.0 * radius;
  for (int q = -shells; q <= shells; ++q) {
    for (int r = -shells; r <= shells; ++r) {
      const int s = -q - r;
      const int ring = std::max({std::abs(q), std::abs(r), std::abs(s)});
      if (ring > shells) continue;
      Eigen::Vector2d pos(spacing * (q + 0.5 * r), spacing * (std::sqrt(3.0) / 2.0 * r));
      sites.push_back({ring, ring == 0 ? 0.0 : std::atan2(pos.y(), pos.x()), pos});
    }
  }
  // Center first, then ring by ring counter-clockwise.
  std::stable_sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    return a.ring != b.ring ? a.ring < b.ring : a.angle < b.angle;
  });

  std::vector<Particle> particles;
  particles.reserve(sites.size());
  const double mass = sphere_mass(radius, density);
  for (const Site& s : sites) particles.push_back({s.pos, radius, mass});
  return make_particle_set(std::move(particles));
}

ParticleSet generate_square_region_packing(int rows, int cols, double radius, double density) {
  if (rows < 1 || cols < 1) throw DomainError("rows and cols must be >= 1");
  if (!(radius > 0.0)) throw DomainError("radius must be positive");

  const double dy = std::sqrt(3.0) * radius;
  const double width = 2.0 * radius * (cols - 1) + (rows > 1 ? radius : 0.0);
  const double height = dy * (rows - 1);
  const double mass = sphere_mass(radius, density);

  std::vector<Particle> particles;
  particles.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (int r = 0; r < rows; ++r) {
    const double shift = (r % 2 == 1) ? radius : 0.0;
    for (int c = 0; c < cols; ++c) {
      Eigen::Vector2d pos(2.0 * radius * c + shift - 0.5 * width, dy * r - 0.5 * height);
      particles.push_back({pos, radius, mass});
    }
  }
  return make_particle_set(std::move(particles));
}

}  // namespace packnet
