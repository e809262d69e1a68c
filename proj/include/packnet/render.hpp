#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "packnet/particles.hpp"
#include "packnet/spectrum.hpp"

namespace packnet {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

/// `#rrggbb`
std::string to_hex(Rgb c);

/// Ordered bin -> color table.
class ColorMap {
 public:
  /// Ten ordered hues, blue (low) through red (high).
  ColorMap();
  explicit ColorMap(std::vector<Rgb> colors);

  /// `nbins` entries interpolated along the default hues (exactly the
  /// default table for nbins = 10).
  static ColorMap sequential(int nbins);
  /// Distinct colors for community ids; ids past the end wrap around.
  static ColorMap categorical();

  int size() const { return static_cast<int>(colors_.size()); }
  /// Throws DomainError for a bin outside [0, size).
  Rgb color(int bin) const;
  /// Wraps around instead of throwing.
  Rgb cyclic(int index) const;

 private:
  std::vector<Rgb> colors_;
};

enum class ScalarKind {
  continuous,  // binned into `bins` equal-width bins
  categorical  // integer ids (communities), one palette color each
};

struct RenderSpec {
  ScalarKind kind = ScalarKind::continuous;
  int bins = 10;
  int size_px = 800;
  std::string title;
};

/// SVG with one circle per particle at its true position and radius, scaled
/// uniformly onto a size_px canvas. All numbers use 6 significant digits, so
/// the bytes depend only on the input. Throws DomainError when the scalar
/// length differs from the particle count.
void render_particles(std::ostream& out, const ParticleSet& set, const Eigen::VectorXd& scalar,
                      const RenderSpec& spec = {});
void render_particles(const std::filesystem::path& path, const ParticleSet& set, const Eigen::VectorXd& scalar,
                      const RenderSpec& spec = {});

/// SVG bar chart, one bar per bin colored like the particle map, each bar
/// labeled with its count.
void render_histogram(std::ostream& out, const BinnedVector& binned, const std::string& title = {});
void render_histogram(const std::filesystem::path& path, const BinnedVector& binned, const std::string& title = {});

}  // namespace packnet
