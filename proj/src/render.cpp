#include "packnet/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "packnet/error.hpp"

namespace packnet {

namespace {

const std::vector<Rgb> kSequential = {
    {0x31, 0x36, 0x95}, {0x45, 0x75, 0xb4}, {0x74, 0xad, 0xd1}, {0xab, 0xd9, 0xe9}, {0xe0, 0xf3, 0xf8},
    {0xfe, 0xe0, 0x90}, {0xfd, 0xae, 0x61}, {0xf4, 0x6d, 0x43}, {0xd7, 0x30, 0x27}, {0xa5, 0x00, 0x26},
};

const std::vector<Rgb> kCategorical = {
    {0x1f, 0x77, 0xb4}, {0xff, 0x7f, 0x0e}, {0x2c, 0xa0, 0x2c}, {0xd6, 0x27, 0x28}, {0x94, 0x67, 0xbd},
    {0x8c, 0x56, 0x4b}, {0xe3, 0x77, 0xc2}, {0x7f, 0x7f, 0x7f}, {0xbc, 0xbd, 0x22}, {0x17, 0xbe, 0xcf},
    {0xae, 0xc7, 0xe8}, {0xff, 0xbb, 0x78},
};

// %.6g, with "-0" folded into "0".
std::string num(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void svg_open(std::ostream& out, int width, int height) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string to_hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

ColorMap::ColorMap() : colors_(kSequential) {}

ColorMap::ColorMap(std::vector<Rgb> colors) : colors_(std::move(colors)) {
  if (colors_.empty()) throw DomainError("color map needs at least one color");
}

ColorMap ColorMap::sequential(int nbins) {
  if (nbins < 1) throw DomainError("color map needs at least one bin");
  if (nbins == static_cast<int>(kSequential.size())) return ColorMap();
  std::vector<Rgb> colors;
  const int last = static_cast<int>(kSequential.size()) - 1;
  for (int k = 0; k < nbins; ++k) {
    const double t = nbins == 1 ? 0.0 : static_cast<double>(k) * last / (nbins - 1);
    const int lo = std::min(static_cast<int>(t), last - 1);
    const double f = t - lo;
    auto mix = [&](std::uint8_t a, std::uint8_t b) {
      return static_cast<std::uint8_t>(std::lround((1.0 - f) * a + f * b));
    };
    const Rgb a = kSequential[lo], b = kSequential[lo + 1];
    colors.push_back({mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)});
  }
  return ColorMap(std::move(colors));
}

ColorMap ColorMap::categorical() { return ColorMap(kCategorical); }

Rgb ColorMap::color(int bin) const {
  if (bin < 0 || bin >= size()) throw DomainError("bin " + std::to_string(bin) + " outside the color map");
  return colors_[bin];
}

Rgb ColorMap::cyclic(int index) const {
  const int n = size();
  return colors_[((index % n) + n) % n];
}

void render_particles(std::ostream& out, const ParticleSet& set, const Eigen::VectorXd& scalar,
                      const RenderSpec& spec) {
  const auto n = static_cast<Eigen::Index>(set.size());
  if (scalar.size() != n) {
    throw DomainError("scalar has " + std::to_string(scalar.size()) + " entries for " + std::to_string(n) +
                      " particles");
  }
  if (spec.size_px < 16) throw DomainError("image size must be at least 16 px");

  std::vector<Rgb> fill(static_cast<std::size_t>(n));
  if (spec.kind == ScalarKind::categorical) {
    const ColorMap palette = ColorMap::categorical();
    for (Eigen::Index i = 0; i < n; ++i) fill[i] = palette.cyclic(static_cast<int>(std::lround(scalar[i])));
  } else if (n > 0) {
    const ColorMap colors = ColorMap::sequential(spec.bins);
    const BinnedVector binned = bin_vector(scalar, spec.bins);
    for (Eigen::Index i = 0; i < n; ++i) fill[i] = colors.color(binned.bin_of[i]);
  }

  // Uniform scale so circles stay circles; y grows upward in the data.
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (n > 0) {
    x0 = y0 = std::numeric_limits<double>::infinity();
    x1 = y1 = -x0;
    for (const Particle& p : set.particles) {
      x0 = std::min(x0, p.position.x() - p.radius);
      x1 = std::max(x1, p.position.x() + p.radius);
      y0 = std::min(y0, p.position.y() - p.radius);
      y1 = std::max(y1, p.position.y() + p.radius);
    }
  }
  const double margin = 0.02 * spec.size_px;
  const double header = spec.title.empty() ? 0.0 : 24.0;
  const double span = std::max(x1 - x0, y1 - y0);
  const double scale = (spec.size_px - 2.0 * margin) / span;
  const int width = spec.size_px;
  const int height = static_cast<int>(std::ceil((y1 - y0) * scale + 2.0 * margin + header));
  const double ox = 0.5 * (width - (x1 - x0) * scale);

  svg_open(out, width, height);
  if (!spec.title.empty()) {
    out << "<text x=\"" << num(0.5 * width) << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\" "
        << "text-anchor=\"middle\">" << escape(spec.title) << "</text>\n";
  }
  out << "<g stroke=\"#202020\" stroke-width=\"0.5\">\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const Particle& p = set.particles[i];
    const double cx = ox + (p.position.x() - x0) * scale;
    const double cy = header + margin + (y1 - p.position.y()) * scale;
    out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(p.radius * scale)
        << "\" fill=\"" << to_hex(fill[i]) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void render_particles(const std::filesystem::path& path, const ParticleSet& set, const Eigen::VectorXd& scalar,
                      const RenderSpec& spec) {
  auto out = open_output(path);
  render_particles(out, set, scalar, spec);
  check_written(out, path);
}

void render_histogram(std::ostream& out, const BinnedVector& binned, const std::string& title) {
  const int bins = binned.bins();
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  const ColorMap colors = ColorMap::sequential(bins);

  constexpr int kWidth = 640, kHeight = 400;
  constexpr double left = 50, right = 20, top = 40, bottom = 50;
  const double plot_w = kWidth - left - right;
  const double plot_h = kHeight - top - bottom;
  const int peak = std::max(1, *std::max_element(binned.counts.begin(), binned.counts.end()));
  const double bar_w = plot_w / bins;

  svg_open(out, kWidth, kHeight);
  if (!title.empty()) {
    out << "<text x=\"" << num(kWidth / 2.0) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
        << "text-anchor=\"middle\">" << escape(title) << "</text>\n";
  }
  const double base = top + plot_h;
  out << "<line x1=\"" << num(left) << "\" y1=\"" << num(base) << "\" x2=\"" << num(left + plot_w) << "\" y2=\""
      << num(base) << "\" stroke=\"#000000\"/>\n";
  out << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\"" << num(base)
      << "\" stroke=\"#000000\"/>\n";
  for (int k = 0; k < bins; ++k) {
    const double h = plot_h * binned.counts[k] / peak;
    const double x = left + k * bar_w;
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(base - h) << "\" width=\"" << num(bar_w) << "\" height=\""
        << num(h) << "\" fill=\"" << to_hex(colors.color(k)) << "\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n";
    out << "<text x=\"" << num(x + 0.5 * bar_w) << "\" y=\"" << num(base - h - 4) << "\" font-family=\"sans-serif\" "
        << "font-size=\"11\" text-anchor=\"middle\">" << binned.counts[k] << "</text>\n";
  }
  for (int k = 0; k <= bins; ++k) {
    out << "<text x=\"" << num(left + k * bar_w) << "\" y=\"" << num(base + 16) << "\" font-family=\"sans-serif\" "
        << "font-size=\"9\" text-anchor=\"middle\">" << num(binned.edges[k]) << "</text>\n";
  }
  out << "</svg>\n";
}

void render_histogram(const std::filesystem::path& path, const BinnedVector& binned, const std::string& title) {
  auto out = open_output(path);
  render_histogram(out, binned, title);
  check_written(out, path);
}

}  // namespace packnet
