#include "packnet/network.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "packnet/error.hpp"
#include "packnet/geometry.hpp"

namespace packnet {

namespace {

std::string describe_components(const std::vector<std::vector<int>>& comps) {
  std::ostringstream os;
  os << "network is disconnected (" << comps.size() << " components:";
  for (std::size_t c = 0; c < comps.size() && c < 8; ++c) {
    os << (c ? "; " : " ") << "{";
    for (std::size_t k = 0; k < comps[c].size() && k < 6; ++k) os << (k ? "," : "") << comps[c][k];
    if (comps[c].size() > 6) os << ",... " << comps[c].size() << " nodes";
    os << "}";
  }
  if (comps.size() > 8) os << "; ...";
  os << "); analyze components separately";
  return os.str();
}

}  // namespace

DisconnectedError::DisconnectedError(std::vector<std::vector<int>> components)
    : Error(describe_components(components)), components_(std::move(components)) {}

Network::Network(int n, std::vector<Edge> edges, Eigen::Matrix2Xd positions)
    : n_(n), edges_(std::move(edges)), positions_(std::move(positions)) {
  if (n < 0) throw ValidationError("node count must be >= 0");
  if (positions_.cols() != 0 && positions_.cols() != n) {
    throw ValidationError("positions must have one column per node");
  }
  for (Edge& e : edges_) {
    if (e.i == e.j) throw ValidationError("self loop at node " + std::to_string(e.i));
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) {
      throw ValidationError("edge {" + std::to_string(e.i) + "," + std::to_string(e.j) + "} out of range");
    }
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw ValidationError("repeated edge {" + std::to_string(dup->i) + "," + std::to_string(dup->j) + "}");
  }

  degrees_ = Eigen::VectorXi::Zero(n);
  for (const Edge& e : edges_) {
    ++degrees_[e.i];
    ++degrees_[e.j];
  }
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degrees_[i];
  adj_.resize(2 * edges_.size());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adj_[fill[e.i]++] = e.j;
    adj_[fill[e.j]++] = e.i;
  }
  for (int i = 0; i < n; ++i) std::sort(adj_.begin() + offsets_[i], adj_.begin() + offsets_[i + 1]);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(adj_.size());
  for (const Edge& e : edges_) {
    triplets.emplace_back(e.i, e.j, 1.0);
    triplets.emplace_back(e.j, e.i, 1.0);
  }
  matrix_.resize(n, n);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();
}

bool Network::has_edge(int i, int j) const {
  const auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

Network Network::induced(std::span<const int> nodes) const {
  std::vector<int> local(static_cast<std::size_t>(n_), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k] < 0 || nodes[k] >= n_) throw ValidationError("induced: node out of range");
    if (local[nodes[k]] != -1) throw ValidationError("induced: repeated node " + std::to_string(nodes[k]));
    local[nodes[k]] = static_cast<int>(k);
  }
  std::vector<Edge> sub;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    for (int j : neighbors(nodes[k])) {
      if (local[j] > static_cast<int>(k)) sub.push_back({static_cast<int>(k), local[j]});
    }
  }
  Eigen::Matrix2Xd pos;
  if (has_positions()) {
    pos.resize(2, static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t k = 0; k < nodes.size(); ++k) pos.col(static_cast<Eigen::Index>(k)) = positions_.col(nodes[k]);
  }
  return Network(static_cast<int>(nodes.size()), std::move(sub), std::move(pos));
}

std::vector<std::vector<int>> Network::components() const {
  std::vector<int> label(static_cast<std::size_t>(n_), -1);
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  for (int s = 0; s < n_; ++s) {
    if (label[s] != -1) continue;
    const int c = static_cast<int>(out.size());
    out.emplace_back();
    label[s] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      out[c].push_back(u);
      for (int v : neighbors(u)) {
        if (label[v] == -1) {
          label[v] = c;
          stack.push_back(v);
        }
      }
    }
    std::sort(out[c].begin(), out[c].end());
  }
  return out;
}

bool Network::connected() const { return n_ <= 1 || components().size() == 1; }

Network build_adjacency(const ParticleSet& set, double tolerance) {
  if (!(tolerance >= 0.0)) throw DomainError("contact tolerance must be >= 0");
  const Eigen::Matrix2Xd pos = set.positions();
  const Eigen::VectorXd radii = set.radii();
  const double reach = 2.0 * (radii.size() ? radii.maxCoeff() : 0.0) * (1.0 + tolerance);

  std::vector<Edge> edges;
  for_each_pair_within(pos, reach, [&](int i, int j, double dist) {
    if (dist < 1e-9) {
      throw ValidationError("particles " + std::to_string(set.labels[i]) + " and " + std::to_string(set.labels[j]) +
                            " coincide (duplicate node)");
    }
    if (dist <= (radii[i] + radii[j]) * (1.0 + tolerance)) edges.push_back({i, j});
  });
  return Network(static_cast<int>(set.size()), std::move(edges), pos);
}

double average_degree(const Network& net) {
  if (net.size() == 0) throw DomainError("average degree of an empty network");
  return 2.0 * static_cast<double>(net.edge_count()) / net.size();
}

std::map<int, int> coordination_histogram(const Network& net) {
  std::map<int, int> hist;
  for (int i = 0; i < net.size(); ++i) ++hist[net.degree(i)];
  return hist;
}

void export_adjacency_image(const Network& net, std::ostream& out) {
  const int n = net.size();
  if (n < 1) throw DomainError("adjacency image needs at least one node");
  out << "P5\n" << n << " " << n << "\n255\n";
  std::string row(static_cast<std::size_t>(n), '\0');
  for (int i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), '\0');
    for (int j : net.neighbors(i)) row[j] = static_cast<char>(255);
    out.write(row.data(), n);
  }
}

void export_adjacency_image(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  export_adjacency_image(net, out);
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

void write_edge_list(const Network& net, std::ostream& out) {
  for (const Edge& e : net.edges()) out << e.i << ' ' << e.j << '\n';
}

void write_edge_list(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_edge_list(net, out);
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

Network read_edge_list(std::istream& in, int n) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  int max_node = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    Edge e;
    if (!(ss >> e.i)) continue;
    if (!(ss >> e.j)) throw ParseError("expected `i j`", line_no);
    std::string extra;
    if (ss >> extra) throw ParseError("trailing field `" + extra + "`", line_no);
    max_node = std::max({max_node, e.i, e.j});
    edges.push_back(e);
  }
  return Network(n < 0 ? max_node + 1 : n, std::move(edges));
}

}  // namespace packnet
