#include "packnet/partition.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "packnet/error.hpp"

namespace packnet {

std::vector<std::vector<int>> Partition::groups() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(static_cast<int>(i));
  return out;
}

Partition make_partition(std::vector<int> assignment, double score) {
  std::unordered_map<int, int> remap;
  for (int& c : assignment) {
    auto [it, inserted] = remap.try_emplace(c, static_cast<int>(remap.size()));
    c = it->second;
  }
  Partition p;
  p.count = static_cast<int>(remap.size());
  p.assignment = std::move(assignment);
  p.score = score;
  return p;
}

void write_partition(std::ostream& out, const Partition& partition, std::span<const std::int64_t> labels) {
  for (std::size_t i = 0; i < partition.assignment.size(); ++i) {
    out << (labels.empty() ? static_cast<std::int64_t>(i) : labels[i]) << ' ' << partition.assignment[i] << '\n';
  }
}

Partition read_partition(std::istream& in, std::span<const std::int64_t> labels) {
  std::map<std::int64_t, int> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = static_cast<int>(i);

  std::vector<std::pair<int, int>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::int64_t id = 0;
    int community = 0;
    if (!(ss >> id)) continue;
    if (!(ss >> community)) throw ParseError("expected `node_id community_id`", line_no);
    int node = static_cast<int>(id);
    if (!labels.empty()) {
      auto it = index.find(id);
      if (it == index.end()) throw ParseError("unknown node id " + std::to_string(id), line_no);
      node = it->second;
    }
    rows.emplace_back(node, community);
  }
  const std::size_t n = labels.empty() ? rows.size() : labels.size();
  std::vector<int> assignment(n, -1);
  for (auto [node, community] : rows) {
    if (node < 0 || static_cast<std::size_t>(node) >= n) throw ValidationError("node id out of range");
    assignment[node] = community;
  }
  if (std::find(assignment.begin(), assignment.end(), -1) != assignment.end()) {
    throw ValidationError("partition does not assign every node");
  }
  return make_partition(std::move(assignment));
}

std::string format_groups(const Partition& partition, std::span<const std::int64_t> labels) {
  std::ostringstream os;
  os << '{';
  const auto groups = partition.groups();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    os << (g ? ",{" : "{");
    for (std::size_t k = 0; k < groups[g].size(); ++k) {
      const int i = groups[g][k];
      os << (k ? "," : "") << (labels.empty() ? static_cast<std::int64_t>(i) : labels[static_cast<std::size_t>(i)]);
    }
    os << '}';
  }
  os << '}';
  return os.str();
}

}  // namespace packnet
