#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace packnet {

/// Node -> community assignment with dense ids 0..count-1 and the score of
/// the objective that produced it.
struct Partition {
  std::vector<int> assignment;
  int count = 0;
  double score = 0.0;

  std::vector<std::vector<int>> groups() const;
};

/// Renumbers communities densely in order of first appearance.
Partition make_partition(std::vector<int> assignment, double score = 0.0);

/// `node_id community_id` per line; `labels` may be empty (row ids).
void write_partition(std::ostream& out, const Partition& partition, std::span<const std::int64_t> labels = {});
Partition read_partition(std::istream& in, std::span<const std::int64_t> labels = {});

/// `{{1,2,3},{4}}` using labels (or row ids).
std::string format_groups(const Partition& partition, std::span<const std::int64_t> labels = {});

}  // namespace packnet
