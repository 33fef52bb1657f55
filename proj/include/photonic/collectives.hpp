#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "photonic/topology.hpp"

namespace photonic {

using Bytes = std::uint64_t;

/// One communication round: a partial permutation plus the number of
/// bytes every communicating pair exchanges in this round.
struct Step {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  Bytes volume = 0;

  bool operator==(const Step&) const = default;
  /// True when both steps use exactly the same set of (src, dst) pairs.
  bool same_pattern(const Step& other) const;
};

/// Ordered sequence of steps; order carries data dependencies and must
/// not be permuted.
struct Collective {
  int n = 0;
  std::vector<Step> steps;
  std::string label;

  std::size_t step_count() const noexcept { return steps.size(); }
  Bytes total_volume() const;
};

/// Dense n x n byte matrix with a zero diagonal.
class DemandMatrix {
 public:
  explicit DemandMatrix(int n);

  int size() const noexcept { return n_; }
  Bytes at(NodeId src, NodeId dst) const { return cells_[index(src, dst)]; }
  Bytes& at(NodeId src, NodeId dst) { return cells_[index(src, dst)]; }
  Bytes row_sum(NodeId src) const;

  bool operator==(const DemandMatrix&) const = default;

 private:
  std::size_t index(NodeId src, NodeId dst) const {
    return static_cast<std::size_t>(src) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(dst);
  }
  int n_;
  std::vector<Bytes> cells_;
};

/// Rabenseifner halving/doubling AllReduce: log2(n) reduce-scatter rounds
/// followed by log2(n) mirrored allgather rounds.
Collective recursive_halving_doubling(int n, Bytes m);

/// Swing AllReduce; peers alternate direction with distance
/// (1 - (-2)^(h+1)) / 3 and volumes follow the halving/doubling schedule.
Collective swing_allreduce(int n, Bytes m);

/// Ring AllReduce: 2(n-1) shift-by-one rounds of m/n bytes.
Collective ring_allreduce(int n, Bytes m);

/// Linear-shift All-to-All: round i sends the m/n block for peer j+i.
Collective all_to_all(int n, Bytes m);

/// Signed Swing peer distance for round h.
std::int64_t swing_distance(int h);

/// nullopt when `step` is a valid partial permutation on 0..n-1 with a
/// positive volume, otherwise a description naming the broken rule and node.
std::optional<std::string> validate_matching(const Step& step, int n);

/// Throws Error(Validation) naming the first invalid step.
void validate_collective(const Collective& c);

/// Sum over steps of volume * permutation matrix.
DemandMatrix aggregate_demand(const Collective& c);

/// Bytes each node sends over the whole collective, indexed by node.
std::vector<Bytes> bytes_sent_per_node(const Collective& c);

/// Parses the collective JSON document without semantic validation.
Collective parse_collective(std::string_view document);

/// parse_collective followed by validate_collective.
Collective load_collective(std::string_view document);

std::string collective_to_json(const Collective& c);

/// Builds a generator by tag: rhd | swing | ring | alltoall.
Collective make_collective(std::string_view algorithm, int n, Bytes m);

bool is_power_of_two(int n);

}  // namespace photonic
