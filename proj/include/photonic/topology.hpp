#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "photonic/rational.hpp"

namespace photonic {

using NodeId = int;

struct Step;

enum class TopologyKind { Ring, CoprimeRingUnion, Matched, Custom };

std::string_view to_string(TopologyKind kind);

/// Directed link; capacity is in units of one transceiver's bandwidth.
struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  Rational capacity = 1;
};

/// Immutable directed capacitated graph over nodes 0..n-1. Edges are kept
/// sorted by (src, dst) in a CSR layout so BFS and Dijkstra walk
/// contiguous adjacency slices.
class Topology {
 public:
  /// Validates node range, self-loops, duplicates and positive capacity.
  /// kind=Matched additionally requires in/out degree <= 1.
  Topology(int n, std::vector<Edge> edges, TopologyKind kind = TopologyKind::Custom);

  int node_count() const noexcept { return n_; }
  TopologyKind kind() const noexcept { return kind_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Outgoing edges of `node`, sorted by destination id.
  std::span<const Edge> out_edges(NodeId node) const;
  /// Index into edges() of the first out-edge of `node`.
  std::size_t first_out_index(NodeId node) const { return offsets_[static_cast<std::size_t>(node)]; }

  int out_degree(NodeId node) const;
  int max_out_degree() const noexcept { return max_out_degree_; }

  std::optional<std::size_t> find_edge(NodeId src, NodeId dst) const;

  /// Canonical serialization of n and the edge set; equal fingerprints
  /// imply identical graphs. Used as a cache key.
  const std::string& fingerprint() const noexcept { return fingerprint_; }

  bool same_edges(const Topology& other) const { return fingerprint_ == other.fingerprint_; }

 private:
  int n_;
  TopologyKind kind_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  int max_out_degree_ = 0;
  std::string fingerprint_;
};

/// Unidirectional ring j -> j+1 mod n.
Topology ring(int n);

/// Union of the rings j -> j+s mod n for each stride s (gcd(s, n) = 1).
Topology coprime_ring_union(int n, std::span<const int> strides);

/// One unit-capacity edge per communicating pair of `step`.
Topology matched_topology(const Step& step, int n);

/// BFS hop counts from `src`; -1 marks unreachable nodes.
std::vector<int> bfs_hops(const Topology& g, NodeId src);

/// Minimum hop count src -> dst, nullopt when unreachable.
std::optional<int> shortest_path_hops(const Topology& g, NodeId src, NodeId dst);

}  // namespace photonic
