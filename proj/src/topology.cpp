#include "photonic/topology.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "photonic/collectives.hpp"
#include "photonic/error.hpp"

namespace photonic {

std::string_view to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Ring: return "ring";
    case TopologyKind::CoprimeRingUnion: return "coprime-ring-union";
    case TopologyKind::Matched: return "matched";
    case TopologyKind::Custom: return "custom";
  }
  return "custom";
}

Topology::Topology(int n, std::vector<Edge> edges, TopologyKind kind)
    : n_(n), kind_(kind), edges_(std::move(edges)) {
  if (n_ < 1) {
    fail(ErrorKind::InvalidParameter, "topology needs at least one node, got n=" + std::to_string(n_));
  }
  for (const Edge& e : edges_) {
    if (e.src < 0 || e.src >= n_ || e.dst < 0 || e.dst >= n_) {
      fail(ErrorKind::InvalidParameter,
           "edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) + ") out of range for n=" + std::to_string(n_));
    }
    if (e.src == e.dst) {
      fail(ErrorKind::InvalidParameter, "self-loop at node " + std::to_string(e.src));
    }
    if (sgn(e.capacity) <= 0) {
      fail(ErrorKind::InvalidParameter,
           "edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) + ") has non-positive capacity");
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].src == edges_[i - 1].src && edges_[i].dst == edges_[i - 1].dst) {
      fail(ErrorKind::InvalidParameter,
           "duplicate edge (" + std::to_string(edges_[i].src) + "," + std::to_string(edges_[i].dst) + ")");
    }
  }

  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (const Edge& e : edges_) ++offsets_[static_cast<std::size_t>(e.src) + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  for (NodeId v = 0; v < n_; ++v) max_out_degree_ = std::max(max_out_degree_, out_degree(v));

  if (kind_ == TopologyKind::Matched) {
    std::vector<int> in_degree(static_cast<std::size_t>(n_), 0);
    for (const Edge& e : edges_) {
      if (++in_degree[static_cast<std::size_t>(e.dst)] > 1) {
        fail(ErrorKind::InvalidParameter, "matched topology: node " + std::to_string(e.dst) + " has in-degree > 1");
      }
    }
    if (max_out_degree_ > 1) {
      fail(ErrorKind::InvalidParameter, "matched topology: out-degree > 1");
    }
  }

  fingerprint_ = "n=" + std::to_string(n_) + ";";
  for (const Edge& e : edges_) {
    fingerprint_ += std::to_string(e.src) + ">" + std::to_string(e.dst);
    if (e.capacity != 1) fingerprint_ += ":" + to_fraction_string(e.capacity);
    fingerprint_ += ",";
  }
}

std::span<const Edge> Topology::out_edges(NodeId node) const {
  const auto begin = offsets_[static_cast<std::size_t>(node)];
  const auto end = offsets_[static_cast<std::size_t>(node) + 1];
  return std::span<const Edge>(edges_).subspan(begin, end - begin);
}

int Topology::out_degree(NodeId node) const {
  return static_cast<int>(offsets_[static_cast<std::size_t>(node) + 1] - offsets_[static_cast<std::size_t>(node)]);
}

std::optional<std::size_t> Topology::find_edge(NodeId src, NodeId dst) const {
  if (src < 0 || src >= n_) return std::nullopt;
  const auto out = out_edges(src);
  auto it = std::lower_bound(out.begin(), out.end(), dst, [](const Edge& e, NodeId d) { return e.dst < d; });
  if (it == out.end() || it->dst != dst) return std::nullopt;
  return first_out_index(src) + static_cast<std::size_t>(it - out.begin());
}

Topology ring(int n) {
  if (n < 2) fail(ErrorKind::InvalidParameter, "ring needs n >= 2, got " + std::to_string(n));
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n));
  for (NodeId j = 0; j < n; ++j) edges.push_back({j, (j + 1) % n, 1});
  return Topology(n, std::move(edges), TopologyKind::Ring);
}

Topology coprime_ring_union(int n, std::span<const int> strides) {
  if (n < 2) fail(ErrorKind::InvalidParameter, "ring union needs n >= 2, got " + std::to_string(n));
  if (strides.empty()) fail(ErrorKind::InvalidParameter, "ring union needs at least one stride");
  std::set<int> seen;
  std::vector<Edge> edges;
  for (int s : strides) {
    if (s < 1 || s >= n) {
      fail(ErrorKind::InvalidParameter, "stride " + std::to_string(s) + " outside [1, n)");
    }
    if (std::gcd(s, n) != 1) {
      fail(ErrorKind::InvalidParameter,
           "stride " + std::to_string(s) + " is not coprime with n=" + std::to_string(n));
    }
    if (!seen.insert(s).second) fail(ErrorKind::InvalidParameter, "duplicate stride " + std::to_string(s));
    for (NodeId j = 0; j < n; ++j) edges.push_back({j, (j + s) % n, 1});
  }
  return Topology(n, std::move(edges), TopologyKind::CoprimeRingUnion);
}

Topology matched_topology(const Step& step, int n) {
  if (auto violation = validate_matching(step, n)) {
    fail(ErrorKind::InvalidParameter, "cannot match invalid step: " + *violation);
  }
  std::vector<Edge> edges;
  edges.reserve(step.pairs.size());
  for (const auto& [src, dst] : step.pairs) edges.push_back({src, dst, 1});
  return Topology(n, std::move(edges), TopologyKind::Matched);
}

std::vector<int> bfs_hops(const Topology& g, NodeId src) {
  if (src < 0 || src >= g.node_count()) {
    fail(ErrorKind::InvalidParameter, "node " + std::to_string(src) + " out of range");
  }
  std::vector<int> hops(static_cast<std::size_t>(g.node_count()), -1);
  std::deque<NodeId> frontier{src};
  hops[static_cast<std::size_t>(src)] = 0;
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop_front();
    for (const Edge& e : g.out_edges(v)) {
      auto& h = hops[static_cast<std::size_t>(e.dst)];
      if (h < 0) {
        h = hops[static_cast<std::size_t>(v)] + 1;
        frontier.push_back(e.dst);
      }
    }
  }
  return hops;
}

std::optional<int> shortest_path_hops(const Topology& g, NodeId src, NodeId dst) {
  if (dst < 0 || dst >= g.node_count()) {
    fail(ErrorKind::InvalidParameter, "node " + std::to_string(dst) + " out of range");
  }
  const int h = bfs_hops(g, src)[static_cast<std::size_t>(dst)];
  if (h < 0) return std::nullopt;
  return h;
}

}  // namespace photonic
