#include "photonic/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "photonic/error.hpp"

namespace photonic {

std::string_view to_string(FlowMethod method) {
  return method == FlowMethod::UniquePathExact ? "unique-path-exact" : "fptas";
}

bool is_unique_path(const Topology& g) { return g.max_out_degree() <= 1; }

namespace {

void require_valid_step(const Step& step, int n) {
  if (auto violation = validate_matching(step, n)) {
    fail(ErrorKind::InvalidParameter, "invalid step: " + *violation);
  }
}

std::string pair_name(NodeId src, NodeId dst) {
  return "(" + std::to_string(src) + "," + std::to_string(dst) + ")";
}

// Max shortest-path hop count over the step's pairs; throws when any pair
// is unreachable.
int max_pair_hops(const Topology& g, const Step& step) {
  int ell = 0;
  for (const auto& [src, dst] : step.pairs) {
    const int h = bfs_hops(g, src)[static_cast<std::size_t>(dst)];
    if (h < 0) fail(ErrorKind::InfeasibleDemand, "pair " + pair_name(src, dst) + " is unreachable");
    ell = std::max(ell, h);
  }
  return ell;
}

struct ShortestPath {
  long double length = 0;
  std::vector<std::size_t> edges;
};

// Dijkstra under `lengths`; on equal distance the predecessor with the
// smaller node id wins so paths are reproducible.
class PathFinder {
 public:
  explicit PathFinder(const Topology& g)
      : g_(g),
        dist_(static_cast<std::size_t>(g.node_count())),
        pred_edge_(static_cast<std::size_t>(g.node_count())),
        done_(static_cast<std::size_t>(g.node_count())) {}

  ShortestPath find(NodeId src, NodeId dst, const std::vector<long double>& lengths) {
    constexpr long double inf = std::numeric_limits<long double>::infinity();
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::fill(dist_.begin(), dist_.end(), inf);
    std::fill(pred_edge_.begin(), pred_edge_.end(), none);
    std::fill(done_.begin(), done_.end(), false);

    using Entry = std::pair<long double, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist_[static_cast<std::size_t>(src)] = 0;
    queue.emplace(0, src);
    while (!queue.empty()) {
      const auto [d, v] = queue.top();
      queue.pop();
      if (done_[static_cast<std::size_t>(v)]) continue;
      done_[static_cast<std::size_t>(v)] = true;
      if (v == dst) break;
      const std::size_t base = g_.first_out_index(v);
      const auto out = g_.out_edges(v);
      for (std::size_t k = 0; k < out.size(); ++k) {
        const NodeId w = out[k].dst;
        const auto wi = static_cast<std::size_t>(w);
        if (done_[wi]) continue;
        const long double nd = d + lengths[base + k];
        const bool better = nd < dist_[wi];
        const bool tie_smaller =
            nd == dist_[wi] && pred_edge_[wi] != none && v < g_.edges()[pred_edge_[wi]].src;
        if (better || tie_smaller) {
          dist_[wi] = nd;
          pred_edge_[wi] = base + k;
          if (better) queue.emplace(nd, w);
        }
      }
    }
    ShortestPath path;
    path.length = dist_[static_cast<std::size_t>(dst)];
    for (NodeId v = dst; v != src;) {
      const std::size_t e = pred_edge_[static_cast<std::size_t>(v)];
      if (e == none) fail(ErrorKind::InfeasibleDemand, "pair " + pair_name(src, dst) + " is unreachable");
      path.edges.push_back(e);
      v = g_.edges()[e].src;
    }
    std::reverse(path.edges.begin(), path.edges.end());
    return path;
  }

 private:
  const Topology& g_;
  std::vector<long double> dist_;
  std::vector<std::size_t> pred_edge_;
  std::vector<bool> done_;
};

// One Garg-Koenemann run with step size `eta`. Returns the certified
// primal value, or nullopt if the run ended before primal >= (1-eps)*dual.
std::optional<Rational> garg_koenemann(const Topology& g, const Step& step, double eta, double epsilon,
                                       long max_phases) {
  const std::size_t m = g.edge_count();
  std::vector<double> capacity(m);
  std::vector<Rational> exact_capacity(m);
  for (std::size_t e = 0; e < m; ++e) {
    exact_capacity[e] = g.edges()[e].capacity;
    capacity[e] = to_double(exact_capacity[e]);
  }

  const long double start = std::pow(static_cast<long double>(m) / (1.0L - eta), -1.0L / eta);
  std::vector<long double> lengths(m);
  for (std::size_t e = 0; e < m; ++e) lengths[e] = start / capacity[e];
  std::vector<double> flow(m, 0.0);

  PathFinder finder(g);
  long double best_dual = std::numeric_limits<long double>::infinity();
  long phases = 0;

  auto primal_value = [&]() -> Rational {
    Rational worst = 0;
    for (std::size_t e = 0; e < m; ++e) {
      if (flow[e] == 0.0) continue;
      Rational load = from_exact_double(flow[e]) / exact_capacity[e];
      if (load > worst) worst = load;
    }
    return Rational(phases) / worst;
  };

  for (;;) {
    long double volume = 0;
    for (std::size_t e = 0; e < m; ++e) volume += lengths[e] * capacity[e];
    long double demand_length = 0;
    for (const auto& [src, dst] : step.pairs) demand_length += finder.find(src, dst, lengths).length;
    best_dual = std::min(best_dual, volume / demand_length);

    if (phases > 0) {
      const Rational primal = primal_value();
      if (static_cast<long double>(to_double(primal)) >= (1.0L - epsilon) * best_dual) return primal;
    }
    if (volume >= 1.0L || phases >= max_phases) return std::nullopt;

    for (const auto& [src, dst] : step.pairs) {
      double remaining = 1.0;
      while (remaining > 0.0) {
        const ShortestPath path = finder.find(src, dst, lengths);
        double pushed = remaining;
        for (std::size_t e : path.edges) pushed = std::min(pushed, capacity[e]);
        for (std::size_t e : path.edges) {
          flow[e] += pushed;
          lengths[e] *= 1.0L + eta * pushed / capacity[e];
        }
        remaining -= pushed;
      }
    }
    ++phases;
  }
}

}  // namespace

FlowResult theta_unique_path(const Topology& g, const Step& step) {
  require_valid_step(step, g.node_count());
  if (!is_unique_path(g)) {
    fail(ErrorKind::WrongMethod, "topology has a node with out-degree > 1; use the FPTAS");
  }
  FlowResult result;
  result.method = FlowMethod::UniquePathExact;
  if (step.pairs.empty()) return result;

  const int n = g.node_count();
  std::vector<long> crossing(g.edge_count(), 0);
  for (const auto& [src, dst] : step.pairs) {
    NodeId v = src;
    int hops = 0;
    while (v != dst) {
      const auto out = g.out_edges(v);
      if (out.empty() || hops >= n) {
        fail(ErrorKind::InfeasibleDemand, "pair " + pair_name(src, dst) + " is unreachable");
      }
      ++crossing[g.first_out_index(v)];
      v = out.front().dst;
      ++hops;
    }
    result.ell = std::max(result.ell, hops);
  }
  bool loaded = false;
  for (std::size_t e = 0; e < crossing.size(); ++e) {
    if (crossing[e] == 0) continue;
    Rational candidate = g.edges()[e].capacity / Rational(crossing[e]);
    if (!loaded || candidate < result.theta) result.theta = candidate;
    loaded = true;
  }
  return result;
}

FlowResult theta_fptas(const Topology& g, const Step& step, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    fail(ErrorKind::InvalidParameter, "epsilon must be in (0, 0.5], got " + std::to_string(epsilon));
  }
  require_valid_step(step, g.node_count());
  FlowResult result;
  result.method = FlowMethod::Fptas;
  result.epsilon = epsilon;
  if (step.pairs.empty()) return result;
  result.ell = max_pair_hops(g, step);

  constexpr long max_phases = 2'000'000;
  for (double eta : {epsilon / 2, epsilon / 4, epsilon / 8}) {
    if (auto theta = garg_koenemann(g, step, eta, epsilon, max_phases)) {
      result.theta = *theta;
      return result;
    }
  }
  fail(ErrorKind::Internal, "concurrent-flow approximation did not reach its certificate");
}

std::optional<FlowResult> MetricsCache::find(const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void MetricsCache::insert(const std::string& key, const FlowResult& result) {
  std::unique_lock lock(mutex_);
  entries_.emplace(key, result);
}

std::size_t MetricsCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::string pattern_key(const Step& step) {
  auto pairs = step.pairs;
  std::sort(pairs.begin(), pairs.end());
  std::string key;
  key.reserve(pairs.size() * 8);
  for (const auto& [src, dst] : pairs) {
    key += std::to_string(src);
    key += '>';
    key += std::to_string(dst);
    key += ',';
  }
  return key;
}

FlowResult step_metrics(const Topology& g, const Step& step, double epsilon, MetricsCache* cache) {
  const bool exact = is_unique_path(g);
  std::string key;
  if (cache != nullptr) {
    key = g.fingerprint() + "|" + pattern_key(step);
    if (!exact) key += "|eps=" + std::to_string(epsilon);
    if (auto hit = cache->find(key)) return *hit;
  }
  FlowResult result = exact ? theta_unique_path(g, step) : theta_fptas(g, step, epsilon);
  if (cache != nullptr) cache->insert(key, result);
  return result;
}

}  // namespace photonic
