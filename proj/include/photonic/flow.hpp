#pragma once

#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "photonic/collectives.hpp"
#include "photonic/rational.hpp"
#include "photonic/topology.hpp"

namespace photonic {

enum class FlowMethod { UniquePathExact, Fptas };

std::string_view to_string(FlowMethod method);

/// Maximum concurrent flow of one step's unit-demand pattern, plus the
/// step's hop count. theta is not capped at 1.
struct FlowResult {
  Rational theta = 1;
  FlowMethod method = FlowMethod::UniquePathExact;
  double epsilon = 0.0;
  int ell = 0;
};

/// True when every node has out-degree <= 1, so each reachable pair has
/// exactly one simple path.
bool is_unique_path(const Topology& g);

/// Exact theta by routing every pair on its only path:
/// theta = min over loaded edges of capacity / paths crossing it.
FlowResult theta_unique_path(const Topology& g, const Step& step);

/// Garg-Koenemann multiplicative-weights concurrent flow. The returned
/// theta is the value of a feasible flow (so never above the optimum) and is
/// certified against a dual bound to be within a factor (1 - epsilon).
FlowResult theta_fptas(const Topology& g, const Step& step, double epsilon);

/// Thread-safe memo of flow results keyed by (topology, step pattern, epsilon).
class MetricsCache {
 public:
  std::optional<FlowResult> find(const std::string& key) const;
  void insert(const std::string& key, const FlowResult& result);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, FlowResult> entries_;
};

std::string pattern_key(const Step& step);

/// Unique-path topologies use the exact method, everything else the FPTAS.
FlowResult step_metrics(const Topology& g, const Step& step, double epsilon, MetricsCache* cache = nullptr);

}  // namespace photonic
