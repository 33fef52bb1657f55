#pragma once

#include <string_view>
#include <vector>

#include <json.hpp>

#include "photonic/collectives.hpp"
#include "photonic/flow.hpp"
#include "photonic/rational.hpp"
#include "photonic/topology.hpp"

namespace photonic {

/// System constants. Times are nanoseconds, bandwidth is Gbit/s per link;
/// beta = 8 / bandwidth_gbps ns per byte is always derived.
struct SystemParams {
  int n = 64;
  Rational bandwidth_gbps = 800;
  Rational alpha_ns = 100;
  Rational delta_ns = 100;
  Rational alpha_r_ns = 0;
  double epsilon = 0.05;
  bool cap_theta_at_one = false;
  // Consecutive Matched steps with identical patterns skip alpha_r.
  bool skip_identical_matched = false;

  Rational beta_ns_per_byte() const;
  void validate() const;
};

/// Fabric state for one step: the base topology, or circuits matching the
/// step's pattern exactly.
enum class Fabric { Base, Matched };

std::string_view to_string(Fabric f);

using SwitchSchedule = std::vector<Fabric>;

struct StepRecord {
  Fabric config = Fabric::Base;
  Rational theta = 1;
  int ell = 1;
  bool reconfigured = false;
  Rational time_ns = 0;
};

struct CostBreakdown {
  Rational total_ns = 0;
  Rational latency_ns = 0;
  Rational propagation_ns = 0;
  Rational bandwidth_ns = 0;
  Rational reconfig_ns = 0;
  std::vector<StepRecord> per_step;

  int reconfig_count() const;
};

/// Demand completion time of one step: alpha + delta*ell + beta*m/theta.
Rational dct(const SystemParams& params, Bytes volume, const Rational& theta, int ell);

/// Per-step flow metrics on the base topology, with the theta cap applied
/// when configured.
struct StepMetrics {
  Rational theta = 1;
  int ell = 1;
};

std::vector<StepMetrics> base_metrics(const SystemParams& params, const Collective& c, const Topology& base,
                                      MetricsCache* cache = nullptr);

/// Whether moving into step i (0-based) in state `to` from state `from`
/// pays the reconfiguration delay. The state before step 0 is Base.
bool pays_reconfiguration(const SystemParams& params, const Collective& c, std::size_t i, Fabric from, Fabric to);

/// Step costs under both fabric states, excluding reconfiguration. Solvers
/// share this table so each theta is computed once.
struct StepCostTable {
  std::vector<Rational> base;
  std::vector<Rational> matched;
  std::vector<StepMetrics> metrics;
};

StepCostTable step_cost_table(const SystemParams& params, const Collective& c, const Topology& base,
                              MetricsCache* cache = nullptr);

/// Total completion time of `c` under `schedule`, split into components.
CostBreakdown schedule_cost(const SystemParams& params, const Collective& c, const Topology& base,
                            const SwitchSchedule& schedule, MetricsCache* cache = nullptr);

/// schedule_cost with every step on the base topology.
CostBreakdown static_collective_time(const SystemParams& params, const Collective& c, const Topology& base,
                                     MetricsCache* cache = nullptr);

nlohmann::json to_json(const CostBreakdown& cost);

}  // namespace photonic
