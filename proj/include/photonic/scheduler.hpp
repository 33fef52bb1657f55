#pragma once

#include <chrono>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "photonic/collectives.hpp"
#include "photonic/costmodel.hpp"
#include "photonic/flow.hpp"
#include "photonic/topology.hpp"

namespace photonic {

enum class SolverKind { Dp, BruteForce, Static, Bvn, Threshold };

std::string_view to_string(SolverKind kind);
std::optional<SolverKind> parse_solver(std::string_view name);

struct SolveReport {
  SwitchSchedule schedule;
  CostBreakdown cost;
  int reconfig_count = 0;
  SolverKind solver = SolverKind::Dp;
  std::chrono::duration<double> solve_time{};
};

/// Optimal reconfiguration schedule by dynamic programming over the two
/// fabric states. Among equal-cost optima the lexicographically smallest
/// schedule (Base before Matched, earliest step first) is returned.
SolveReport solve_dp(const SystemParams& params, const Collective& c, const Topology& base,
                     MetricsCache* cache = nullptr);

/// Enumerates all 2^s schedules; same tie-break as solve_dp.
SolveReport solve_brute_force(const SystemParams& params, const Collective& c, const Topology& base,
                              MetricsCache* cache = nullptr);

inline constexpr std::size_t kBruteForceMaxSteps = 24;

/// Every step on the base topology.
SolveReport baseline_static(const SystemParams& params, const Collective& c, const Topology& base,
                            MetricsCache* cache = nullptr);

/// Every step on its matched topology, reconfiguring before each one.
SolveReport baseline_bvn(const SystemParams& params, const Collective& c, const Topology& base,
                         MetricsCache* cache = nullptr);

/// Per-step greedy: reconfigure when the step's saving exceeds alpha_r.
SolveReport solve_threshold(const SystemParams& params, const Collective& c, const Topology& base,
                            MetricsCache* cache = nullptr);

SolveReport solve(SolverKind kind, const SystemParams& params, const Collective& c, const Topology& base,
                  MetricsCache* cache = nullptr);

/// Report as JSON; solve_time is left out unless requested so repeated
/// runs produce identical bytes.
nlohmann::json to_json(const SolveReport& report, bool include_timing = false);

}  // namespace photonic
