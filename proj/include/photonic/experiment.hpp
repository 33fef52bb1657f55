#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "photonic/collectives.hpp"
#include "photonic/costmodel.hpp"
#include "photonic/scheduler.hpp"
#include "photonic/topology.hpp"

namespace photonic {

struct CollectiveSpec {
  std::string algorithm = "rhd";  // rhd | swing | ring | alltoall, empty when loaded from file
  int n = 64;
  Bytes msg_bytes = Bytes{64} << 20;
  std::optional<std::string> file;
};

struct TopologySpec {
  TopologyKind kind = TopologyKind::Ring;
  std::vector<int> strides;
  int n = 0;  // custom only
  std::vector<Edge> edges;
};

struct SweepAxes {
  std::vector<Rational> alpha_r_ns;
  std::vector<Bytes> msg_bytes;
};

/// Default grid: alpha_r from 10 ns to 1 ms and messages from 1 KiB to
/// 1 GiB, both log-spaced.
SweepAxes default_sweep_axes();

struct ExperimentConfig {
  SystemParams params;
  CollectiveSpec collective;
  TopologySpec base_topology;
  std::optional<SweepAxes> sweep;
  std::vector<SolverKind> solvers{SolverKind::Dp, SolverKind::Static, SolverKind::Bvn, SolverKind::Threshold};
  std::uint64_t seed = 0;
};

/// Parses and validates a config document; throws Error(Parse) for
/// malformed JSON and Error(InvalidParameter/Validation) for bad values.
ExperimentConfig parse_config(std::string_view document);

nlohmann::json to_json(const ExperimentConfig& config);

Topology build_topology(const TopologySpec& desc, int n);

/// Collective for the config, with msg_bytes overriding the configured size
/// for generator collectives.
Collective build_collective(const CollectiveSpec& desc, std::optional<Bytes> msg_bytes = std::nullopt);

struct SweepRow {
  Rational alpha_r_ns;
  Bytes msg_bytes = 0;
  Rational cost_opt_ns;
  Rational cost_static_ns;
  Rational cost_bvn_ns;
  std::optional<Rational> cost_threshold_ns;
  SwitchSchedule opt_schedule;
  int opt_reconfig_count = 0;

  double speedup_vs_static() const;
  double speedup_vs_bvn() const;
  double speedup_vs_best() const;
};

/// Evaluates every (alpha_r, msg_bytes) grid point. Rows come back sorted
/// by (alpha_r_ns, msg_bytes) whatever the worker count.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, unsigned workers = 1);

inline constexpr std::string_view kSweepHeader =
    "alpha_r_ns,msg_bytes,cost_opt_ns,cost_static_ns,cost_bvn_ns,cost_threshold_ns,"
    "speedup_vs_static,speedup_vs_bvn,speedup_vs_best,opt_reconfig_count";

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// `digits` significant digits in plain fixed notation.
std::string format_significant(double value, int digits = 6);

/// DP report plus every configured baseline for the config's single point.
nlohmann::json solve_document(const ExperimentConfig& config);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed() const;
  std::string render() const;
};

/// Matching validity of every step, the aggregate-demand identity and, for
/// AllReduce generators, the per-node byte count 2m(1 - 1/n).
ValidationReport validate_collective_report(const Collective& c, std::optional<Bytes> allreduce_msg_bytes);

/// Accepts either a config document or a bare collective document.
ValidationReport validate_document(std::string_view document);

}  // namespace photonic
