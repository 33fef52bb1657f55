#include "photonic/costmodel.hpp"

#include "photonic/error.hpp"

namespace photonic {

std::string_view to_string(Fabric f) { return f == Fabric::Base ? "base" : "matched"; }

Rational SystemParams::beta_ns_per_byte() const { return Rational(8) / bandwidth_gbps; }

void SystemParams::validate() const {
  if (n < 2) fail(ErrorKind::InvalidParameter, "n must be >= 2");
  if (sgn(bandwidth_gbps) <= 0) fail(ErrorKind::InvalidParameter, "bandwidth_gbps must be positive");
  if (sgn(alpha_ns) < 0) fail(ErrorKind::InvalidParameter, "alpha_ns must be non-negative");
  if (sgn(delta_ns) < 0) fail(ErrorKind::InvalidParameter, "delta_ns must be non-negative");
  if (sgn(alpha_r_ns) < 0) fail(ErrorKind::InvalidParameter, "alpha_r_ns must be non-negative");
  if (!(epsilon > 0.0 && epsilon <= 0.5)) fail(ErrorKind::InvalidParameter, "epsilon must be in (0, 0.5]");
}

int CostBreakdown::reconfig_count() const {
  int count = 0;
  for (const StepRecord& r : per_step) count += r.reconfigured ? 1 : 0;
  return count;
}

Rational dct(const SystemParams& params, Bytes volume, const Rational& theta, int ell) {
  if (sgn(theta) <= 0) fail(ErrorKind::InfeasibleDemand, "theta must be positive");
  if (ell < 0) fail(ErrorKind::InvalidParameter, "hop count must be non-negative");
  return params.alpha_ns + params.delta_ns * ell + params.beta_ns_per_byte() * from_u64(volume) / theta;
}

std::vector<StepMetrics> base_metrics(const SystemParams& params, const Collective& c, const Topology& base,
                                      MetricsCache* cache) {
  if (base.node_count() != c.n) {
    fail(ErrorKind::InvalidParameter, "topology has " + std::to_string(base.node_count()) +
                                          " nodes but the collective has " + std::to_string(c.n));
  }
  std::vector<StepMetrics> out;
  out.reserve(c.steps.size());
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    FlowResult flow;
    try {
      flow = step_metrics(base, c.steps[i], params.epsilon, cache);
    } catch (const Error& e) {
      throw Error(e.kind(), "step " + std::to_string(i) + ": " + e.what());
    }
    StepMetrics m{flow.theta, flow.ell};
    if (params.cap_theta_at_one && m.theta > 1) m.theta = 1;
    out.push_back(std::move(m));
  }
  return out;
}

bool pays_reconfiguration(const SystemParams& params, const Collective& c, std::size_t i, Fabric from, Fabric to) {
  if (from == Fabric::Base && to == Fabric::Base) return false;
  if (params.skip_identical_matched && i > 0 && from == Fabric::Matched && to == Fabric::Matched &&
      c.steps[i - 1].same_pattern(c.steps[i])) {
    return false;
  }
  return true;
}

StepCostTable step_cost_table(const SystemParams& params, const Collective& c, const Topology& base,
                              MetricsCache* cache) {
  StepCostTable table;
  table.metrics = base_metrics(params, c, base, cache);
  const Rational beta = params.beta_ns_per_byte();
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const Rational volume = from_u64(c.steps[i].volume);
    const StepMetrics& m = table.metrics[i];
    table.base.push_back(params.alpha_ns + params.delta_ns * m.ell + beta * volume / m.theta);
    table.matched.push_back(params.alpha_ns + params.delta_ns + beta * volume);
  }
  return table;
}

CostBreakdown schedule_cost(const SystemParams& params, const Collective& c, const Topology& base,
                            const SwitchSchedule& schedule, MetricsCache* cache) {
  params.validate();
  if (schedule.size() != c.steps.size()) {
    fail(ErrorKind::InvalidParameter, "schedule has " + std::to_string(schedule.size()) +
                                          " entries but the collective has " + std::to_string(c.steps.size()) +
                                          " steps");
  }
  const std::vector<StepMetrics> metrics = base_metrics(params, c, base, cache);
  const Rational beta = params.beta_ns_per_byte();

  CostBreakdown cost;
  cost.latency_ns = params.alpha_ns * static_cast<long>(c.steps.size());
  Fabric previous = Fabric::Base;
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const Fabric current = schedule[i];
    const Rational volume = from_u64(c.steps[i].volume);
    StepRecord record;
    record.config = current;
    if (current == Fabric::Base) {
      record.theta = metrics[i].theta;
      record.ell = metrics[i].ell;
    } else {
      record.theta = 1;
      record.ell = 1;
    }
    const Rational propagation = params.delta_ns * record.ell;
    const Rational bandwidth = beta * volume / record.theta;
    record.reconfigured = pays_reconfiguration(params, c, i, previous, current);
    const Rational reconfig = record.reconfigured ? params.alpha_r_ns : Rational(0);

    cost.propagation_ns += propagation;
    cost.bandwidth_ns += bandwidth;
    cost.reconfig_ns += reconfig;
    record.time_ns = params.alpha_ns + propagation + bandwidth + reconfig;
    cost.per_step.push_back(std::move(record));
    previous = current;
  }
  cost.total_ns = cost.latency_ns + cost.propagation_ns + cost.bandwidth_ns + cost.reconfig_ns;
  return cost;
}

CostBreakdown static_collective_time(const SystemParams& params, const Collective& c, const Topology& base,
                                     MetricsCache* cache) {
  return schedule_cost(params, c, base, SwitchSchedule(c.steps.size(), Fabric::Base), cache);
}

nlohmann::json to_json(const CostBreakdown& cost) {
  auto ns = [](const Rational& v) { return to_double(round_half_even(v, 3)); };
  nlohmann::json steps = nlohmann::json::array();
  for (const StepRecord& r : cost.per_step) {
    steps.push_back({{"config", std::string(to_string(r.config))},
                     {"theta", to_double(r.theta)},
                     {"ell", r.ell},
                     {"reconfigured", r.reconfigured},
                     {"time_ns", ns(r.time_ns)}});
  }
  return {{"total_ns", ns(cost.total_ns)},
          {"total_ns_exact", to_fraction_string(cost.total_ns)},
          {"latency_ns", ns(cost.latency_ns)},
          {"propagation_ns", ns(cost.propagation_ns)},
          {"bandwidth_ns", ns(cost.bandwidth_ns)},
          {"reconfig_ns", ns(cost.reconfig_ns)},
          {"per_step", steps}};
}

}  // namespace photonic
