#include "photonic/scheduler.hpp"

#include <array>

#include "photonic/error.hpp"

namespace photonic {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Dp: return "dp";
    case SolverKind::BruteForce: return "brute-force";
    case SolverKind::Static: return "static";
    case SolverKind::Bvn: return "bvn";
    case SolverKind::Threshold: return "threshold";
  }
  return "dp";
}

std::optional<SolverKind> parse_solver(std::string_view name) {
  for (SolverKind k : {SolverKind::Dp, SolverKind::BruteForce, SolverKind::Static, SolverKind::Bvn,
                       SolverKind::Threshold}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

SolveReport finish(SolverKind kind, SwitchSchedule schedule, const SystemParams& params, const Collective& c,
                   const Topology& base, MetricsCache* cache, Clock::time_point started) {
  SolveReport report;
  report.cost = schedule_cost(params, c, base, schedule, cache);
  report.schedule = std::move(schedule);
  report.reconfig_count = report.cost.reconfig_count();
  report.solver = kind;
  report.solve_time = Clock::now() - started;
  return report;
}

void require_steps(const Collective& c) {
  validate_collective(c);
}

constexpr std::array<Fabric, 2> kStates{Fabric::Base, Fabric::Matched};

std::size_t idx(Fabric f) { return f == Fabric::Base ? 0 : 1; }

}  // namespace

SolveReport solve_dp(const SystemParams& params, const Collective& c, const Topology& base, MetricsCache* cache) {
  const auto started = Clock::now();
  params.validate();
  require_steps(c);
  const StepCostTable table = step_cost_table(params, c, base, cache);
  const std::size_t s = c.steps.size();

  // to_go[i][p]: cheapest cost of steps i..s-1 when step i-1 ended in state p.
  std::vector<std::array<Rational, 2>> to_go(s + 1);
  to_go[s] = {Rational(0), Rational(0)};
  auto option = [&](std::size_t i, Fabric previous, Fabric next) {
    Rational value = (next == Fabric::Base ? table.base[i] : table.matched[i]) + to_go[i + 1][idx(next)];
    if (pays_reconfiguration(params, c, i, previous, next)) value += params.alpha_r_ns;
    return value;
  };
  for (std::size_t i = s; i-- > 0;) {
    for (Fabric previous : kStates) {
      Rational via_base = option(i, previous, Fabric::Base);
      Rational via_matched = option(i, previous, Fabric::Matched);
      to_go[i][idx(previous)] = via_matched < via_base ? via_matched : via_base;
    }
  }

  SwitchSchedule schedule;
  schedule.reserve(s);
  Fabric previous = Fabric::Base;
  for (std::size_t i = 0; i < s; ++i) {
    const Fabric next = option(i, previous, Fabric::Matched) < option(i, previous, Fabric::Base) ? Fabric::Matched
                                                                                                  : Fabric::Base;
    schedule.push_back(next);
    previous = next;
  }
  SolveReport report = finish(SolverKind::Dp, std::move(schedule), params, c, base, cache, started);
  if (report.cost.total_ns != to_go[0][idx(Fabric::Base)]) {
    fail(ErrorKind::Internal, "dp value disagrees with its schedule's evaluated cost");
  }
  return report;
}

SolveReport solve_brute_force(const SystemParams& params, const Collective& c, const Topology& base,
                              MetricsCache* cache) {
  const auto started = Clock::now();
  params.validate();
  require_steps(c);
  const std::size_t s = c.steps.size();
  if (s > kBruteForceMaxSteps) {
    fail(ErrorKind::TooLarge, "exhaustive search limited to " + std::to_string(kBruteForceMaxSteps) +
                                  " steps, collective has " + std::to_string(s));
  }
  const StepCostTable table = step_cost_table(params, c, base, cache);

  // Visits schedules in lexicographic order (Base first) and keeps the
  // first strict improvement, which is the lexicographically smallest optimum.
  SwitchSchedule current(s, Fabric::Base);
  SwitchSchedule best;
  std::optional<Rational> best_cost;
  std::vector<Rational> prefix(s + 1);
  prefix[0] = 0;

  auto visit = [&](auto&& self, std::size_t i, Fabric previous) -> void {
    if (i == s) {
      if (!best_cost || prefix[s] < *best_cost) {
        best_cost = prefix[s];
        best = current;
      }
      return;
    }
    for (Fabric next : kStates) {
      current[i] = next;
      prefix[i + 1] = prefix[i] + (next == Fabric::Base ? table.base[i] : table.matched[i]);
      if (pays_reconfiguration(params, c, i, previous, next)) prefix[i + 1] += params.alpha_r_ns;
      self(self, i + 1, next);
    }
  };
  visit(visit, 0, Fabric::Base);

  SolveReport report = finish(SolverKind::BruteForce, std::move(best), params, c, base, cache, started);
  if (report.cost.total_ns != *best_cost) {
    fail(ErrorKind::Internal, "exhaustive value disagrees with its schedule's evaluated cost");
  }
  return report;
}

SolveReport baseline_static(const SystemParams& params, const Collective& c, const Topology& base,
                            MetricsCache* cache) {
  const auto started = Clock::now();
  require_steps(c);
  return finish(SolverKind::Static, SwitchSchedule(c.steps.size(), Fabric::Base), params, c, base, cache, started);
}

SolveReport baseline_bvn(const SystemParams& params, const Collective& c, const Topology& base, MetricsCache* cache) {
  const auto started = Clock::now();
  require_steps(c);
  return finish(SolverKind::Bvn, SwitchSchedule(c.steps.size(), Fabric::Matched), params, c, base, cache, started);
}

SolveReport solve_threshold(const SystemParams& params, const Collective& c, const Topology& base,
                            MetricsCache* cache) {
  const auto started = Clock::now();
  params.validate();
  require_steps(c);
  const StepCostTable table = step_cost_table(params, c, base, cache);
  SwitchSchedule schedule;
  schedule.reserve(c.steps.size());
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    // delta*(ell-1) + beta*m*(1/theta - 1) is exactly base - matched.
    const Rational saving = table.base[i] - table.matched[i];
    schedule.push_back(saving > params.alpha_r_ns ? Fabric::Matched : Fabric::Base);
  }
  return finish(SolverKind::Threshold, std::move(schedule), params, c, base, cache, started);
}

SolveReport solve(SolverKind kind, const SystemParams& params, const Collective& c, const Topology& base,
                  MetricsCache* cache) {
  switch (kind) {
    case SolverKind::Dp: return solve_dp(params, c, base, cache);
    case SolverKind::BruteForce: return solve_brute_force(params, c, base, cache);
    case SolverKind::Static: return baseline_static(params, c, base, cache);
    case SolverKind::Bvn: return baseline_bvn(params, c, base, cache);
    case SolverKind::Threshold: return solve_threshold(params, c, base, cache);
  }
  fail(ErrorKind::Internal, "unknown solver");
}

nlohmann::json to_json(const SolveReport& report, bool include_timing) {
  nlohmann::json schedule = nlohmann::json::array();
  for (Fabric f : report.schedule) schedule.push_back(std::string(to_string(f)));
  nlohmann::json out = {{"solver", std::string(to_string(report.solver))},
                        {"schedule", schedule},
                        {"reconfig_count", report.reconfig_count},
                        {"cost", to_json(report.cost)}};
  if (include_timing) out["solve_time_s"] = report.solve_time.count();
  return out;
}

}  // namespace photonic
