#include <doctest.h>

#include "photonic/costmodel.hpp"
#include "photonic/error.hpp"
#include "support/instances.hpp"

using namespace photonic;
using photonic::testing::eval_params;

namespace {

// Largest per-edge path count when every pair walks clockwise on ring(n),
// together with the longest walk.
std::pair<long, int> ring_walk_load(int n, const Step& step) {
  std::vector<long> load(static_cast<std::size_t>(n), 0);
  int longest = 0;
  for (const auto& [src, dst] : step.pairs) {
    int hops = 0;
    for (NodeId v = src; v != dst; v = (v + 1) % n, ++hops) ++load[static_cast<std::size_t>(v)];
    longest = std::max(longest, hops);
  }
  return {*std::max_element(load.begin(), load.end()), longest};
}

}  // namespace

TEST_CASE("dct arithmetic") {
  SystemParams p = eval_params(8);
  CHECK(p.beta_ns_per_byte() == Rational(1, 100));
  CHECK(dct(p, 100000, 1, 1) == 1200);
  CHECK(dct(p, 0, Rational(1, 3), 4) == 100 + 100 * 4);
  const Rational slow = dct(p, 4096, Rational(1, 8), 1) - 200;
  const Rational fast = dct(p, 4096, 1, 1) - 200;
  CHECK(slow == 8 * fast);
  CHECK_THROWS_AS(dct(p, 1, 0, 1), Error);
  CHECK_THROWS_AS(dct(p, 1, -1, 1), Error);
}

TEST_CASE("schedule_cost components") {
  SystemParams p = eval_params(4, 50);
  const Collective c = ring_allreduce(4, 400);
  const Topology g = ring(4);

  const CostBreakdown base = schedule_cost(p, c, g, SwitchSchedule(6, Fabric::Base));
  CHECK(base.reconfig_ns == 0);
  CHECK(base.total_ns == 1206);
  CHECK(base.latency_ns == 600);
  CHECK(base.propagation_ns == 600);
  CHECK(base.bandwidth_ns == 6);
  CHECK(base.total_ns == base.latency_ns + base.propagation_ns + base.bandwidth_ns + base.reconfig_ns);

  const CostBreakdown matched = schedule_cost(p, c, g, SwitchSchedule(6, Fabric::Matched));
  CHECK(matched.reconfig_ns == 6 * 50);
  CHECK(matched.propagation_ns == 6 * 100);
  CHECK(matched.bandwidth_ns == Rational(1, 100) * 600);
  CHECK(matched.reconfig_count() == 6);

  for (Rational alpha_r : {Rational(0), Rational(7), Rational(1000000)}) {
    p.alpha_r_ns = alpha_r;
    CHECK(static_collective_time(p, c, g).total_ns == 1206);
  }

  CHECK_THROWS_AS(schedule_cost(p, c, g, SwitchSchedule(5, Fabric::Base)), Error);
}

TEST_CASE("rhd on a ring: bandwidth term from explicit walk loads") {
  const int n = 64;
  const Bytes m = Bytes{64} << 20;
  const SystemParams p = eval_params(n);
  const Collective c = recursive_halving_doubling(n, m);
  Rational bandwidth = 0;
  Rational propagation = 0;
  for (const Step& s : c.steps) {
    const auto [load, longest] = ring_walk_load(n, s);
    bandwidth += p.beta_ns_per_byte() * from_u64(s.volume) * load;
    propagation += p.delta_ns * longest;
  }
  const CostBreakdown cost = static_collective_time(p, c, ring(n));
  CHECK(cost.bandwidth_ns == bandwidth);
  CHECK(cost.propagation_ns == propagation);

  const Collective one{8, {testing::shift(8, 1, 5000)}, "one"};
  CHECK(static_collective_time(eval_params(8), one, ring(8)).total_ns == 100 + 100 + 50);
}

TEST_CASE("static time is the sum of per-step dct") {
  testing::Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4 << (trial % 3);
    const Collective c = testing::random_custom_collective(rng, n, 1 + static_cast<int>(rng() % 8));
    SystemParams p = eval_params(n, testing::random_alpha_r(rng));
    const Topology g = ring(n);
    Rational sum = 0;
    for (const Step& s : c.steps) {
      const FlowResult f = theta_unique_path(g, s);
      sum += dct(p, s.volume, f.theta, f.ell);
    }
    const CostBreakdown stat = static_collective_time(p, c, g);
    CHECK(stat.total_ns == sum);
    const CostBreakdown explicit_base = schedule_cost(p, c, g, SwitchSchedule(c.steps.size(), Fabric::Base));
    CHECK(stat.total_ns == explicit_base.total_ns);
    CHECK(stat.bandwidth_ns == explicit_base.bandwidth_ns);
  }
}

TEST_CASE("derived z satisfies the linearization constraints") {
  const SystemParams p = eval_params(8, 1000);
  const Collective c = recursive_halving_doubling(8, 8 * 1024);
  const std::size_t s = c.steps.size();
  for (unsigned mask = 0; mask < (1u << s); ++mask) {
    SwitchSchedule x(s);
    for (std::size_t i = 0; i < s; ++i) x[i] = (mask >> i) & 1 ? Fabric::Matched : Fabric::Base;
    const CostBreakdown cost = schedule_cost(p, c, ring(8), x);
    int previous = 1;  // x_0 = 1
    for (std::size_t i = 0; i < s; ++i) {
      const int xi = x[i] == Fabric::Base ? 1 : 0;
      const int zi = cost.per_step[i].reconfigured ? 0 : 1;
      CHECK(zi >= xi + previous - 1);
      CHECK(zi <= xi);
      CHECK(zi <= previous);
      previous = xi;
    }
    CHECK(cost.reconfig_ns == p.alpha_r_ns * cost.reconfig_count());
  }
}

TEST_CASE("doubling volumes doubles only the bandwidth term") {
  testing::Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 8;
    Collective c = testing::random_custom_collective(rng, n, 6);
    Collective doubled = c;
    for (Step& s : doubled.steps) s.volume *= 2;
    SwitchSchedule x;
    for (int i = 0; i < 6; ++i) x.push_back(rng() % 2 ? Fabric::Matched : Fabric::Base);
    const SystemParams p = eval_params(n, 333);
    const CostBreakdown a = schedule_cost(p, c, ring(n), x);
    const CostBreakdown b = schedule_cost(p, doubled, ring(n), x);
    CHECK(b.bandwidth_ns == 2 * a.bandwidth_ns);
    CHECK(b.latency_ns == a.latency_ns);
    CHECK(b.propagation_ns == a.propagation_ns);
    CHECK(b.reconfig_ns == a.reconfig_ns);
  }
}

TEST_CASE("free reconfiguration makes all-matched no worse than static") {
  testing::Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 << (trial % 3);
    const Collective c = testing::random_custom_collective(rng, n, 5);
    const SystemParams p = eval_params(n, 0);
    const CostBreakdown matched = schedule_cost(p, c, ring(n), SwitchSchedule(5, Fabric::Matched));
    const CostBreakdown stat = static_collective_time(p, c, ring(n));
    bool congested = false;
    for (const StepRecord& r : stat.per_step) congested |= r.theta < 1;
    CHECK(matched.total_ns <= stat.total_ns);
    if (congested) CHECK(matched.total_ns < stat.total_ns);
  }
}

TEST_CASE("theta cap and identical-matched refinement") {
  Topology fat(3, {{0, 1, 3}, {1, 2, 2}, {2, 0, 2}});
  Collective c{3, {Step{{{0, 2}, {2, 1}}, 800}}, "fat"};
  SystemParams p = eval_params(3);
  CHECK(static_collective_time(p, c, fat).bandwidth_ns == Rational(16, 3));
  p.cap_theta_at_one = true;
  CHECK(static_collective_time(p, c, fat).bandwidth_ns == 8);

  SystemParams q = eval_params(4, 1000);
  const Collective r = ring_allreduce(4, 400);
  CHECK(schedule_cost(q, r, ring(4), SwitchSchedule(6, Fabric::Matched)).reconfig_ns == 6000);
  q.skip_identical_matched = true;
  CHECK(schedule_cost(q, r, ring(4), SwitchSchedule(6, Fabric::Matched)).reconfig_ns == 1000);
}

TEST_CASE("errors carry the failing step") {
  Topology line(3, {{0, 1, 1}, {1, 2, 1}});
  Collective c{3, {Step{{{0, 1}}, 1}, Step{{{2, 0}}, 1}}, "x"};
  try {
    static_collective_time(eval_params(3), c, line);
    FAIL("expected infeasible demand");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InfeasibleDemand);
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
  SystemParams bad = eval_params(3);
  bad.bandwidth_gbps = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("breakdown JSON") {
  const CostBreakdown cost = static_collective_time(eval_params(4), ring_allreduce(4, 400), ring(4));
  const auto j = to_json(cost);
  CHECK(j["total_ns"].get<double>() == 1206.0);
  CHECK(j["total_ns_exact"] == "1206/1");
  CHECK(j["per_step"].size() == 6);
  CHECK(j["per_step"][0]["config"] == "base");
  for (const char* key : {"latency_ns", "propagation_ns", "bandwidth_ns", "reconfig_ns"}) CHECK(j.contains(key));
}
