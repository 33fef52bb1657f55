#include <doctest.h>

#include "photonic/error.hpp"
#include "photonic/flow.hpp"
#include "support/instances.hpp"
#include "support/lp_oracle.hpp"

using namespace photonic;
using photonic::testing::shift;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::Internal;
}

void check_within(const Rational& theta, const Rational& exact, double eps) {
  CAPTURE(to_double(theta));
  CAPTURE(to_double(exact));
  CHECK(theta <= exact);
  CHECK(theta >= (Rational(1) - from_exact_double(eps)) * exact);
}

}  // namespace

TEST_CASE("oracle sanity on hand-solved instances") {
  CHECK(testing::simplex_max({{1, 1}, {1, 3}}, {4, 6}, {1, 2}) == 5);
  CHECK(testing::exact_concurrent_flow(ring(8), shift(8, 2)) == Rational(1, 2));
  Step xor1{{{0, 1}, {1, 0}, {2, 3}, {3, 2}}, 1};
  CHECK(testing::exact_concurrent_flow(ring(4), xor1) == Rational(1, 2));
}

TEST_CASE("unique-path theta examples") {
  FlowResult r = theta_unique_path(ring(8), shift(8, 1));
  CHECK(r.theta == 1);
  CHECK(r.ell == 1);
  CHECK(r.method == FlowMethod::UniquePathExact);

  r = theta_unique_path(ring(64), shift(64, 8));
  CHECK(r.theta == Rational(1, 8));
  CHECK(r.ell == 8);

  // XOR-by-1 on ring(4): paths of length 1, 3, 1, 3; every edge carries two.
  Step xor1{{{0, 1}, {1, 0}, {2, 3}, {3, 2}}, 1};
  r = theta_unique_path(ring(4), xor1);
  CHECK(r.theta == Rational(1, 2));
  CHECK(r.ell == 3);

  const std::vector<int> s13{1, 3};
  CHECK(kind_of([&] { theta_unique_path(coprime_ring_union(8, s13), shift(8, 1)); }) == ErrorKind::WrongMethod);
  Topology line(3, {{0, 1, 1}, {1, 2, 1}});
  CHECK(kind_of([&] { theta_unique_path(line, Step{{{2, 0}}, 1}); }) == ErrorKind::InfeasibleDemand);

  // Edge 0->1 carries both paths with capacity 3; theta above 1 is kept.
  Topology fat(3, {{0, 1, 3}, {1, 2, 2}, {2, 0, 2}});
  r = theta_unique_path(fat, Step{{{0, 2}, {2, 1}}, 1});
  CHECK(r.theta == Rational(3, 2));
  CHECK(r.ell == 2);
}

TEST_CASE("shift-by-k on a unidirectional ring has theta 1/k and ell k") {
  for (int n : {4, 8, 64}) {
    for (int k = 1; k < n; ++k) {
      const FlowResult r = theta_unique_path(ring(n), shift(n, k));
      CHECK(r.theta == Rational(1, k));
      CHECK(r.ell == k);
    }
  }
}

TEST_CASE("fptas examples") {
  FlowResult r = theta_fptas(ring(8), shift(8, 2), 0.05);
  CHECK(r.method == FlowMethod::Fptas);
  CHECK(r.ell == 2);
  check_within(r.theta, Rational(1, 2), 0.05);

  testing::Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Step step = testing::random_matching(rng, 10, 1);
    for (double eps : {0.5, 0.1}) {
      r = theta_fptas(matched_topology(step, 10), step, eps);
      check_within(r.theta, 1, eps);
      CHECK(r.ell == 1);
    }
  }

  const std::vector<int> s13{1, 3};
  const Topology g = coprime_ring_union(8, s13);
  const Rational exact = testing::exact_concurrent_flow(g, shift(8, 2));
  r = theta_fptas(g, shift(8, 2), 0.05);
  check_within(r.theta, exact, 0.05);
  CHECK(r.ell == 2);

  CHECK(kind_of([] { theta_fptas(ring(8), shift(8, 1), 0.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { theta_fptas(ring(8), shift(8, 1), 0.6); }) == ErrorKind::InvalidParameter);
  Topology split(4, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}});
  CHECK(kind_of([&] { theta_fptas(split, Step{{{3, 0}}, 1}, 0.1); }) == ErrorKind::InfeasibleDemand);
}

TEST_CASE("fptas brackets the exact value on unique-path rings") {
  testing::Rng rng(21);
  for (double eps : {0.01, 0.05, 0.1}) {
    for (int trial = 0; trial < 12; ++trial) {
      const int n = trial % 2 == 0 ? 8 : 16;
      const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
      const Step step = shift(n, k);
      const FlowResult exact = theta_unique_path(ring(n), step);
      const FlowResult approx = theta_fptas(ring(n), step, eps);
      check_within(approx.theta, exact.theta, eps);
      CHECK(approx.ell == exact.ell);
    }
  }
}

TEST_CASE("fptas against the path LP on multi-path graphs") {
  testing::Rng rng(5);
  const std::vector<int> s13{1, 3};
  const std::vector<int> s12{1, 2};
  std::vector<Topology> graphs{coprime_ring_union(8, s13), coprime_ring_union(7, s12)};
  for (const Topology& g : graphs) {
    for (int k = 1; k < g.node_count(); ++k) {
      const Step step = shift(g.node_count(), k);
      check_within(theta_fptas(g, step, 0.05).theta, testing::exact_concurrent_flow(g, step), 0.05);
    }
    for (int trial = 0; trial < 4; ++trial) {
      const Step step = testing::random_matching(rng, g.node_count(), 1);
      check_within(theta_fptas(g, step, 0.1).theta, testing::exact_concurrent_flow(g, step), 0.1);
    }
  }
  // Capacities other than one.
  Topology g(4, {{0, 1, 2}, {1, 2, 1}, {2, 3, 2}, {3, 0, 1}, {0, 2, 1}, {2, 0, 1}});
  Step step{{{0, 2}, {1, 3}, {2, 0}, {3, 1}}, 1};
  check_within(theta_fptas(g, step, 0.05).theta, testing::exact_concurrent_flow(g, step), 0.05);
}

TEST_CASE("theta does not depend on volume") {
  const std::vector<int> s13{1, 3};
  const Topology g = coprime_ring_union(8, s13);
  for (Bytes v : {Bytes{1}, Bytes{4096}, Bytes{1} << 30}) {
    CHECK(theta_unique_path(ring(8), shift(8, 3, v)).theta == Rational(1, 3));
    CHECK(theta_fptas(g, shift(8, 3, v), 0.1).theta == theta_fptas(g, shift(8, 3, 1), 0.1).theta);
  }
}

TEST_CASE("a matched topology routes its own step at theta exactly 1") {
  testing::Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const Step step = testing::random_matching(rng, n, 1 + rng() % 1000);
    const FlowResult r = step_metrics(matched_topology(step, n), step, 0.05);
    CHECK(r.theta == 1);
    CHECK(r.ell == 1);
    CHECK(r.method == FlowMethod::UniquePathExact);
  }
}

TEST_CASE("adding an edge never lowers theta") {
  testing::Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 2);
    std::vector<Edge> edges;
    for (NodeId j = 0; j < n; ++j) edges.push_back({j, (j + 1) % n, 1});
    for (int extra = 0; extra < 2; ++extra) {
      const NodeId a = static_cast<NodeId>(rng() % static_cast<unsigned>(n));
      const NodeId b = static_cast<NodeId>(rng() % static_cast<unsigned>(n));
      if (a == b) continue;
      if (std::none_of(edges.begin(), edges.end(), [&](const Edge& e) { return e.src == a && e.dst == b; })) {
        edges.push_back({a, b, 1});
      }
    }
    const Step step = testing::random_matching(rng, n, 1);
    const Topology before(n, edges);
    NodeId a = 0;
    NodeId b = 0;
    do {
      a = static_cast<NodeId>(rng() % static_cast<unsigned>(n));
      b = static_cast<NodeId>(rng() % static_cast<unsigned>(n));
    } while (a == b || before.find_edge(a, b).has_value());
    edges.push_back({a, b, 1});
    const Topology after(n, edges);
    CHECK(testing::exact_concurrent_flow(after, step) >= testing::exact_concurrent_flow(before, step));
  }
}

TEST_CASE("step_metrics dispatch and cache") {
  FlowResult r = step_metrics(ring(64), shift(64, 8), 0.05);
  CHECK(r.method == FlowMethod::UniquePathExact);
  CHECK(r.theta == Rational(1, 8));

  const std::vector<int> s13{1, 3};
  const Topology g = coprime_ring_union(8, s13);
  r = step_metrics(g, shift(8, 2), 0.05);
  CHECK(r.method == FlowMethod::Fptas);

  MetricsCache cache;
  const FlowResult cold = step_metrics(g, shift(8, 2), 0.05, &cache);
  const FlowResult warm = step_metrics(g, shift(8, 2, 999), 0.05, &cache);
  CHECK(cache.size() == 1);
  CHECK(cold.theta == r.theta);
  CHECK(warm.theta == r.theta);
  step_metrics(g, shift(8, 2), 0.1, &cache);
  CHECK(cache.size() == 2);

  const FlowResult empty = step_metrics(ring(4), Step{{}, 1}, 0.05);
  CHECK(empty.theta == 1);
  CHECK(empty.ell == 0);
}
