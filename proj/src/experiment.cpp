#include "photonic/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "photonic/error.hpp"

namespace photonic {

using nlohmann::json;

SweepAxes default_sweep_axes() {
  SweepAxes axes;
  for (long ns : {10L, 100L, 1'000L, 10'000L, 100'000L, 1'000'000L}) axes.alpha_r_ns.emplace_back(ns);
  for (int shift = 10; shift <= 30; shift += 2) axes.msg_bytes.push_back(Bytes{1} << shift);
  return axes;
}

namespace {

void reject_unknown_keys(const json& object, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!object.is_object()) fail(ErrorKind::Parse, where + ": expected an object");
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      fail(ErrorKind::Parse, where + ": unknown field '" + item.key() + "'");
    }
  }
}

// Numbers may be JSON numbers or decimal strings; strings keep every digit.
Rational read_decimal(const json& value, const std::string& where) {
  if (value.is_string()) return parse_decimal(value.get<std::string>());
  if (value.is_number_integer()) return parse_decimal(std::to_string(value.get<std::int64_t>()));
  if (value.is_number()) return from_decimal_double(value.get<double>());
  fail(ErrorKind::Parse, where + ": expected a number");
}

std::int64_t read_integer(const json& value, const std::string& where) {
  if (!value.is_number_integer()) fail(ErrorKind::Parse, where + ": expected an integer");
  return value.get<std::int64_t>();
}

bool read_bool(const json& value, const std::string& where) {
  if (!value.is_boolean()) fail(ErrorKind::Parse, where + ": expected true or false");
  return value.get<bool>();
}

Bytes read_bytes(const json& value, const std::string& where) {
  const std::int64_t v = read_integer(value, where);
  if (v <= 0) fail(ErrorKind::InvalidParameter, where + ": must be a positive byte count");
  return static_cast<Bytes>(v);
}

// Decimal text for a rational whose denominator is 2^a * 5^b.
std::optional<std::string> exact_decimal(const Rational& value) {
  mpz_class den = value.get_den();
  int twos = 0;
  int fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) { den /= 2; ++twos; }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) { den /= 5; ++fives; }
  if (den != 1) return std::nullopt;
  return format_fixed(value, std::max(twos, fives));
}

json decimal_json(const Rational& value) {
  const double approx = to_double(value);
  if (std::isfinite(approx) && from_decimal_double(approx) == value) {
    if (value.get_den() == 1 && abs(value.get_num()) < mpz_class("9007199254740992")) {
      return json(value.get_num().get_si());
    }
    return json(approx);
  }
  if (auto text = exact_decimal(value)) return json(*text);
  return json(to_fraction_string(value));
}

}  // namespace

ExperimentConfig parse_config(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("config JSON: ") + e.what());
  }
  reject_unknown_keys(root, {"params", "collective", "base_topology", "sweep", "solvers", "seed"}, "config");

  ExperimentConfig config;
  std::optional<int> params_n;
  if (root.contains("params")) {
    const json& p = root["params"];
    reject_unknown_keys(p, {"n", "bandwidth_gbps", "alpha_ns", "delta_ns", "alpha_r_ns", "epsilon",
                            "cap_theta_at_one", "skip_identical_matched"},
                        "params");
    if (p.contains("n")) params_n = static_cast<int>(read_integer(p["n"], "params.n"));
    if (p.contains("bandwidth_gbps")) config.params.bandwidth_gbps = read_decimal(p["bandwidth_gbps"], "params.bandwidth_gbps");
    if (p.contains("alpha_ns")) config.params.alpha_ns = read_decimal(p["alpha_ns"], "params.alpha_ns");
    if (p.contains("delta_ns")) config.params.delta_ns = read_decimal(p["delta_ns"], "params.delta_ns");
    if (p.contains("alpha_r_ns")) config.params.alpha_r_ns = read_decimal(p["alpha_r_ns"], "params.alpha_r_ns");
    if (p.contains("epsilon")) {
      if (!p["epsilon"].is_number()) fail(ErrorKind::Parse, "params.epsilon: expected a number");
      config.params.epsilon = p["epsilon"].get<double>();
    }
    if (p.contains("cap_theta_at_one")) config.params.cap_theta_at_one = read_bool(p["cap_theta_at_one"], "params.cap_theta_at_one");
    if (p.contains("skip_identical_matched")) {
      config.params.skip_identical_matched = read_bool(p["skip_identical_matched"], "params.skip_identical_matched");
    }
  }

  if (root.contains("collective")) {
    const json& c = root["collective"];
    reject_unknown_keys(c, {"algorithm", "n", "msg_bytes", "file"}, "collective");
    if (c.contains("file")) {
      if (c.contains("algorithm") || c.contains("msg_bytes")) {
        fail(ErrorKind::InvalidParameter, "collective: 'file' excludes 'algorithm' and 'msg_bytes'");
      }
      if (!c["file"].is_string()) fail(ErrorKind::Parse, "collective.file: expected a path string");
      config.collective.file = c["file"].get<std::string>();
      config.collective.algorithm.clear();
    }
    if (c.contains("algorithm")) {
      if (!c["algorithm"].is_string()) fail(ErrorKind::Parse, "collective.algorithm: expected a string");
      config.collective.algorithm = c["algorithm"].get<std::string>();
      static const std::vector<std::string> known{"rhd", "swing", "ring", "alltoall"};
      if (std::find(known.begin(), known.end(), config.collective.algorithm) == known.end()) {
        fail(ErrorKind::InvalidParameter, "collective.algorithm: unknown '" + config.collective.algorithm +
                                              "' (expected rhd, swing, ring or alltoall)");
      }
    }
    if (c.contains("n")) config.collective.n = static_cast<int>(read_integer(c["n"], "collective.n"));
    if (c.contains("msg_bytes")) config.collective.msg_bytes = read_bytes(c["msg_bytes"], "collective.msg_bytes");
  }

  if (root.contains("base_topology")) {
    const json& t = root["base_topology"];
    reject_unknown_keys(t, {"kind", "strides", "n", "edges"}, "base_topology");
    const std::string kind = t.value("kind", std::string("ring"));
    if (kind == "ring") {
      config.base_topology.kind = TopologyKind::Ring;
    } else if (kind == "coprime-ring-union") {
      config.base_topology.kind = TopologyKind::CoprimeRingUnion;
      if (!t.contains("strides") || !t["strides"].is_array()) {
        fail(ErrorKind::Parse, "base_topology.strides: expected an array of integers");
      }
      for (const json& s : t["strides"]) config.base_topology.strides.push_back(static_cast<int>(read_integer(s, "base_topology.strides")));
    } else if (kind == "custom") {
      config.base_topology.kind = TopologyKind::Custom;
      if (!t.contains("n") || !t.contains("edges") || !t["edges"].is_array()) {
        fail(ErrorKind::Parse, "base_topology: custom topology needs 'n' and 'edges'");
      }
      config.base_topology.n = static_cast<int>(read_integer(t["n"], "base_topology.n"));
      for (std::size_t i = 0; i < t["edges"].size(); ++i) {
        const json& e = t["edges"][i];
        const std::string where = "base_topology.edges[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() < 2 || e.size() > 3) fail(ErrorKind::Parse, where + ": expected [src, dst, capacity]");
        Edge edge;
        edge.src = static_cast<NodeId>(read_integer(e[0], where));
        edge.dst = static_cast<NodeId>(read_integer(e[1], where));
        edge.capacity = e.size() == 3 ? read_decimal(e[2], where) : Rational(1);
        config.base_topology.edges.push_back(std::move(edge));
      }
    } else {
      fail(ErrorKind::InvalidParameter, "base_topology.kind: unknown '" + kind + "'");
    }
  }

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    reject_unknown_keys(s, {"alpha_r_ns", "msg_bytes"}, "sweep");
    SweepAxes axes = default_sweep_axes();
    if (s.contains("alpha_r_ns")) {
      if (!s["alpha_r_ns"].is_array()) fail(ErrorKind::Parse, "sweep.alpha_r_ns: expected an array");
      axes.alpha_r_ns.clear();
      for (const json& v : s["alpha_r_ns"]) axes.alpha_r_ns.push_back(read_decimal(v, "sweep.alpha_r_ns"));
    }
    if (s.contains("msg_bytes")) {
      if (!s["msg_bytes"].is_array()) fail(ErrorKind::Parse, "sweep.msg_bytes: expected an array");
      axes.msg_bytes.clear();
      for (const json& v : s["msg_bytes"]) axes.msg_bytes.push_back(read_bytes(v, "sweep.msg_bytes"));
    }
    config.sweep = std::move(axes);
  }

  if (root.contains("solvers")) {
    if (!root["solvers"].is_array()) fail(ErrorKind::Parse, "solvers: expected an array");
    config.solvers.clear();
    for (const json& v : root["solvers"]) {
      if (!v.is_string()) fail(ErrorKind::Parse, "solvers: expected strings");
      auto kind = parse_solver(v.get<std::string>());
      if (!kind || *kind == SolverKind::BruteForce) {
        fail(ErrorKind::InvalidParameter, "solvers: unknown '" + v.get<std::string>() +
                                              "' (expected dp, static, bvn, threshold)");
      }
      if (std::find(config.solvers.begin(), config.solvers.end(), *kind) == config.solvers.end()) {
        config.solvers.push_back(*kind);
      }
    }
    if (std::find(config.solvers.begin(), config.solvers.end(), SolverKind::Dp) == config.solvers.end()) {
      config.solvers.insert(config.solvers.begin(), SolverKind::Dp);
    }
  }
  if (root.contains("seed")) {
    const std::int64_t seed = read_integer(root["seed"], "seed");
    if (seed < 0) fail(ErrorKind::InvalidParameter, "seed must be non-negative");
    config.seed = static_cast<std::uint64_t>(seed);
  }

  // Resolve n and check everything that does not need the collective file.
  if (config.base_topology.kind == TopologyKind::Custom && !config.collective.file && !root.contains("collective")) {
    config.collective.n = config.base_topology.n;
  }
  if (!config.collective.file) {
    config.params.n = config.collective.n;
    if (params_n && *params_n != config.collective.n) {
      fail(ErrorKind::InvalidParameter, "params.n disagrees with collective.n");
    }
  } else if (params_n) {
    config.params.n = *params_n;
  }
  if (config.collective.file && config.sweep && root["sweep"].contains("msg_bytes")) {
    fail(ErrorKind::InvalidParameter, "sweep.msg_bytes cannot be used with a collective loaded from a file");
  }
  if (config.sweep) {
    if (config.sweep->alpha_r_ns.empty() || (!config.collective.file && config.sweep->msg_bytes.empty())) {
      fail(ErrorKind::InvalidParameter, "sweep axes must be non-empty");
    }
    for (const Rational& a : config.sweep->alpha_r_ns) {
      if (sgn(a) < 0) fail(ErrorKind::InvalidParameter, "sweep.alpha_r_ns values must be non-negative");
    }
  }
  if (config.params.n < 2) fail(ErrorKind::InvalidParameter, "n must be >= 2");
  config.params.validate();
  return config;
}

json to_json(const ExperimentConfig& config) {
  json params = {{"n", config.params.n},
                 {"bandwidth_gbps", decimal_json(config.params.bandwidth_gbps)},
                 {"alpha_ns", decimal_json(config.params.alpha_ns)},
                 {"delta_ns", decimal_json(config.params.delta_ns)},
                 {"alpha_r_ns", decimal_json(config.params.alpha_r_ns)},
                 {"epsilon", config.params.epsilon},
                 {"cap_theta_at_one", config.params.cap_theta_at_one},
                 {"skip_identical_matched", config.params.skip_identical_matched}};
  json collective;
  if (config.collective.file) {
    collective = {{"file", *config.collective.file}};
  } else {
    collective = {{"algorithm", config.collective.algorithm},
                  {"n", config.collective.n},
                  {"msg_bytes", config.collective.msg_bytes}};
  }
  json topology = {{"kind", std::string(to_string(config.base_topology.kind))}};
  if (config.base_topology.kind == TopologyKind::CoprimeRingUnion) topology["strides"] = config.base_topology.strides;
  if (config.base_topology.kind == TopologyKind::Custom) {
    topology["n"] = config.base_topology.n;
    json edges = json::array();
    for (const Edge& e : config.base_topology.edges) edges.push_back({e.src, e.dst, decimal_json(e.capacity)});
    topology["edges"] = edges;
  }
  json solvers = json::array();
  for (SolverKind k : config.solvers) solvers.push_back(std::string(to_string(k)));
  json out = {{"params", params},
              {"collective", collective},
              {"base_topology", topology},
              {"solvers", solvers},
              {"seed", config.seed}};
  if (config.sweep) {
    json alpha = json::array();
    for (const Rational& a : config.sweep->alpha_r_ns) alpha.push_back(decimal_json(a));
    json sweep = {{"alpha_r_ns", alpha}};
    if (!config.collective.file) sweep["msg_bytes"] = config.sweep->msg_bytes;
    out["sweep"] = sweep;
  }
  return out;
}

Topology build_topology(const TopologySpec& desc, int n) {
  switch (desc.kind) {
    case TopologyKind::Ring: return ring(n);
    case TopologyKind::CoprimeRingUnion: return coprime_ring_union(n, desc.strides);
    case TopologyKind::Custom: {
      if (desc.n != n) {
        fail(ErrorKind::InvalidParameter, "custom topology has n=" + std::to_string(desc.n) +
                                              " but the collective has n=" + std::to_string(n));
      }
      return Topology(desc.n, desc.edges, TopologyKind::Custom);
    }
    case TopologyKind::Matched: break;
  }
  fail(ErrorKind::InvalidParameter, "matched topologies cannot be used as a base topology");
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidParameter, "cannot open collective file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Collective build_collective(const CollectiveSpec& desc, std::optional<Bytes> msg_bytes) {
  if (desc.file) return load_collective(read_file(*desc.file));
  return make_collective(desc.algorithm, desc.n, msg_bytes.value_or(desc.msg_bytes));
}

double SweepRow::speedup_vs_static() const { return to_double(Rational(cost_static_ns / cost_opt_ns)); }
double SweepRow::speedup_vs_bvn() const { return to_double(Rational(cost_bvn_ns / cost_opt_ns)); }
double SweepRow::speedup_vs_best() const {
  const Rational& best = cost_static_ns < cost_bvn_ns ? cost_static_ns : cost_bvn_ns;
  return to_double(Rational(best / cost_opt_ns));
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, unsigned workers) {
  SweepAxes axes = config.sweep.value_or(default_sweep_axes());
  std::sort(axes.alpha_r_ns.begin(), axes.alpha_r_ns.end());
  axes.alpha_r_ns.erase(std::unique(axes.alpha_r_ns.begin(), axes.alpha_r_ns.end()), axes.alpha_r_ns.end());
  std::sort(axes.msg_bytes.begin(), axes.msg_bytes.end());
  axes.msg_bytes.erase(std::unique(axes.msg_bytes.begin(), axes.msg_bytes.end()), axes.msg_bytes.end());

  // A file collective has fixed volumes; its single msg_bytes column is
  // the total bytes per pair over all steps.
  std::vector<std::optional<Bytes>> sizes;
  if (config.collective.file) {
    sizes.push_back(std::nullopt);
  } else {
    for (Bytes m : axes.msg_bytes) sizes.emplace_back(m);
  }
  std::vector<Collective> collectives;
  for (const auto& m : sizes) collectives.push_back(build_collective(config.collective, m));
  const Topology base = build_topology(config.base_topology, collectives.front().n);
  const bool with_threshold =
      std::find(config.solvers.begin(), config.solvers.end(), SolverKind::Threshold) != config.solvers.end();

  const std::size_t columns = collectives.size();
  const std::size_t total = axes.alpha_r_ns.size() * columns;
  std::vector<SweepRow> rows(total);
  std::vector<std::string> errors(total);
  MetricsCache cache;
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t a = k / columns;
      const std::size_t mi = k % columns;
      try {
        SystemParams params = config.params;
        params.n = collectives[mi].n;
        params.alpha_r_ns = axes.alpha_r_ns[a];
        const SolveReport opt = solve_dp(params, collectives[mi], base, &cache);
        SweepRow row;
        row.alpha_r_ns = axes.alpha_r_ns[a];
        row.msg_bytes = sizes[mi] ? *sizes[mi] : collectives[mi].total_volume();
        row.cost_opt_ns = opt.cost.total_ns;
        row.opt_schedule = opt.schedule;
        row.opt_reconfig_count = opt.reconfig_count;
        row.cost_static_ns = baseline_static(params, collectives[mi], base, &cache).cost.total_ns;
        row.cost_bvn_ns = baseline_bvn(params, collectives[mi], base, &cache).cost.total_ns;
        if (with_threshold) row.cost_threshold_ns = solve_threshold(params, collectives[mi], base, &cache).cost.total_ns;
        rows[k] = std::move(row);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (std::size_t k = 0; k < total; ++k) {
    if (!errors[k].empty()) {
      const std::size_t mi = k % columns;
      fail(ErrorKind::Internal, "sweep point alpha_r_ns=" + format_fixed(axes.alpha_r_ns[k / columns]) +
                                    " msg_bytes=" + (sizes[mi] ? std::to_string(*sizes[mi]) : std::string("file")) +
                                    " failed: " + errors[k]);
    }
  }
  return rows;
}

std::string format_significant(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value)) return std::to_string(value);
  const int magnitude = static_cast<int>(std::floor(std::log10(std::fabs(value)))) + 1;
  int decimals = std::max(0, digits - magnitude);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  // Rounding may carry into a new leading digit (9.999995 -> 10.00000).
  const std::string text(buf);
  const auto point = text.find('.');
  const std::size_t integer_digits = (point == std::string::npos ? text.size() : point) - (value < 0 ? 1 : 0);
  if (decimals > 0 && static_cast<int>(integer_digits) > magnitude) {
    decimals -= 1;
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  }
  return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out(kSweepHeader);
  out += '\n';
  for (const SweepRow& r : rows) {
    out += format_fixed(r.alpha_r_ns) + ',' + std::to_string(r.msg_bytes) + ',' + format_fixed(r.cost_opt_ns) + ',' +
           format_fixed(r.cost_static_ns) + ',' + format_fixed(r.cost_bvn_ns) + ',' +
           (r.cost_threshold_ns ? format_fixed(*r.cost_threshold_ns) : std::string()) + ',' +
           format_significant(r.speedup_vs_static()) + ',' + format_significant(r.speedup_vs_bvn()) + ',' +
           format_significant(r.speedup_vs_best()) + ',' + std::to_string(r.opt_reconfig_count) + '\n';
  }
  return out;
}

json solve_document(const ExperimentConfig& config) {
  SystemParams params = config.params;
  std::optional<Bytes> msg_bytes;
  if (config.sweep) {
    const bool single = config.sweep->alpha_r_ns.size() == 1 &&
                        (config.collective.file || config.sweep->msg_bytes.size() == 1);
    if (!single) fail(ErrorKind::InvalidParameter, "solve needs exactly one (alpha_r, msg_bytes) point; use sweep");
    params.alpha_r_ns = config.sweep->alpha_r_ns.front();
    if (!config.collective.file) msg_bytes = config.sweep->msg_bytes.front();
  }
  const Collective c = build_collective(config.collective, msg_bytes);
  params.n = c.n;
  const Topology base = build_topology(config.base_topology, c.n);
  MetricsCache cache;

  json reports = json::object();
  const SolveReport opt = solve_dp(params, c, base, &cache);
  reports["dp"] = to_json(opt);
  json doc = {{"collective", {{"label", c.label}, {"n", c.n}, {"steps", c.steps.size()}}},
              {"base_topology", std::string(to_string(base.kind()))},
              {"alpha_r_ns", to_double(params.alpha_r_ns)},
              {"msg_bytes", msg_bytes ? *msg_bytes : (config.collective.file ? c.total_volume() : config.collective.msg_bytes)},
              {"cost_opt_ns", to_double(round_half_even(opt.cost.total_ns, 3))}};
  for (SolverKind k : config.solvers) {
    if (k == SolverKind::Dp) continue;
    const SolveReport r = solve(k, params, c, base, &cache);
    reports[std::string(to_string(k))] = to_json(r);
    doc["cost_" + std::string(to_string(k)) + "_ns"] = to_double(round_half_even(r.cost.total_ns, 3));
  }
  doc["reports"] = reports;
  return doc;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::render() const {
  std::string out;
  for (const ValidationCheck& c : checks) {
    out += (c.passed ? "PASS " : "FAIL ") + c.name;
    if (!c.detail.empty()) out += ": " + c.detail;
    out += '\n';
  }
  out += passed() ? "OK\n" : "FAILED\n";
  return out;
}

ValidationReport validate_collective_report(const Collective& c, std::optional<Bytes> allreduce_msg_bytes) {
  ValidationReport report;

  ValidationCheck matchings{"matchings", true, ""};
  if (c.steps.empty()) {
    matchings.passed = false;
    matchings.detail = "collective has no steps";
  }
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    if (auto violation = validate_matching(c.steps[i], c.n)) {
      matchings.passed = false;
      if (!matchings.detail.empty()) matchings.detail += "; ";
      matchings.detail += "step " + std::to_string(i) + ": " + *violation;
    }
  }
  if (matchings.passed) matchings.detail = std::to_string(c.steps.size()) + " steps are valid matchings";
  report.checks.push_back(matchings);
  if (!matchings.passed) return report;

  // Independent accumulation keyed by pair, compared to the dense matrix.
  std::map<std::pair<NodeId, NodeId>, Bytes> by_pair;
  for (const Step& step : c.steps) {
    for (const auto& pair : step.pairs) by_pair[pair] += step.volume;
  }
  const DemandMatrix demand = aggregate_demand(c);
  bool identity = true;
  for (NodeId j = 0; j < c.n && identity; ++j) {
    for (NodeId k = 0; k < c.n; ++k) {
      auto it = by_pair.find({j, k});
      const Bytes expected = it == by_pair.end() ? 0 : it->second;
      if (demand.at(j, k) != expected) {
        identity = false;
        break;
      }
    }
  }
  report.checks.push_back({"aggregate-demand", identity,
                           identity ? "matches the volume-weighted sum of step matrices"
                                    : "aggregate demand differs from the step sum"});

  if (allreduce_msg_bytes) {
    const Bytes m = *allreduce_msg_bytes;
    const Bytes expected = 2 * (m - m / static_cast<Bytes>(c.n));
    const auto sent = bytes_sent_per_node(c);
    bool optimal = true;
    std::string detail = "every node sends " + std::to_string(expected) + " bytes";
    for (NodeId j = 0; j < c.n; ++j) {
      if (sent[static_cast<std::size_t>(j)] != expected) {
        optimal = false;
        detail = "node " + std::to_string(j) + " sends " + std::to_string(sent[static_cast<std::size_t>(j)]) +
                 " bytes, expected " + std::to_string(expected);
        break;
      }
    }
    report.checks.push_back({"bandwidth-optimal", optimal, detail});
  }
  return report;
}

ValidationReport validate_document(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("JSON: ") + e.what());
  }
  if (root.is_object() && root.contains("steps")) {
    return validate_collective_report(parse_collective(document), std::nullopt);
  }
  const ExperimentConfig config = parse_config(document);
  if (config.collective.file) {
    std::ifstream in(*config.collective.file, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidParameter, "cannot open collective file '" + *config.collective.file + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return validate_collective_report(parse_collective(buf.str()), std::nullopt);
  }
  const Collective c = build_collective(config.collective);
  const std::string& algo = config.collective.algorithm;
  const bool allreduce = algo == "rhd" || algo == "swing" || algo == "ring";
  return validate_collective_report(c, allreduce ? std::optional<Bytes>(config.collective.msg_bytes) : std::nullopt);
}

}  // namespace photonic
