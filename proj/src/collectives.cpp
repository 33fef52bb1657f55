#include "photonic/collectives.hpp"

#include <algorithm>
#include <bit>
#include <json.hpp>

#include "photonic/error.hpp"

namespace photonic {

using nlohmann::json;

namespace {

void require_generator_args(std::string_view name, int n, Bytes m, bool power_of_two) {
  if (n < 2) {
    fail(ErrorKind::InvalidParameter, std::string(name) + ": n must be >= 2, got " + std::to_string(n));
  }
  if (power_of_two && !is_power_of_two(n)) {
    fail(ErrorKind::UnsupportedSize, std::string(name) + ": n must be a power of two, got " + std::to_string(n));
  }
  if (m == 0 || m % static_cast<Bytes>(n) != 0) {
    fail(ErrorKind::InvalidParameter,
         std::string(name) + ": message size " + std::to_string(m) + " must be a positive multiple of n=" +
             std::to_string(n));
  }
}

Step shift_step(int n, int shift, Bytes volume) {
  Step step;
  step.volume = volume;
  step.pairs.reserve(static_cast<std::size_t>(n));
  for (NodeId j = 0; j < n; ++j) step.pairs.emplace_back(j, (j + shift) % n);
  return step;
}

Step xor_step(int n, int distance, Bytes volume) {
  Step step;
  step.volume = volume;
  step.pairs.reserve(static_cast<std::size_t>(n));
  for (NodeId j = 0; j < n; ++j) step.pairs.emplace_back(j, j ^ distance);
  return step;
}

void check_generated(const Collective& c) {
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    if (auto violation = validate_matching(c.steps[i], c.n)) {
      fail(ErrorKind::Internal, c.label + " generated an invalid step " + std::to_string(i) + ": " + *violation);
    }
  }
}

}  // namespace

bool is_power_of_two(int n) { return n > 0 && std::has_single_bit(static_cast<unsigned>(n)); }

bool Step::same_pattern(const Step& other) const {
  if (pairs.size() != other.pairs.size()) return false;
  auto a = pairs;
  auto b = other.pairs;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

Bytes Collective::total_volume() const {
  Bytes total = 0;
  for (const Step& s : steps) total += s.volume;
  return total;
}

DemandMatrix::DemandMatrix(int n) : n_(n), cells_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {}

Bytes DemandMatrix::row_sum(NodeId src) const {
  Bytes total = 0;
  for (NodeId k = 0; k < n_; ++k) total += at(src, k);
  return total;
}

Collective recursive_halving_doubling(int n, Bytes m) {
  require_generator_args("recursive_halving_doubling", n, m, true);
  const int rounds = std::countr_zero(static_cast<unsigned>(n));
  Collective c{n, {}, "rhd"};
  for (int i = 1; i <= rounds; ++i) {
    c.steps.push_back(xor_step(n, 1 << (i - 1), m >> i));
  }
  for (int i = 1; i <= rounds; ++i) {
    c.steps.push_back(xor_step(n, 1 << (rounds - i), m >> (rounds - i + 1)));
  }
  check_generated(c);
  return c;
}

std::int64_t swing_distance(int h) {
  // (1 - (-2)^(h+1)) / 3, exact in integers.
  std::int64_t power = 1;
  for (int k = 0; k <= h; ++k) power *= -2;
  return (1 - power) / 3;
}

Collective swing_allreduce(int n, Bytes m) {
  require_generator_args("swing_allreduce", n, m, true);
  const int rounds = std::countr_zero(static_cast<unsigned>(n));
  std::vector<Step> reduce_scatter;
  for (int h = 0; h < rounds; ++h) {
    Step step;
    step.volume = m >> (h + 1);
    const std::int64_t distance = swing_distance(h);
    for (NodeId r = 0; r < n; ++r) {
      const std::int64_t signed_peer = (r % 2 == 0) ? r + distance : r - distance;
      const std::int64_t peer = ((signed_peer % n) + n) % n;
      step.pairs.emplace_back(r, static_cast<NodeId>(peer));
    }
    reduce_scatter.push_back(std::move(step));
  }
  Collective c{n, reduce_scatter, "swing"};
  for (auto it = reduce_scatter.rbegin(); it != reduce_scatter.rend(); ++it) c.steps.push_back(*it);
  check_generated(c);
  return c;
}

Collective ring_allreduce(int n, Bytes m) {
  require_generator_args("ring_allreduce", n, m, false);
  Collective c{n, {}, "ring"};
  const Step step = shift_step(n, 1, m / static_cast<Bytes>(n));
  c.steps.assign(static_cast<std::size_t>(2 * (n - 1)), step);
  check_generated(c);
  return c;
}

Collective all_to_all(int n, Bytes m) {
  require_generator_args("all_to_all", n, m, false);
  Collective c{n, {}, "alltoall"};
  for (int i = 1; i < n; ++i) c.steps.push_back(shift_step(n, i, m / static_cast<Bytes>(n)));
  check_generated(c);
  return c;
}

Collective make_collective(std::string_view algorithm, int n, Bytes m) {
  if (algorithm == "rhd") return recursive_halving_doubling(n, m);
  if (algorithm == "swing") return swing_allreduce(n, m);
  if (algorithm == "ring") return ring_allreduce(n, m);
  if (algorithm == "alltoall") return all_to_all(n, m);
  fail(ErrorKind::InvalidParameter,
       "unknown collective algorithm '" + std::string(algorithm) + "' (expected rhd, swing, ring or alltoall)");
}

std::optional<std::string> validate_matching(const Step& step, int n) {
  if (n < 1) return "node count must be positive";
  if (step.volume == 0) return "volume must be positive";
  std::vector<bool> sends(static_cast<std::size_t>(n), false);
  std::vector<bool> receives(static_cast<std::size_t>(n), false);
  for (const auto& [src, dst] : step.pairs) {
    if (src < 0 || src >= n || dst < 0 || dst >= n) {
      return "node id out of range in pair (" + std::to_string(src) + "," + std::to_string(dst) +
             ") for n=" + std::to_string(n);
    }
    if (src == dst) return "self-loop at node " + std::to_string(src);
    if (sends[static_cast<std::size_t>(src)]) return "node " + std::to_string(src) + " sends twice";
    if (receives[static_cast<std::size_t>(dst)]) return "node " + std::to_string(dst) + " receives twice";
    sends[static_cast<std::size_t>(src)] = true;
    receives[static_cast<std::size_t>(dst)] = true;
  }
  return std::nullopt;
}

void validate_collective(const Collective& c) {
  if (c.n < 1) fail(ErrorKind::Validation, "collective node count must be positive");
  if (c.steps.empty()) fail(ErrorKind::Validation, "collective has no steps");
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    if (auto violation = validate_matching(c.steps[i], c.n)) {
      fail(ErrorKind::Validation, "step " + std::to_string(i) + ": " + *violation);
    }
  }
}

DemandMatrix aggregate_demand(const Collective& c) {
  validate_collective(c);
  DemandMatrix demand(c.n);
  for (const Step& step : c.steps) {
    for (const auto& [src, dst] : step.pairs) demand.at(src, dst) += step.volume;
  }
  return demand;
}

std::vector<Bytes> bytes_sent_per_node(const Collective& c) {
  std::vector<Bytes> sent(static_cast<std::size_t>(c.n), 0);
  for (const Step& step : c.steps) {
    for (const auto& pair : step.pairs) sent[static_cast<std::size_t>(pair.first)] += step.volume;
  }
  return sent;
}

namespace {

void reject_unknown_keys(const json& object, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      fail(ErrorKind::Parse, where + ": unknown field '" + item.key() + "'");
    }
  }
}

std::int64_t require_integer(const json& value, const std::string& where) {
  if (!value.is_number_integer()) fail(ErrorKind::Parse, where + ": expected an integer");
  return value.get<std::int64_t>();
}

}  // namespace

Collective parse_collective(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("collective JSON: ") + e.what());
  }
  if (!root.is_object()) fail(ErrorKind::Parse, "collective JSON: top level must be an object");
  reject_unknown_keys(root, {"n", "label", "steps"}, "collective");
  if (!root.contains("n")) fail(ErrorKind::Parse, "collective: missing field 'n'");
  if (!root.contains("steps")) fail(ErrorKind::Parse, "collective: missing field 'steps'");

  Collective c;
  const std::int64_t n = require_integer(root["n"], "collective.n");
  if (n < 1 || n > (1 << 20)) fail(ErrorKind::Validation, "collective.n out of range: " + std::to_string(n));
  c.n = static_cast<int>(n);
  if (root.contains("label")) {
    if (!root["label"].is_string()) fail(ErrorKind::Parse, "collective.label: expected a string");
    c.label = root["label"].get<std::string>();
  } else {
    c.label = "custom";
  }
  const json& steps = root["steps"];
  if (!steps.is_array()) fail(ErrorKind::Parse, "collective.steps: expected an array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string where = "steps[" + std::to_string(i) + "]";
    const json& s = steps[i];
    if (!s.is_object()) fail(ErrorKind::Parse, where + ": expected an object");
    reject_unknown_keys(s, {"pairs", "volume"}, where);
    if (!s.contains("pairs") || !s.contains("volume")) {
      fail(ErrorKind::Parse, where + ": needs 'pairs' and 'volume'");
    }
    Step step;
    const std::int64_t volume = require_integer(s["volume"], where + ".volume");
    if (volume < 0) fail(ErrorKind::Validation, "step " + std::to_string(i) + ": volume must be positive");
    step.volume = static_cast<Bytes>(volume);
    if (!s["pairs"].is_array()) fail(ErrorKind::Parse, where + ".pairs: expected an array");
    for (std::size_t p = 0; p < s["pairs"].size(); ++p) {
      const json& pair = s["pairs"][p];
      const std::string pwhere = where + ".pairs[" + std::to_string(p) + "]";
      if (!pair.is_array() || pair.size() != 2) fail(ErrorKind::Parse, pwhere + ": expected [src, dst]");
      const std::int64_t src = require_integer(pair[0], pwhere);
      const std::int64_t dst = require_integer(pair[1], pwhere);
      auto clamp = [](std::int64_t v) {
        return static_cast<NodeId>(std::clamp<std::int64_t>(v, -1, std::int64_t{1} << 30));
      };
      step.pairs.emplace_back(clamp(src), clamp(dst));
    }
    std::sort(step.pairs.begin(), step.pairs.end());
    c.steps.push_back(std::move(step));
  }
  return c;
}

Collective load_collective(std::string_view document) {
  Collective c = parse_collective(document);
  validate_collective(c);
  return c;
}

std::string collective_to_json(const Collective& c) {
  json root;
  root["n"] = c.n;
  root["label"] = c.label;
  root["steps"] = json::array();
  for (const Step& step : c.steps) {
    json pairs = json::array();
    for (const auto& [src, dst] : step.pairs) pairs.push_back({src, dst});
    root["steps"].push_back({{"pairs", pairs}, {"volume", step.volume}});
  }
  return root.dump();
}

}  // namespace photonic
