#pragma once

// Declarative scenario description and its validation.

#include <charconv>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "antguard/core/types.hpp"
#include "antguard/sim/energy.hpp"
#include "antguard/sim/topology.hpp"

namespace antguard {

struct SimParams {
  double duration = 60.0;
  std::uint64_t seed = 1;
  double window = 1.0;
  int warmup_windows = 10;
  double epsilon = 0.2;
  double theta = 0.5;
  int max_retries = 3;   // K
  int lift_windows = 2;  // H
  int log_windows = 5;   // L
  int sample_max = 32;   // S_max
  double threshold_fraction = 0.8;
  double service_delay = 0.01;
  double consume_delay = 0.05;
  std::optional<int> buffer_capacity;  // overrides every node when set
  EnergyCosts energy;
  std::uint64_t event_cap = 10'000'000;

  bool operator==(const SimParams&) const = default;
};

enum class TrafficModel : std::uint8_t { cbr, poisson };

struct TrafficSourceSpec {
  NodeId src;
  NodeId dst;
  TrafficModel model = TrafficModel::cbr;
  double rate = 1.0;  // packets per window
  int payload = 16;   // bytes
  double start = 0.0;
  std::optional<double> stop;
  bool operator==(const TrafficSourceSpec&) const = default;
};

struct AttackSpec {
  std::vector<NodeId> attackers;
  NodeId victim;
  double rate = 50.0;  // packets per window per attacker
  Bytes pattern;
  double start = 0.0;
  std::optional<double> stop;
  int payload = 32;
  bool stealth = false;
  bool operator==(const AttackSpec&) const = default;
};

struct ScenarioConfig {
  TopologyConfig topology;
  SimParams params;
  std::vector<TrafficSourceSpec> legit;
  std::vector<AttackSpec> attacks;
  std::vector<Bytes> patterns;
  bool operator==(const ScenarioConfig&) const = default;

  double warmup_end() const { return params.warmup_windows * params.window; }
};

namespace detail {

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename T>
std::string format_number(T v) {
  return std::to_string(v);
}

}  // namespace detail

/// Named access to every tunable in [params]; shared by the parser, the
/// serializer and `--set KEY=VALUE`.
struct ParamField {
  std::string_view key;
  std::function<bool(SimParams&, std::string_view)> set;
  std::function<std::optional<std::string>(const SimParams&)> get;
};

namespace detail {

template <typename T>
ParamField make_field(std::string_view key, T SimParams::*member) {
  return {key,
          [member](SimParams& p, std::string_view v) {
            auto n = parse_number<T>(v);
            if (!n) return false;
            p.*member = *n;
            return true;
          },
          [member](const SimParams& p) -> std::optional<std::string> { return format_number(p.*member); }};
}

template <typename T>
ParamField make_energy_field(std::string_view key, T EnergyCosts::*member) {
  return {key,
          [member](SimParams& p, std::string_view v) {
            auto n = parse_number<T>(v);
            if (!n) return false;
            p.energy.*member = *n;
            return true;
          },
          [member](const SimParams& p) -> std::optional<std::string> { return format_number(p.energy.*member); }};
}

}  // namespace detail

inline const std::vector<ParamField>& param_fields() {
  using detail::make_energy_field;
  using detail::make_field;
  static const std::vector<ParamField> fields = {
      make_field("duration", &SimParams::duration),
      make_field("seed", &SimParams::seed),
      make_field("window", &SimParams::window),
      make_field("warmup_windows", &SimParams::warmup_windows),
      make_field("epsilon", &SimParams::epsilon),
      make_field("theta", &SimParams::theta),
      make_field("max_retries", &SimParams::max_retries),
      make_field("lift_windows", &SimParams::lift_windows),
      make_field("log_windows", &SimParams::log_windows),
      make_field("sample_max", &SimParams::sample_max),
      make_field("threshold_fraction", &SimParams::threshold_fraction),
      make_field("service_delay", &SimParams::service_delay),
      make_field("consume_delay", &SimParams::consume_delay),
      ParamField{"buffer_capacity",
                 [](SimParams& p, std::string_view v) {
                   auto n = detail::parse_number<int>(v);
                   if (!n) return false;
                   p.buffer_capacity = *n;
                   return true;
                 },
                 [](const SimParams& p) -> std::optional<std::string> {
                   if (!p.buffer_capacity) return std::nullopt;
                   return std::to_string(*p.buffer_capacity);
                 }},
      make_energy_field("energy_tx", &EnergyCosts::tx),
      make_energy_field("energy_rx", &EnergyCosts::rx),
      make_energy_field("energy_inspect", &EnergyCosts::inspect),
      make_energy_field("energy_drop", &EnergyCosts::drop),
      make_field("event_cap", &SimParams::event_cap),
  };
  return fields;
}

inline const ParamField* find_param(std::string_view key) {
  for (const auto& f : param_fields())
    if (f.key == key) return &f;
  return nullptr;
}

/// Apply one `KEY=VALUE` override.
inline void apply_override(ScenarioConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(assignment) + "': expected KEY=VALUE");
  const auto key = assignment.substr(0, eq);
  const auto value = assignment.substr(eq + 1);
  const auto* field = find_param(key);
  if (!field) throw ConfigError("override: unknown parameter '" + std::string(key) + "'");
  if (!field->set(config.params, value))
    throw ConfigError("override: bad value '" + std::string(value) + "' for parameter '" + std::string(key) + "'");
}

/// Topology with the global buffer_capacity override applied.
inline TopologyConfig effective_topology(const ScenarioConfig& config) {
  auto topo = config.topology;
  if (config.params.buffer_capacity)
    for (auto& n : topo.nodes) n.buffer_capacity = *config.params.buffer_capacity;
  return topo;
}

/// Checks the cross-field invariants. Throws ConfigError naming the field.
inline void validate_scenario(const ScenarioConfig& config) {
  const auto& p = config.params;
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("field '" + field + "': " + why);
  };
  if (!(p.window > 0)) fail("window", "must be positive");
  if (p.warmup_windows < 1) fail("warmup_windows", "must be >= 1");
  if (!(p.duration > config.warmup_end())) fail("duration", "must exceed the warmup period");
  if (p.epsilon < 0) fail("epsilon", "must be non-negative");
  if (!(p.theta > 0 && p.theta <= 1)) fail("theta", "must be in (0, 1]");
  if (p.max_retries < 0) fail("max_retries", "must be non-negative");
  if (p.lift_windows < 1) fail("lift_windows", "must be >= 1");
  if (p.log_windows < 1) fail("log_windows", "must be >= 1");
  if (p.sample_max < 1) fail("sample_max", "must be >= 1");
  if (!(p.threshold_fraction > 0 && p.threshold_fraction <= 1)) fail("threshold_fraction", "must be in (0, 1]");
  if (!(p.service_delay > 0)) fail("service_delay", "must be positive");
  if (!(p.consume_delay > 0)) fail("consume_delay", "must be positive");
  if (p.buffer_capacity && *p.buffer_capacity < 1) fail("buffer_capacity", "must be >= 1");
  if (p.event_cap < 1) fail("event_cap", "must be >= 1");

  const auto topo = build_topology(effective_topology(config));
  const auto valid = [&](NodeId id) { return id.value < topo.size(); };

  for (const auto& pat : config.patterns)
    if (pat.empty()) fail("patterns", "empty pattern");

  for (const auto& s : config.legit) {
    if (!valid(s.src) || !valid(s.dst)) fail("legit", "unknown node in flow " + to_string(s.src) + "->" + to_string(s.dst));
    if (s.src == s.dst) fail("legit", "flow source equals destination");
    if (topo.node(s.src).kind == NodeKind::attacker) fail("legit", "flow source " + to_string(s.src) + " is an attacker");
    if (!(s.rate > 0)) fail("rate", "legit rate must be positive");
    if (s.payload < 0 || s.payload > 256) fail("payload", "must be in [0, 256]");
  }
  for (const auto& a : config.attacks) {
    if (a.attackers.empty()) fail("attackers", "attack needs at least one attacker");
    if (!valid(a.victim)) fail("victim", "unknown node " + to_string(a.victim));
    for (auto id : a.attackers) {
      if (!valid(id)) fail("attackers", "unknown node " + to_string(id));
      if (topo.node(id).kind != NodeKind::attacker) fail("attackers", "node " + to_string(id) + " is not of kind attacker");
      if (id == a.victim) fail("attackers", "attacker equals victim");
    }
    if (a.rate < 1) fail("rate", "attack rate must be >= 1");
    if (a.start < config.warmup_end()) fail("start", "attack starts before warmup ends");
    if (a.stop && *a.stop < a.start) fail("stop", "attack stops before it starts");
    if (a.pattern.empty()) fail("pattern", "attack pattern is empty");
    bool known = false;
    for (const auto& pat : config.patterns) known |= pat == a.pattern;
    if (!known) fail("pattern", "attack pattern is not in the pattern dictionary");
    if (a.payload < 0 || a.payload > 256) fail("payload", "must be in [0, 256]");
    if (a.pattern.size() > 256) fail("pattern", "longer than the maximum payload");
  }
}

}  // namespace antguard
