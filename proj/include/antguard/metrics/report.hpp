#pragma once

// Per-run metrics, derived from the event trace alone.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "antguard/core/types.hpp"
#include "antguard/sim/energy.hpp"
#include "antguard/sim/trace.hpp"

namespace antguard {

struct ClassCounts {
  std::int64_t injected = 0;
  std::int64_t delivered = 0;
  std::int64_t rule_dropped = 0;  // rule, quarantine and verdict drops
  std::int64_t tail_dropped = 0;
  std::int64_t routing_failures = 0;

  std::int64_t in_flight() const { return injected - delivered - rule_dropped - tail_dropped - routing_failures; }
  bool operator==(const ClassCounts&) const = default;
};

struct MetricsReport {
  ClassCounts legit;
  ClassCounts attack;
  std::optional<double> detection_latency;
  std::optional<int> traceback_depth;
  std::vector<NodeId> quarantined;
  std::vector<double> node_energy;
  double total_energy = 0.0;
  std::int64_t detect_alerts = 0;
  std::int64_t adjunct_unreachable = 0;
  std::int64_t routing_failures = 0;
  std::int64_t signature_alerts = 0;

  double legit_delivery_ratio() const {
    return legit.injected == 0 ? 1.0 : static_cast<double>(legit.delivered) / static_cast<double>(legit.injected);
  }

  bool operator==(const MetricsReport&) const = default;
};

/// Per-node energy counters reconstructed from trace records. Control
/// messages are booked on delivery: tx at the sender, rx at the receiver.
inline std::vector<EnergyCounters> energy_from_trace(const Trace& trace, std::size_t node_count) {
  std::vector<EnergyCounters> c(node_count);
  for (const auto& r : trace.records) {
    if (!r.node) continue;
    auto& here = c.at(r.node->value);
    switch (r.action) {
      case Action::transmitted: ++here.tx; break;
      case Action::enqueued: ++here.rx; break;
      case Action::tail_dropped:
      case Action::rule_dropped:
      case Action::verdict_dropped: ++here.drop; break;
      case Action::inspect: here.inspect += static_cast<std::uint64_t>(r.arg); break;
      case Action::recv_detect:
      case Action::recv_refresh:
      case Action::recv_verdict:
      case Action::recv_signature:
      case Action::recv_lift:
        ++here.rx;
        ++c.at(static_cast<std::size_t>(r.arg)).tx;
        break;
      default: break;
    }
  }
  return c;
}

inline MetricsReport collect_metrics(const Trace& trace, std::size_t node_count, const EnergyCosts& costs) {
  MetricsReport m;
  std::map<PacketId, TrafficClass> cls;
  std::optional<SimTime> attack_start;
  std::optional<SimTime> first_attack_drop;
  std::set<NodeId> quarantined;

  auto counts = [&](const TraceRecord& r) -> ClassCounts& {
    return cls.at(*r.packet) == TrafficClass::attack ? m.attack : m.legit;
  };

  for (const auto& r : trace.records) {
    switch (r.action) {
      case Action::injected_legit:
        cls[*r.packet] = TrafficClass::legit;
        ++m.legit.injected;
        break;
      case Action::injected_attack:
        cls[*r.packet] = TrafficClass::attack;
        ++m.attack.injected;
        if (!attack_start) attack_start = r.time;
        break;
      case Action::delivered: ++counts(r).delivered; break;
      case Action::tail_dropped: ++counts(r).tail_dropped; break;
      case Action::rule_dropped:
      case Action::verdict_dropped:
        ++counts(r).rule_dropped;
        if (cls.at(*r.packet) == TrafficClass::attack && !first_attack_drop) first_attack_drop = r.time;
        break;
      case Action::routing_failure:
        ++counts(r).routing_failures;
        ++m.routing_failures;
        break;
      case Action::detect_alert: ++m.detect_alerts; break;
      case Action::adjunct_unreachable: ++m.adjunct_unreachable; break;
      case Action::recv_signature: ++m.signature_alerts; break;
      case Action::sig_install:
      case Action::sig_duplicate:
        m.traceback_depth = std::max(m.traceback_depth.value_or(0), static_cast<int>(r.arg));
        break;
      case Action::quarantine: quarantined.insert(NodeId(static_cast<std::uint32_t>(r.arg))); break;
      default: break;
    }
  }

  if (attack_start && first_attack_drop) m.detection_latency = *first_attack_drop - *attack_start;
  m.quarantined.assign(quarantined.begin(), quarantined.end());

  const auto energy = energy_from_trace(trace, node_count);
  for (const auto& e : energy) {
    m.node_energy.push_back(e.total(costs));
    m.total_energy += m.node_energy.back();
  }
  return m;
}

}  // namespace antguard
