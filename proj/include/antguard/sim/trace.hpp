#pragma once

// Event trace: the single source the metrics are computed from.
//
// Dump format, one record per line, tab separated:
//   time  seq  kind  node  packet_id  action
// `node` and `packet_id` are "-" when not applicable. `action` is a name
// optionally followed by ":s<signature index>" and ":<argument>". An event
// that causes several actions emits several records with the same seq.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "antguard/core/types.hpp"
#include "antguard/sim/event.hpp"

namespace antguard {

enum class Action : std::uint8_t {
  injected_legit,
  injected_attack,
  enqueued,
  tail_dropped,
  rule_dropped,
  verdict_dropped,
  transmitted,  // arg: next hop
  delivered,
  routing_failure,
  tick,
  detect_alert,  // arg: alert count
  detect_logged,
  detect_suppressed,
  adjunct_unreachable,
  count_refresh,  // arg: count
  recv_detect,    // recv_*: arg = sending node
  recv_refresh,
  recv_verdict,
  recv_signature,
  recv_lift,
  session_open,
  dpa_wait,  // arg: retries after the wait
  dpa_no_attack,
  dpa_analyze,
  inspect,  // arg: packets inspected
  rerouted,
  sig_install,    // arg: hop count
  sig_duplicate,  // arg: hop count
  sig_forward,    // arg: neighbor
  quarantine,     // arg: neighbor
  lift_check,     // arg: window arrivals
  rule_lift,
  lift_forward,  // arg: neighbor
  ctl_unreachable,
};

inline const char* to_string(Action a) {
  switch (a) {
    case Action::injected_legit: return "injected_legit";
    case Action::injected_attack: return "injected_attack";
    case Action::enqueued: return "enqueued";
    case Action::tail_dropped: return "tail_dropped";
    case Action::rule_dropped: return "rule_dropped";
    case Action::verdict_dropped: return "verdict_dropped";
    case Action::transmitted: return "transmitted";
    case Action::delivered: return "delivered";
    case Action::routing_failure: return "routing_failure";
    case Action::tick: return "tick";
    case Action::detect_alert: return "detect_alert";
    case Action::detect_logged: return "detect_logged";
    case Action::detect_suppressed: return "detect_suppressed";
    case Action::adjunct_unreachable: return "adjunct_unreachable";
    case Action::count_refresh: return "count_refresh";
    case Action::recv_detect: return "recv_detect";
    case Action::recv_refresh: return "recv_refresh";
    case Action::recv_verdict: return "recv_verdict";
    case Action::recv_signature: return "recv_signature";
    case Action::recv_lift: return "recv_lift";
    case Action::session_open: return "session_open";
    case Action::dpa_wait: return "dpa_wait";
    case Action::dpa_no_attack: return "dpa_no_attack";
    case Action::dpa_analyze: return "dpa_analyze";
    case Action::inspect: return "inspect";
    case Action::rerouted: return "rerouted";
    case Action::sig_install: return "sig_install";
    case Action::sig_duplicate: return "sig_duplicate";
    case Action::sig_forward: return "sig_forward";
    case Action::quarantine: return "quarantine";
    case Action::lift_check: return "lift_check";
    case Action::rule_lift: return "rule_lift";
    case Action::lift_forward: return "lift_forward";
    case Action::ctl_unreachable: return "ctl_unreachable";
  }
  return "?";
}

struct TraceRecord {
  SimTime time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::window_tick;
  std::optional<NodeId> node;
  std::optional<PacketId> packet;
  Action action = Action::tick;
  std::int64_t arg = -1;
  int sig = -1;

  bool operator==(const TraceRecord&) const = default;
};

struct Trace {
  std::vector<TraceRecord> records;
  std::vector<AttackSignature> signatures;  // indexed by TraceRecord::sig

  bool operator==(const Trace&) const = default;
};

inline std::string format_record(const TraceRecord& r) {
  char time_buf[40];
  std::snprintf(time_buf, sizeof(time_buf), "%.6f", r.time);
  std::string line = time_buf;
  line += '\t';
  line += std::to_string(r.seq);
  line += '\t';
  line += to_string(r.kind);
  line += '\t';
  line += r.node ? std::to_string(r.node->value) : "-";
  line += '\t';
  line += r.packet ? std::to_string(*r.packet) : "-";
  line += '\t';
  line += to_string(r.action);
  if (r.sig >= 0) line += ":s" + std::to_string(r.sig);
  if (r.arg >= 0) line += ":" + std::to_string(r.arg);
  return line;
}

inline void dump_trace(const Trace& trace, std::ostream& out) {
  for (const auto& r : trace.records) out << format_record(r) << '\n';
}

}  // namespace antguard
