#pragma once

// Discrete-event simulator for a sensor network under flooding attack with
// the ant-based prevention pipeline attached.
//
// Every node owns one FIFO buffer and a single server. Transit packets take
// `service_delay` to forward; packets addressed to the node take
// `consume_delay` to process and are then delivered. Attackers inject their
// own flood straight onto the outgoing link. Control messages (alerts,
// verdicts, lift notices) travel with link latency and never occupy buffers.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "antguard/core/types.hpp"
#include "antguard/dda/agent.hpp"
#include "antguard/dda/forward_log.hpp"
#include "antguard/dda/reliability.hpp"
#include "antguard/filter/dpa.hpp"
#include "antguard/filter/response.hpp"
#include "antguard/filter/tfa.hpp"
#include "antguard/scenario/config.hpp"
#include "antguard/scenario/traffic.hpp"
#include "antguard/sim/energy.hpp"
#include "antguard/sim/event.hpp"
#include "antguard/sim/rng.hpp"
#include "antguard/sim/topology.hpp"
#include "antguard/sim/trace.hpp"

namespace antguard {

class SimulationAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  bool prevention = true;
  std::optional<std::uint64_t> event_cap;  // overrides params.event_cap
};

enum class ForwardAction : std::uint8_t { enqueued, tail_dropped, rule_dropped };

struct InFlight {
  std::int64_t legit = 0;
  std::int64_t attack = 0;
};

struct RunResult {
  Trace trace;
  EnergyLedger energy{0, {}};
  InFlight in_flight;  // counted from simulator state, independent of the trace
  std::vector<std::size_t> rules_at_end;
  std::vector<std::set<NodeId>> quarantined_at_end;
  std::uint64_t events_processed = 0;
  int max_occupancy_violation = 0;  // number of times occupancy exceeded capacity; always 0
};

namespace msg {
struct CountRefresh {
  std::int64_t count;
};
struct Verdict {
  PacketIdSet drop;
  bool analyzed;
};
struct Lift {
  AttackSignature signature;
};
using Control = std::variant<AlertMessage, CountRefresh, Verdict, Lift>;
}  // namespace msg

class Simulator {
 public:
  Simulator(ScenarioConfig config, std::uint64_t seed, RunOptions options = {})
      : cfg_(std::move(config)),
        p_(cfg_.params),
        topo_(build_topology(effective_topology(cfg_))),
        options_(options),
        rng_(Rng::stream(seed, 7)),
        energy_(topo_.size(), p_.energy),
        seed_(seed) {
    validate_scenario(cfg_);
    rel_params_ = {p_.epsilon, p_.warmup_windows, p_.threshold_fraction};
    nodes_.reserve(topo_.size());
    for (const auto& d : topo_.nodes()) {
      NodeRuntime n(p_.log_windows);
      n.capacity = d.buffer_capacity;
      n.threshold = buffer_threshold(d.buffer_capacity, p_.threshold_fraction);
      n.rel = ReliabilityState::fresh(rel_params_);
      nodes_.push_back(std::move(n));
    }
  }

  RunResult run() {
    for (auto& s : generate_traffic(cfg_, seed_)) queue_.push(s.time, EventKind::packet_send, InjectEv{std::move(s.packet)});
    if (p_.window <= p_.duration) queue_.push(p_.window, EventKind::window_tick, TickEv{1});

    const auto cap = options_.event_cap.value_or(p_.event_cap);
    std::uint64_t processed = 0;
    while (!queue_.empty() && queue_.top().time <= p_.duration) {
      if (++processed > cap)
        throw SimulationAborted("event cap of " + std::to_string(cap) + " events exceeded at t=" +
                                std::to_string(queue_.top().time));
      auto e = queue_.pop();
      now_ = e.time;
      seq_ = e.seq;
      kind_ = e.kind;
      std::visit([this](auto& ev) { handle(ev); }, e.payload);
    }

    RunResult out;
    out.trace = std::move(trace_);
    out.energy = energy_;
    out.events_processed = processed;
    out.max_occupancy_violation = occupancy_violations_;
    for (const auto& n : nodes_) {
      for (const auto& h : n.buffer) count_in_flight(out.in_flight, h.packet);
      if (n.in_service) count_in_flight(out.in_flight, *n.in_service);
      out.rules_at_end.push_back(n.defense.rules.size());
      out.quarantined_at_end.push_back(n.defense.quarantined);
    }
    queue_.for_each([&](const auto& e) {
      if (const auto* a = std::get_if<ArriveEv>(&e.payload)) count_in_flight(out.in_flight, a->packet);
    });
    return out;
  }

  /// Arrival handling at `node`: filter, tail drop or enqueue.
  ForwardAction forward_packet(NodeId node, Packet packet) {
    auto& n = nodes_.at(node.value);
    if (packet.hop_trace.empty()) throw ContractViolation("forward_packet: empty hop trace");
    const NodeId from = packet.hop_trace.back();
    const PacketView view(packet);
    ++n.arrivals_window;
    n.log.record(from, view);

    if (n.defense.blocks(view, from)) {
      energy_.charge_drop(node.value);
      record(node, packet.packet_id, Action::rule_dropped);
      return ForwardAction::rule_dropped;
    }
    if (n.occupancy() >= n.capacity) {
      energy_.charge_drop(node.value);
      record(node, packet.packet_id, Action::tail_dropped);
      return ForwardAction::tail_dropped;
    }
    packet.hop_trace.push_back(node);
    energy_.charge_rx(node.value);
    record(node, packet.packet_id, Action::enqueued);
    n.buffer.push_back({std::move(packet), false});
    check_bound(n);
    start_service(node);
    return ForwardAction::enqueued;
  }

  DefenseState& defense(NodeId id) { return nodes_.at(id.value).defense; }
  int occupancy(NodeId id) const { return nodes_.at(id.value).occupancy(); }
  const Topology& topology() const { return topo_; }
  const Trace& trace() const { return trace_; }

 private:
  struct Buffered {
    Packet packet;
    bool held = false;
  };

  struct NodeRuntime {
    explicit NodeRuntime(int log_windows) : log(log_windows) {}

    std::deque<Buffered> buffer;
    std::optional<Packet> in_service;
    int capacity = 64;
    int threshold = 51;
    std::int64_t arrivals_window = 0;
    ReliabilityState rel;
    NeighborForwardLog log;
    DefenseState defense;
    bool session_open = false;
    NodeId session_adjunct;
    ResponseState response;

    int occupancy() const { return static_cast<int>(buffer.size()) + (in_service ? 1 : 0); }
  };

  struct InjectEv {
    Packet packet;
  };
  struct ServiceDoneEv {
    NodeId node;
  };
  struct ArriveEv {
    NodeId node;
    Packet packet;
  };
  struct TickEv {
    std::int64_t index;
  };
  struct TimerEv {
    NodeId adjunct;
    NodeId victim;
    std::uint64_t serial;
  };
  struct DeliverEv {
    NodeId to;
    NodeId from;
    msg::Control message;
  };
  using Payload = std::variant<InjectEv, ServiceDoneEv, ArriveEv, TickEv, TimerEv, DeliverEv>;

  // ---- packet plane ----------------------------------------------------

  void handle(InjectEv& ev) {
    auto& pkt = ev.packet;
    const NodeId src = pkt.src;
    record(src, pkt.packet_id,
           pkt.ground_truth == TrafficClass::attack ? Action::injected_attack : Action::injected_legit);
    if (topo_.node(src).kind == NodeKind::attacker) {
      transmit(src, std::move(pkt));
      return;
    }
    auto& n = nodes_[src.value];
    if (n.occupancy() >= n.capacity) {
      energy_.charge_drop(src.value);
      record(src, pkt.packet_id, Action::tail_dropped);
      return;
    }
    n.buffer.push_back({std::move(pkt), false});
    check_bound(n);
    start_service(src);
  }

  void handle(ArriveEv& ev) { forward_packet(ev.node, std::move(ev.packet)); }

  void handle(ServiceDoneEv& ev) {
    auto& n = nodes_[ev.node.value];
    Packet pkt = std::move(*n.in_service);
    n.in_service.reset();
    if (pkt.dst == ev.node) {
      record(ev.node, pkt.packet_id, Action::delivered);
    } else {
      transmit(ev.node, std::move(pkt));
    }
    start_service(ev.node);
  }

  void transmit(NodeId node, Packet pkt) {
    std::optional<NodeId> next;
    if (!pkt.detour.empty()) {
      next = pkt.detour.front();
      pkt.detour.erase(pkt.detour.begin());
      if (!topo_.adjacent(node, *next)) next.reset();
    } else {
      next = topo_.next_hop(node, pkt.dst);
      // Route around a neighbor this node has quarantined, when possible.
      const auto& q = nodes_[node.value].defense.quarantined;
      if (next && *next != pkt.dst && q.count(*next)) {
        auto excluded = q;
        excluded.erase(pkt.dst);
        if (auto alt = shortest_path(topo_, node, pkt.dst, excluded)) {
          pkt.detour.assign(alt->begin() + 2, alt->end());
          next = (*alt)[1];
          record(node, pkt.packet_id, Action::rerouted);
        }
      }
    }
    if (!next) {
      record(node, pkt.packet_id, Action::routing_failure);
      return;
    }
    energy_.charge_tx(node.value);
    record(node, pkt.packet_id, Action::transmitted, static_cast<std::int64_t>(next->value));
    const double at = now_ + *topo_.latency(node, *next);
    queue_.push(at, EventKind::packet_arrive, ArriveEv{*next, std::move(pkt)});
  }

  void start_service(NodeId node) {
    auto& n = nodes_[node.value];
    if (n.in_service) return;
    for (auto it = n.buffer.begin(); it != n.buffer.end(); ++it) {
      if (it->held) continue;
      n.in_service = std::move(it->packet);
      n.buffer.erase(it);
      const double delay = n.in_service->dst == node ? p_.consume_delay : p_.service_delay;
      queue_.push(now_ + delay, EventKind::packet_send, ServiceDoneEv{node});
      return;
    }
  }

  // ---- detection --------------------------------------------------------

  void handle(TickEv& ev) {
    record(std::nullopt, std::nullopt, Action::tick);
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
      const NodeId id(i);
      auto& n = nodes_[i];
      n.log.advance();
      const auto kind = topo_.node(id).kind;
      if (kind != NodeKind::sensor && kind != NodeKind::sink) continue;

      const auto arrivals = n.arrivals_window;
      n.arrivals_window = 0;
      n.rel = update_window(n.rel, arrivals);

      if (check_trigger(n.rel, n.occupancy(), n.capacity, rel_params_)) {
        on_trigger(id);
      } else if (n.session_open) {
        send_refresh(id);
      }

      if (n.response.active()) {
        auto st = response_lift(n.response, arrivals, n.threshold, ResponseParams{p_.lift_windows});
        record(id, std::nullopt, Action::lift_check, arrivals);
        if (st.lift_pending) {
          for (const auto& sig : st.active_rules) lift_at(id, sig);
          n.response = ResponseState{};
        } else {
          n.response = st;
        }
      }
    }
    const double next = static_cast<double>(ev.index + 1) * p_.window;
    if (next <= p_.duration) queue_.push(next, EventKind::window_tick, TickEv{ev.index + 1});
  }

  void on_trigger(NodeId id) {
    auto& n = nodes_[id.value];
    if (!options_.prevention) {
      record(id, std::nullopt, Action::detect_logged, n.rel.window_count);
      return;
    }
    if (n.session_open) {
      record(id, std::nullopt, Action::detect_suppressed);
      send_refresh(id);
      return;
    }
    std::vector<Packet> contents;
    for (const auto& b : n.buffer) contents.push_back(b.packet);
    if (contents.empty()) return;

    auto batch = draw_sample(contents, n.rel.window_count, p_.sample_max, rng_, now_, id);
    const auto alert_count = batch.alert_count;
    PacketIdSet sampled;
    for (const auto& p : batch.packets) sampled.insert(p.packet_id);

    auto dispatch = raise_detect_alert(topo_, id, std::move(batch), n.rel.r, quarantined_anywhere());
    if (!dispatch) {
      record(id, std::nullopt, Action::adjunct_unreachable);
      return;
    }
    for (auto& b : n.buffer)
      if (sampled.count(b.packet.packet_id)) b.held = true;
    n.session_open = true;
    n.session_adjunct = dispatch->adjunct;
    record(id, std::nullopt, Action::detect_alert, alert_count);
    queue_.push(now_ + dispatch->latency, EventKind::alert_deliver,
                DeliverEv{dispatch->adjunct, id, std::move(dispatch->message)});
  }

  void send_refresh(NodeId id) {
    auto& n = nodes_[id.value];
    record(id, std::nullopt, Action::count_refresh, n.rel.window_count);
    send_control(id, n.session_adjunct, msg::CountRefresh{n.rel.window_count});
  }

  // ---- control plane ----------------------------------------------------

  void send_control(NodeId from, NodeId to, msg::Control m) {
    std::optional<double> latency = topo_.latency(from, to);
    if (!latency) {
      auto excluded = quarantined_anywhere();
      excluded.erase(from);
      excluded.erase(to);
      auto path = shortest_path(topo_, from, to, excluded);
      if (path) latency = topo_.path_latency(*path);
    }
    if (!latency) {
      record(from, std::nullopt, Action::ctl_unreachable, static_cast<std::int64_t>(to.value));
      return;
    }
    queue_.push(now_ + *latency, EventKind::alert_deliver, DeliverEv{to, from, std::move(m)});
  }

  void handle(DeliverEv& ev) {
    energy_.charge_tx(ev.from.value);
    energy_.charge_rx(ev.to.value);
    const auto from = static_cast<std::int64_t>(ev.from.value);
    std::visit(
        [&](auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, AlertMessage>) {
            if (m.is_detect()) {
              record(ev.to, std::nullopt, Action::recv_detect, from);
              on_detect_alert(ev.to, m);
            } else {
              record(ev.to, std::nullopt, Action::recv_signature, from);
              on_signature(ev.to, ev.from, std::get<SignatureAlert>(m.body));
            }
          } else if constexpr (std::is_same_v<T, msg::CountRefresh>) {
            record(ev.to, std::nullopt, Action::recv_refresh, from);
            auto& sessions = sessions_[ev.to];
            if (auto it = sessions.find(ev.from); it != sessions.end()) it->second.current_count = m.count;
          } else if constexpr (std::is_same_v<T, msg::Verdict>) {
            record(ev.to, std::nullopt, Action::recv_verdict, from);
            on_verdict(ev.to, m);
          } else {
            record(ev.to, std::nullopt, Action::recv_lift, from);
            lift_at(ev.to, m.signature);
          }
        },
        ev.message);
  }

  void on_detect_alert(NodeId adjunct, const AlertMessage& alert) {
    auto& sessions = sessions_[adjunct];
    if (sessions.count(alert.origin)) {
      record(adjunct, std::nullopt, Action::detect_suppressed);
      return;
    }
    sessions.emplace(alert.origin, DpaSession::open(alert, ++session_serial_));
    record(adjunct, std::nullopt, Action::session_open, static_cast<std::int64_t>(alert.origin.value));
    compare(adjunct, alert.origin);
  }

  void handle(TimerEv& ev) {
    auto& sessions = sessions_[ev.adjunct];
    auto it = sessions.find(ev.victim);
    if (it == sessions.end() || it->second.serial != ev.serial || it->second.state != SessionState::waiting) return;
    it->second.state = SessionState::comparing;
    compare(ev.adjunct, ev.victim);
  }

  void compare(NodeId adjunct, NodeId victim) {
    auto& session = sessions_[adjunct].at(victim);
    const auto outcome = dpa_compare(session.current_count, session, DpaParams{p_.max_retries, p_.window}, rng_);
    switch (outcome.kind) {
      case DpaOutcome::Kind::wait:
        record(adjunct, std::nullopt, Action::dpa_wait, session.retries);
        queue_.push(now_ + outcome.delay, EventKind::timer_expiry, TimerEv{adjunct, victim, session.serial});
        return;
      case DpaOutcome::Kind::no_attack:
        record(adjunct, std::nullopt, Action::dpa_no_attack);
        send_control(adjunct, victim, msg::Verdict{{}, false});
        sessions_[adjunct].erase(victim);
        return;
      case DpaOutcome::Kind::analyze: {
        record(adjunct, std::nullopt, Action::dpa_analyze);
        const auto n = session.sample.packets.size();
        energy_.charge_inspect(adjunct.value, n);
        record(adjunct, std::nullopt, Action::inspect, static_cast<std::int64_t>(n));
        const auto result = tfa_analyze(session.sample, session.reliability, cfg_.patterns, TfaParams{p_.epsilon, p_.theta});
        const auto signature = derive_signature(result);
        auto actions = response_apply(session, result, signature);
        send_control(adjunct, victim, msg::Verdict{std::move(actions.drop), true});
        if (signature) send_control(adjunct, victim, AlertMessage{adjunct, SignatureAlert{*signature, 0}});
        sessions_[adjunct].erase(victim);
        return;
      }
    }
  }

  void on_verdict(NodeId victim, const msg::Verdict& v) {
    auto& n = nodes_[victim.value];
    std::set<NodeId> congested;
    for (std::uint32_t i = 0; i < nodes_.size(); ++i)
      if (NodeId(i) != victim && nodes_[i].occupancy() > nodes_[i].threshold) congested.insert(NodeId(i));

    for (auto it = n.buffer.begin(); it != n.buffer.end();) {
      if (!it->held) {
        ++it;
        continue;
      }
      if (v.drop.count(it->packet.packet_id)) {
        energy_.charge_drop(victim.value);
        record(victim, it->packet.packet_id, Action::verdict_dropped);
        it = n.buffer.erase(it);
        continue;
      }
      it->held = false;
      auto& pkt = it->packet;
      if (pkt.dst != victim && pkt.detour.empty()) {
        const auto primary = topo_.next_hop(victim, pkt.dst);
        if (primary && congested.count(*primary)) {
          if (auto alt = find_alternate_route(topo_, victim, pkt.dst, congested)) {
            pkt.detour.assign(alt->begin() + 1, alt->end());
            record(victim, pkt.packet_id, Action::rerouted);
          }
        }
      }
      ++it;
    }
    n.session_open = false;
    start_service(victim);
  }

  void on_signature(NodeId node, NodeId from, const SignatureAlert& alert) {
    auto& n = nodes_[node.value];
    const int sig = signature_index(alert.signature);
    auto actions = handle_signature_alert(n.defense, n.log, node, from, alert, now_);
    if (!actions.installed) {
      record(node, std::nullopt, Action::sig_duplicate, alert.hop_count, sig);
      return;
    }
    record(node, std::nullopt, Action::sig_install, alert.hop_count, sig);
    if (alert.hop_count == 0) {
      n.response.active_rules.insert(alert.signature);
      n.response.below_threshold_streak = 0;
    }
    for (auto q : actions.quarantine) record(node, std::nullopt, Action::quarantine, q.value, sig);
    for (auto nb : actions.forward_to) {
      record(node, std::nullopt, Action::sig_forward, nb.value, sig);
      send_control(node, nb, AlertMessage{node, SignatureAlert{alert.signature, alert.hop_count + 1}});
    }
  }

  void lift_at(NodeId node, const AttackSignature& signature) {
    auto& n = nodes_[node.value];
    if (!n.defense.has_rule(signature)) return;
    const int sig = signature_index(signature);
    const auto next = lift_signature(n.defense, signature);
    record(node, std::nullopt, Action::rule_lift, -1, sig);
    for (auto nb : next) {
      record(node, std::nullopt, Action::lift_forward, nb.value, sig);
      send_control(node, nb, msg::Lift{signature});
    }
  }

  // ---- helpers ----------------------------------------------------------

  std::set<NodeId> quarantined_anywhere() const {
    std::set<NodeId> out;
    for (const auto& n : nodes_) out.insert(n.defense.quarantined.begin(), n.defense.quarantined.end());
    return out;
  }

  int signature_index(const AttackSignature& s) {
    auto& sigs = trace_.signatures;
    for (std::size_t i = 0; i < sigs.size(); ++i)
      if (sigs[i] == s) return static_cast<int>(i);
    sigs.push_back(s);
    return static_cast<int>(sigs.size() - 1);
  }

  void record(std::optional<NodeId> node, std::optional<PacketId> packet, Action action, std::int64_t arg = -1,
              int sig = -1) {
    trace_.records.push_back({now_, seq_, kind_, node, packet, action, arg, sig});
  }

  void check_bound(const NodeRuntime& n) {
    if (n.occupancy() > n.capacity) ++occupancy_violations_;
  }

  static void count_in_flight(InFlight& f, const Packet& p) {
    ++(p.ground_truth == TrafficClass::attack ? f.attack : f.legit);
  }

  ScenarioConfig cfg_;
  SimParams p_;
  Topology topo_;
  RunOptions options_;
  ReliabilityParams rel_params_;
  Rng rng_;
  EnergyLedger energy_;
  std::uint64_t seed_;

  std::vector<NodeRuntime> nodes_;
  std::map<NodeId, std::map<NodeId, DpaSession>> sessions_;  // adjunct -> victim -> session
  std::uint64_t session_serial_ = 0;
  EventQueue<Payload> queue_;
  Trace trace_;
  int occupancy_violations_ = 0;

  SimTime now_ = 0.0;
  std::uint64_t seq_ = 0;
  EventKind kind_ = EventKind::packet_arrive;
};

inline RunResult run(const ScenarioConfig& config, std::uint64_t seed, RunOptions options = {}) {
  return Simulator(config, seed, options).run();
}

}  // namespace antguard
