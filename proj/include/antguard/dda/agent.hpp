#pragma once

// DDoS detecting ant: sampling, alert dispatch, rerouting and hop-by-hop
// traceback of confirmed signatures.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "antguard/core/types.hpp"
#include "antguard/dda/forward_log.hpp"
#include "antguard/sim/rng.hpp"
#include "antguard/sim/topology.hpp"

namespace antguard {

/// Filtering state a node holds on behalf of the defense: installed drop
/// rules, quarantined neighbors and where each signature was pushed upstream.
struct DefenseState {
  std::map<AttackSignature, DropRule> rules;
  std::set<NodeId> quarantined;
  std::map<AttackSignature, std::vector<NodeId>> forwarded_to;

  bool has_rule(const AttackSignature& sig) const { return rules.count(sig) != 0; }

  /// True if the packet must be discarded on arrival from `from`.
  bool blocks(const PacketView& p, NodeId from) const {
    if (quarantined.count(from)) return true;
    for (const auto& [sig, _] : rules)
      if (signature_matches(p, sig)) return true;
    return false;
  }
};

/// Uniform sample without replacement of min(s_max, buffer.size()) packets.
/// The packets are copied; the buffer is not touched.
inline SampleBatch draw_sample(std::span<const Packet> buffer, std::int64_t alert_count, int s_max,
                               Rng& rng, SimTime now, NodeId victim) {
  if (buffer.empty()) throw ContractViolation("draw_sample: empty buffer");
  if (s_max < 1) throw ContractViolation("draw_sample: s_max must be positive");
  const auto n = buffer.size();
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(s_max), n);

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());

  SampleBatch batch;
  batch.alert_count = std::max<std::int64_t>(alert_count, static_cast<std::int64_t>(k));
  batch.sampled_at = now;
  batch.victim_node = victim;
  batch.packets.reserve(k);
  for (auto i : idx) batch.packets.push_back(buffer[i]);
  return batch;
}

struct DetectDispatch {
  AlertMessage message;
  NodeId adjunct;
  Path path;
  double latency = 0.0;
};

/// Address a detect alert to the node's nearest adjunct. Absent when no
/// adjunct is reachable around `unavailable` nodes.
inline std::optional<DetectDispatch> raise_detect_alert(const Topology& topo, NodeId node, SampleBatch batch,
                                                        double r, const std::set<NodeId>& unavailable) {
  if (batch.packets.empty()) throw ContractViolation("raise_detect_alert: empty sample");
  const auto adjunct = topo.nearest_adjunct(node);
  if (!adjunct || unavailable.count(*adjunct)) return std::nullopt;
  std::set<NodeId> excluded = unavailable;
  excluded.erase(node);
  auto path = shortest_path(topo, node, *adjunct, excluded);
  if (!path) return std::nullopt;
  DetectDispatch d{AlertMessage{node, DetectAlert{std::move(batch), r}}, *adjunct, *path, 0.0};
  d.latency = topo.path_latency(d.path);
  return d;
}

/// Minimum-hop route from `node` to `dst` that avoids congested nodes.
inline std::optional<Path> find_alternate_route(const Topology& topo, NodeId node, NodeId dst,
                                                const std::set<NodeId>& congested) {
  std::set<NodeId> excluded = congested;
  excluded.erase(node);
  excluded.erase(dst);
  return shortest_path(topo, node, dst, excluded);
}

struct SignatureActions {
  bool installed = false;
  std::vector<NodeId> forward_to;
  std::vector<NodeId> quarantine;
};

/// Install the signature locally and decide where it travels next. Neighbors
/// that relayed matching packets get the alert; neighbors that originated
/// them are quarantined. A repeated alert for an installed rule is a no-op.
inline SignatureActions handle_signature_alert(DefenseState& state, const NeighborForwardLog& log,
                                               NodeId self, NodeId alert_origin, const SignatureAlert& alert,
                                               SimTime now) {
  SignatureActions out;
  if (state.has_rule(alert.signature)) return out;
  state.rules.emplace(alert.signature, DropRule{alert.signature, now, alert_origin});
  out.installed = true;

  auto& pushed = state.forwarded_to[alert.signature];
  for (const auto& [nb, count] : log.matches(alert.signature)) {
    if (nb == self || nb == alert_origin) continue;
    if (count.originated > 0) {
      if (state.quarantined.insert(nb).second) out.quarantine.push_back(nb);
    } else {
      out.forward_to.push_back(nb);
      pushed.push_back(nb);
    }
  }
  return out;
}

/// Remove a lifted rule; returns the neighbors the lift must be relayed to.
inline std::vector<NodeId> lift_signature(DefenseState& state, const AttackSignature& sig) {
  if (state.rules.erase(sig) == 0) return {};
  std::vector<NodeId> next;
  if (auto it = state.forwarded_to.find(sig); it != state.forwarded_to.end()) {
    next = std::move(it->second);
    state.forwarded_to.erase(it);
  }
  return next;
}

}  // namespace antguard
