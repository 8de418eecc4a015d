#pragma once

// Static topology, minimum-hop routing and nearest-adjunct assignment.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "antguard/core/types.hpp"

namespace antguard {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind : std::uint8_t { sensor, adjunct, sink, attacker };

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::sensor: return "sensor";
    case NodeKind::adjunct: return "adjunct";
    case NodeKind::sink: return "sink";
    case NodeKind::attacker: return "attacker";
  }
  return "?";
}

inline std::optional<NodeKind> parse_node_kind(std::string_view s) {
  if (s == "sensor") return NodeKind::sensor;
  if (s == "adjunct") return NodeKind::adjunct;
  if (s == "sink") return NodeKind::sink;
  if (s == "attacker") return NodeKind::attacker;
  return std::nullopt;
}

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

struct NodeDescriptor {
  NodeId id;
  NodeKind kind = NodeKind::sensor;
  int buffer_capacity = 64;
  std::optional<Position> position;
  bool operator==(const NodeDescriptor&) const = default;
};

struct LinkDescriptor {
  NodeId a;
  NodeId b;
  double latency = 0.1;
  bool operator==(const LinkDescriptor&) const = default;
};

struct TopologyConfig {
  std::vector<NodeDescriptor> nodes;
  std::vector<LinkDescriptor> links;
  bool operator==(const TopologyConfig&) const = default;
};

struct Neighbor {
  NodeId id;
  double latency;
};

using Path = std::vector<NodeId>;

/// Validated, immutable topology. Node ids are dense: 0 .. size()-1.
class Topology {
 public:
  std::size_t size() const { return nodes_.size(); }
  const NodeDescriptor& node(NodeId id) const { return nodes_.at(id.value); }
  const std::vector<NodeDescriptor>& nodes() const { return nodes_; }
  const std::vector<Neighbor>& neighbors(NodeId id) const { return adj_.at(id.value); }

  bool adjacent(NodeId a, NodeId b) const { return latency(a, b).has_value(); }

  std::optional<double> latency(NodeId a, NodeId b) const {
    for (const auto& n : adj_.at(a.value))
      if (n.id == b) return n.latency;
    return std::nullopt;
  }

  /// Next hop on the default route, absent when from == to.
  std::optional<NodeId> next_hop(NodeId from, NodeId to) const {
    const auto h = next_hop_.at(from.value).at(to.value);
    if (h == kNone) return std::nullopt;
    return NodeId(h);
  }

  std::optional<NodeId> nearest_adjunct(NodeId id) const {
    const auto a = nearest_adjunct_.at(id.value);
    if (a == kNone) return std::nullopt;
    return NodeId(a);
  }

  int hop_distance(NodeId a, NodeId b) const { return dist_.at(a.value).at(b.value); }

  /// Sum of link latencies along a path.
  double path_latency(const Path& p) const {
    double total = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) total += *latency(p[i - 1], p[i]);
    return total;
  }

  const TopologyConfig& config() const { return config_; }

 private:
  friend Topology build_topology(const TopologyConfig&);
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  TopologyConfig config_;
  std::vector<NodeDescriptor> nodes_;
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<std::vector<std::uint32_t>> next_hop_;
  std::vector<std::vector<int>> dist_;
  std::vector<std::uint32_t> nearest_adjunct_;
};

namespace detail {

// Hop distances from `root` to every node, skipping `excluded`; -1 if unreachable.
inline std::vector<int> bfs_distances(const std::vector<std::vector<Neighbor>>& adj, NodeId root,
                                      const std::set<NodeId>& excluded) {
  std::vector<int> dist(adj.size(), -1);
  if (excluded.count(root)) return dist;
  std::vector<std::uint32_t> frontier{root.value};
  dist[root.value] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const auto u = frontier[head];
    for (const auto& n : adj[u]) {
      if (dist[n.id.value] >= 0 || excluded.count(n.id)) continue;
      dist[n.id.value] = dist[u] + 1;
      frontier.push_back(n.id.value);
    }
  }
  return dist;
}

// Walk from src toward the root of `dist_to_dst`, always taking the lowest-id
// neighbor one hop closer. This yields the lexicographically smallest
// minimum-hop sequence.
inline Path greedy_descent(const std::vector<std::vector<Neighbor>>& adj,
                           const std::vector<int>& dist_to_dst, NodeId src) {
  Path path{src};
  NodeId u = src;
  while (dist_to_dst[u.value] > 0) {
    for (const auto& n : adj[u.value]) {  // neighbor lists are sorted by id
      if (dist_to_dst[n.id.value] == dist_to_dst[u.value] - 1) {
        u = n.id;
        break;
      }
    }
    path.push_back(u);
  }
  return path;
}

}  // namespace detail

inline Topology build_topology(const TopologyConfig& config) {
  const auto n = config.nodes.size();
  if (n < 2) throw ConfigError("topology: at least 2 nodes required");

  Topology t;
  t.config_ = config;
  t.nodes_.resize(n);
  std::vector<bool> seen(n, false);
  for (const auto& d : config.nodes) {
    if (d.id.value >= n || seen[d.id.value])
      throw ConfigError("topology: node ids must be unique and dense in 0.." + std::to_string(n - 1) +
                        " (offending id " + to_string(d.id) + ")");
    if (d.buffer_capacity < 1)
      throw ConfigError("topology: node " + to_string(d.id) + " buffer_capacity must be >= 1");
    seen[d.id.value] = true;
    t.nodes_[d.id.value] = d;
  }

  t.adj_.assign(n, {});
  std::set<std::pair<NodeId, NodeId>> link_set;
  for (const auto& l : config.links) {
    if (l.a.value >= n || l.b.value >= n)
      throw ConfigError("topology: link references unknown node " + to_string(l.a) + "-" + to_string(l.b));
    if (l.a == l.b) throw ConfigError("topology: self-link at node " + to_string(l.a));
    if (!(l.latency >= 0.0)) throw ConfigError("topology: link latency must be non-negative");
    const auto key = std::minmax(l.a, l.b);
    if (!link_set.insert(key).second)
      throw ConfigError("topology: duplicate link " + to_string(l.a) + "-" + to_string(l.b));
    t.adj_[l.a.value].push_back({l.b, l.latency});
    t.adj_[l.b.value].push_back({l.a, l.latency});
  }
  for (auto& list : t.adj_)
    std::sort(list.begin(), list.end(), [](const Neighbor& x, const Neighbor& y) { return x.id < y.id; });

  const std::set<NodeId> none;
  t.dist_.resize(n);
  for (std::uint32_t d = 0; d < n; ++d) t.dist_[d] = detail::bfs_distances(t.adj_, NodeId(d), none);
  for (std::uint32_t v = 0; v < n; ++v)
    if (t.dist_[0][v] < 0) throw ConfigError("topology: graph is disconnected (node " + std::to_string(v) + " unreachable)");

  bool any_adjunct = false;
  for (const auto& d : t.nodes_) any_adjunct |= d.kind == NodeKind::adjunct;
  if (!any_adjunct) throw ConfigError("topology: no adjunct node");

  t.next_hop_.assign(n, std::vector<std::uint32_t>(n, Topology::kNone));
  for (std::uint32_t dst = 0; dst < n; ++dst) {
    const auto& dist = t.dist_[dst];
    for (std::uint32_t u = 0; u < n; ++u) {
      if (u == dst) continue;
      for (const auto& nb : t.adj_[u]) {
        if (dist[nb.id.value] == dist[u] - 1) {
          t.next_hop_[u][dst] = nb.id.value;
          break;
        }
      }
    }
  }

  t.nearest_adjunct_.assign(n, Topology::kNone);
  for (std::uint32_t u = 0; u < n; ++u) {
    int best = std::numeric_limits<int>::max();
    for (std::uint32_t a = 0; a < n; ++a) {
      if (t.nodes_[a].kind != NodeKind::adjunct || a == u) continue;
      if (t.dist_[u][a] < best) {  // strict: ties keep the lower id
        best = t.dist_[u][a];
        t.nearest_adjunct_[u] = a;
      }
    }
  }
  return t;
}

/// Minimum-hop path avoiding `excluded`, lexicographically smallest under ties.
inline std::optional<Path> shortest_path(const Topology& topo, NodeId src, NodeId dst,
                                         const std::set<NodeId>& excluded) {
  if (src == dst) throw ContractViolation("shortest_path: src == dst");
  if (excluded.count(src) || excluded.count(dst))
    throw ContractViolation("shortest_path: endpoint is excluded");
  std::vector<std::vector<Neighbor>> adj(topo.size());
  for (std::uint32_t u = 0; u < topo.size(); ++u) adj[u] = topo.neighbors(NodeId(u));
  const auto dist = detail::bfs_distances(adj, dst, excluded);
  if (dist[src.value] < 0) return std::nullopt;
  return detail::greedy_descent(adj, dist, src);
}

}  // namespace antguard
