#pragma once

// Grid topology generator for larger randomized scenarios.

#include <algorithm>
#include <cstdlib>
#include <cstdint>
#include <set>
#include <vector>

#include "antguard/scenario/config.hpp"
#include "antguard/sim/rng.hpp"

namespace antguard {

struct GridOptions {
  int rows = 5;
  int cols = 10;
  int buffer_capacity = 64;
  double latency = 0.1;
  int attackers = 3;
  double attack_rate = 20.0;
  double attack_start = 15.0;
  int legit_flows = 8;
  double legit_rate = 1.0;
  double duration = 60.0;
  Bytes pattern = "XFLOODX";
};

/// Row-major grid with 4-neighbor links, one adjunct per quadrant, a victim
/// near the center and attackers placed at random at least two hops away
/// from it. Placement depends only on `seed`.
inline ScenarioConfig make_grid_scenario(const GridOptions& o, std::uint64_t seed) {
  if (o.rows < 3 || o.cols < 3) throw ConfigError("grid: at least 3x3 required");
  ScenarioConfig cfg;
  const auto id = [&](int r, int c) { return NodeId(static_cast<std::uint32_t>(r * o.cols + c)); };
  const int n = o.rows * o.cols;

  for (int r = 0; r < o.rows; ++r)
    for (int c = 0; c < o.cols; ++c)
      cfg.topology.nodes.push_back(
          {id(r, c), NodeKind::sensor, o.buffer_capacity, Position{static_cast<double>(c), static_cast<double>(r)}});
  for (int r = 0; r < o.rows; ++r)
    for (int c = 0; c < o.cols; ++c) {
      if (c + 1 < o.cols) cfg.topology.links.push_back({id(r, c), id(r, c + 1), o.latency});
      if (r + 1 < o.rows) cfg.topology.links.push_back({id(r, c), id(r + 1, c), o.latency});
    }

  const int r1 = o.rows / 4, r2 = o.rows - 1 - o.rows / 4;
  const int c1 = o.cols / 4, c2 = o.cols - 1 - o.cols / 4;
  std::set<NodeId> reserved;
  for (auto a : {id(r1, c1), id(r1, c2), id(r2, c1), id(r2, c2)}) {
    cfg.topology.nodes[a.value].kind = NodeKind::adjunct;
    reserved.insert(a);
  }
  const NodeId victim = id(o.rows / 2, o.cols / 2);
  reserved.insert(victim);

  auto rng = Rng::stream(seed, 42);
  const auto hops = [&](NodeId a, NodeId b) {
    const int ar = static_cast<int>(a.value) / o.cols, ac = static_cast<int>(a.value) % o.cols;
    const int br = static_cast<int>(b.value) / o.cols, bc = static_cast<int>(b.value) % o.cols;
    return std::abs(ar - br) + std::abs(ac - bc);
  };

  std::vector<NodeId> candidates;
  for (int i = 0; i < n; ++i) {
    const NodeId v(static_cast<std::uint32_t>(i));
    if (!reserved.count(v) && hops(v, victim) >= 2) candidates.push_back(v);
  }
  AttackSpec attack;
  attack.victim = victim;
  attack.rate = o.attack_rate;
  attack.pattern = o.pattern;
  attack.start = o.attack_start;
  for (int k = 0; k < o.attackers && !candidates.empty(); ++k) {
    const auto pick = static_cast<std::size_t>(rng.below(candidates.size()));
    const NodeId a = candidates[pick];
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
    cfg.topology.nodes[a.value].kind = NodeKind::attacker;
    attack.attackers.push_back(a);
    reserved.insert(a);
  }
  std::sort(attack.attackers.begin(), attack.attackers.end());
  cfg.attacks.push_back(attack);

  std::vector<NodeId> sources;
  for (int i = 0; i < n; ++i) {
    const NodeId v(static_cast<std::uint32_t>(i));
    if (!reserved.count(v)) sources.push_back(v);
  }
  for (int k = 0; k < o.legit_flows; ++k) {
    TrafficSourceSpec s;
    s.src = sources[static_cast<std::size_t>(rng.below(sources.size()))];
    // Half the flows target the victim, the rest a random sensor.
    do {
      s.dst = (k % 2 == 0) ? victim : sources[static_cast<std::size_t>(rng.below(sources.size()))];
    } while (s.dst == s.src);
    s.model = TrafficModel::poisson;
    s.rate = o.legit_rate;
    cfg.legit.push_back(s);
  }

  cfg.patterns = {o.pattern};
  cfg.params.duration = o.duration;
  cfg.params.seed = seed;
  validate_scenario(cfg);
  return cfg;
}

}  // namespace antguard
