#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "antguard/core/types.hpp"

namespace antguard {

/// What a node remembers about packets received from each neighbor over the
/// last L windows: enough to evaluate a signature after the fact and to tell
/// whether the neighbor originated a packet or relayed it.
class NeighborForwardLog {
 public:
  struct Entry {
    NodeId dst;
    Bytes payload;
    bool originated = false;  // hop trace had length 1 when it reached us
  };

  struct MatchCount {
    std::int64_t originated = 0;
    std::int64_t relayed = 0;
    std::int64_t total() const { return originated + relayed; }
  };

  explicit NeighborForwardLog(int windows = 5, std::size_t per_window_cap = 256)
      : windows_(windows < 1 ? 1 : windows), cap_(per_window_cap) {}

  void record(NodeId from, const PacketView& p) {
    auto& ring = rings_[from];
    if (ring.empty()) ring.resize(static_cast<std::size_t>(windows_));
    auto& slot = ring[current_];
    if (slot.size() >= cap_) return;
    slot.push_back({p.dst(), Bytes(p.payload()), p.hop_trace().size() == 1});
  }

  /// Start a new window, evicting the oldest one.
  void advance() {
    current_ = (current_ + 1) % static_cast<std::size_t>(windows_);
    for (auto& [_, ring] : rings_)
      if (!ring.empty()) ring[current_].clear();
  }

  /// Per-neighbor counts of logged packets matching `sig`; neighbors with no
  /// match are omitted.
  std::map<NodeId, MatchCount> matches(const AttackSignature& sig) const {
    std::map<NodeId, MatchCount> out;
    for (const auto& [nb, ring] : rings_) {
      MatchCount mc;
      for (const auto& slot : ring)
        for (const auto& e : slot)
          if (e.dst == sig.dst() && pattern_contained(e.payload, sig.pattern()))
            ++(e.originated ? mc.originated : mc.relayed);
      if (mc.total() > 0) out.emplace(nb, mc);
    }
    return out;
  }

  int windows() const { return windows_; }

 private:
  int windows_;
  std::size_t cap_;
  std::size_t current_ = 0;
  std::map<NodeId, std::vector<std::vector<Entry>>> rings_;
};

}  // namespace antguard
