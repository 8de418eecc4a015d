#pragma once

// Traffic filtering ant: stateful and stateless signature analysis over a
// sample batch. A packet is dropped only when both analyses flag it.

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "antguard/core/types.hpp"

namespace antguard {

struct TfaParams {
  double epsilon = 0.2;
  double theta = 0.5;
};

struct StatefulResult {
  PacketIdSet flagged;
  std::optional<NodeId> modal_dst;
};

struct StatelessResult {
  PacketIdSet flagged;
  std::optional<Bytes> matched_pattern;
};

struct TfaResult {
  PacketIdSet stateful_flagged;
  PacketIdSet stateless_flagged;
  std::vector<FilterVerdict> verdicts;
  std::optional<NodeId> modal_dst;
  std::optional<Bytes> matched_pattern;

  PacketIdSet drop_set() const {
    PacketIdSet out;
    for (const auto& v : verdicts)
      if (v.drop()) out.insert(v.packet_id());
    return out;
  }

  PacketIdSet keep_set() const {
    PacketIdSet out;
    for (const auto& v : verdicts)
      if (!v.drop()) out.insert(v.packet_id());
    return out;
  }
};

/// Flags the packets heading to the dominant destination, but only when the
/// victim's reliability indicates flooding (r > 1 + epsilon).
inline StatefulResult tfa_stateful(const SampleBatch& batch, double r, const TfaParams& params) {
  if (batch.packets.empty()) throw ContractViolation("tfa_stateful: empty batch");
  StatefulResult out;
  if (r <= 1.0 + params.epsilon) return out;

  std::map<NodeId, std::size_t> histogram;
  for (const auto& p : batch.packets) ++histogram[PacketView(p).dst()];
  auto modal = histogram.begin();
  for (auto it = histogram.begin(); it != histogram.end(); ++it)
    if (it->second > modal->second) modal = it;  // map order keeps the lower id on ties

  const double share = static_cast<double>(modal->second) / static_cast<double>(batch.packets.size());
  if (share < params.theta) return out;
  out.modal_dst = modal->first;
  for (const auto& p : batch.packets)
    if (PacketView(p).dst() == modal->first) out.flagged.insert(p.packet_id);
  return out;
}

/// Flags packets whose payload contains any dictionary pattern. The reported
/// pattern is the one found in the most packets, lexicographically smallest
/// on ties.
inline StatelessResult tfa_stateless(const SampleBatch& batch, std::span<const Bytes> patterns) {
  StatelessResult out;
  const std::set<Bytes> dict(patterns.begin(), patterns.end());
  std::map<Bytes, std::size_t> hits;
  for (const auto& p : batch.packets) {
    const PacketView view(p);
    bool any = false;
    for (const auto& pat : dict) {
      if (pattern_contained(view.payload(), pat)) {
        ++hits[pat];
        any = true;
      }
    }
    if (any) out.flagged.insert(view.id());
  }
  std::size_t best = 0;
  for (const auto& [pat, n] : hits) {
    if (n > best) {
      best = n;
      out.matched_pattern = pat;
    }
  }
  return out;
}

inline TfaResult tfa_verdicts(const StatefulResult& stateful, const StatelessResult& stateless,
                              const SampleBatch& batch) {
  TfaResult out;
  out.stateful_flagged = stateful.flagged;
  out.stateless_flagged = stateless.flagged;
  out.modal_dst = stateful.modal_dst;
  out.matched_pattern = stateless.matched_pattern;
  out.verdicts.reserve(batch.packets.size());
  for (const auto& p : batch.packets)
    out.verdicts.emplace_back(p.packet_id, stateful.flagged.count(p.packet_id) != 0,
                              stateless.flagged.count(p.packet_id) != 0);
  return out;
}

inline TfaResult tfa_analyze(const SampleBatch& batch, double r, std::span<const Bytes> patterns,
                             const TfaParams& params) {
  return tfa_verdicts(tfa_stateful(batch, r, params), tfa_stateless(batch, patterns), batch);
}

inline std::optional<AttackSignature> derive_signature(const TfaResult& result) {
  if (result.drop_set().empty()) return std::nullopt;
  // A dropped packet was flagged by both analyses, so both fields are set.
  assert(result.modal_dst && result.matched_pattern);
  if (!result.modal_dst || !result.matched_pattern)
    throw std::logic_error("derive_signature: drop set without modal destination or pattern");
  return AttackSignature(*result.modal_dst, *result.matched_pattern);
}

}  // namespace antguard
