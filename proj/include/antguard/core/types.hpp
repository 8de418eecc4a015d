#pragma once

// Shared vocabulary: nodes, packets, signatures, alerts and verdicts.
//
// Payloads and patterns are opaque byte strings held in std::string. Nothing
// here interprets them as text.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace antguard {

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct NodeId {
  std::uint32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}

  constexpr auto operator<=>(const NodeId&) const = default;
};

using PacketId = std::uint64_t;
using SimTime = double;
using Bytes = std::string;

enum class TrafficClass : std::uint8_t { legit, attack };

/// A unit of simulated traffic.
///
/// `ground_truth` is bookkeeping for metrics. Detection and filtering code
/// receives packets through `PacketView`, which does not expose it.
struct Packet {
  PacketId packet_id = 0;
  NodeId src;
  NodeId dst;
  Bytes payload;
  SimTime created_at = 0.0;
  std::vector<NodeId> hop_trace;
  TrafficClass ground_truth = TrafficClass::legit;
  // Explicit detour, consumed hop by hop, set when a kept packet is rerouted.
  std::vector<NodeId> detour;
};

/// Read-only projection of a packet as agents are allowed to see it.
class PacketView {
 public:
  explicit PacketView(const Packet& p) : p_(&p) {}

  PacketId id() const { return p_->packet_id; }
  NodeId src() const { return p_->src; }
  NodeId dst() const { return p_->dst; }
  std::string_view payload() const { return p_->payload; }
  const std::vector<NodeId>& hop_trace() const { return p_->hop_trace; }

 private:
  const Packet* p_;
};

/// True iff `pattern` occurs as a contiguous byte run inside `payload`.
inline bool pattern_contained(std::string_view payload, std::string_view pattern) {
  if (pattern.empty()) throw ContractViolation("pattern_contained: empty pattern");
  return payload.find(pattern) != std::string_view::npos;
}

class AttackSignature {
 public:
  AttackSignature(NodeId dst, Bytes pattern) : dst_(dst), pattern_(std::move(pattern)) {
    if (pattern_.empty()) throw ContractViolation("AttackSignature: empty pattern");
  }

  NodeId dst() const { return dst_; }
  const Bytes& pattern() const { return pattern_; }

  auto operator<=>(const AttackSignature&) const = default;
  bool operator==(const AttackSignature&) const = default;

 private:
  NodeId dst_;
  Bytes pattern_;
};

inline bool signature_matches(const PacketView& packet, const AttackSignature& sig) {
  return packet.dst() == sig.dst() && pattern_contained(packet.payload(), sig.pattern());
}

inline bool signature_matches(const Packet& packet, const AttackSignature& sig) {
  return signature_matches(PacketView(packet), sig);
}

struct DropRule {
  AttackSignature signature;
  SimTime installed_at = 0.0;
  NodeId installed_by;
};

struct SampleBatch {
  std::vector<Packet> packets;
  std::int64_t alert_count = 0;
  SimTime sampled_at = 0.0;
  NodeId victim_node;
};

struct DetectAlert {
  SampleBatch sample;
  double reliability = 1.0;
};

struct SignatureAlert {
  AttackSignature signature;
  int hop_count = 0;
};

struct AlertMessage {
  NodeId origin;
  std::variant<DetectAlert, SignatureAlert> body;

  bool is_detect() const { return std::holds_alternative<DetectAlert>(body); }
  bool is_signature() const { return std::holds_alternative<SignatureAlert>(body); }
};

/// Per-packet outcome of sample analysis. `drop` is derived, never stored.
class FilterVerdict {
 public:
  FilterVerdict(PacketId id, bool stateful, bool stateless)
      : packet_id_(id), stateful_(stateful), stateless_(stateless) {}

  PacketId packet_id() const { return packet_id_; }
  bool stateful_flag() const { return stateful_; }
  bool stateless_flag() const { return stateless_; }
  bool drop() const { return stateful_ && stateless_; }

  bool operator==(const FilterVerdict&) const = default;

 private:
  PacketId packet_id_;
  bool stateful_;
  bool stateless_;
};

using PacketIdSet = std::set<PacketId>;

inline std::string to_string(NodeId id) { return std::to_string(id.value); }

}  // namespace antguard

template <>
struct std::hash<antguard::NodeId> {
  std::size_t operator()(const antguard::NodeId& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
