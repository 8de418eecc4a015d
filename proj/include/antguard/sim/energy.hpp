#pragma once

#include <cstdint>
#include <vector>

namespace antguard {

struct EnergyCosts {
  double tx = 1.0;
  double rx = 0.5;
  double inspect = 0.1;
  double drop = 0.05;
  bool operator==(const EnergyCosts&) const = default;
};

struct EnergyCounters {
  std::uint64_t tx = 0;
  std::uint64_t rx = 0;
  std::uint64_t inspect = 0;
  std::uint64_t drop = 0;
  bool operator==(const EnergyCounters&) const = default;

  double total(const EnergyCosts& c) const {
    return c.tx * static_cast<double>(tx) + c.rx * static_cast<double>(rx) +
           c.inspect * static_cast<double>(inspect) + c.drop * static_cast<double>(drop);
  }
};

/// Per-node action counters. Totals are always recomputed from the counts,
/// so the ledger cannot drift from the cost vector.
class EnergyLedger {
 public:
  EnergyLedger(std::size_t nodes, EnergyCosts costs) : per_node_(nodes), costs_(costs) {}

  void charge_tx(std::uint32_t node, std::uint64_t n = 1) { per_node_.at(node).tx += n; }
  void charge_rx(std::uint32_t node, std::uint64_t n = 1) { per_node_.at(node).rx += n; }
  void charge_inspect(std::uint32_t node, std::uint64_t n = 1) { per_node_.at(node).inspect += n; }
  void charge_drop(std::uint32_t node, std::uint64_t n = 1) { per_node_.at(node).drop += n; }

  const EnergyCounters& counters(std::uint32_t node) const { return per_node_.at(node); }
  double node_total(std::uint32_t node) const { return per_node_.at(node).total(costs_); }

  double total() const {
    double sum = 0.0;
    for (const auto& c : per_node_) sum += c.total(costs_);
    return sum;
  }

  std::size_t size() const { return per_node_.size(); }
  const EnergyCosts& costs() const { return costs_; }

 private:
  std::vector<EnergyCounters> per_node_;
  EnergyCosts costs_;
};

}  // namespace antguard
