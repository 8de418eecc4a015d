#pragma once

// Per-node reliability tracking and the detection trigger.
//
// Reliability is the ratio of the last completed window's arrivals to a
// baseline learned during warmup. r == 1 is the normal state; the trigger
// additionally requires the buffer to sit above its threshold.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "antguard/core/types.hpp"

namespace antguard {

struct ReliabilityParams {
  double epsilon = 0.2;
  int warmup_windows = 10;
  double threshold_fraction = 0.8;
};

struct ReliabilityState {
  double baseline = 1.0;
  std::int64_t window_count = 0;  // arrivals in the last completed window
  double r = 1.0;
  int warmup_remaining = 10;
  double warmup_sum = 0.0;
  int warmup_done = 0;

  static ReliabilityState fresh(const ReliabilityParams& p) {
    ReliabilityState s;
    s.warmup_remaining = p.warmup_windows;
    return s;
  }

  bool in_warmup() const { return warmup_remaining > 0; }
};

/// Fold one completed window into the state. Called once per window tick.
inline ReliabilityState update_window(ReliabilityState s, std::int64_t arrivals) {
  if (arrivals < 0) throw ContractViolation("update_window: negative arrivals");
  if (s.warmup_remaining > 0) {
    s.warmup_sum += static_cast<double>(arrivals);
    ++s.warmup_done;
    --s.warmup_remaining;
    s.baseline = std::max(1.0, s.warmup_sum / s.warmup_done);
  }
  s.window_count = arrivals;
  s.r = static_cast<double>(arrivals) / s.baseline;
  return s;
}

inline int buffer_threshold(int capacity, double fraction) {
  return static_cast<int>(std::floor(fraction * capacity));
}

inline bool check_trigger(const ReliabilityState& s, int occupancy, int capacity,
                          const ReliabilityParams& p) {
  if (s.in_warmup()) return false;
  return std::abs(s.r - 1.0) > p.epsilon && occupancy > buffer_threshold(capacity, p.threshold_fraction);
}

}  // namespace antguard
