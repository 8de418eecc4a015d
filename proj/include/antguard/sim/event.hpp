#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "antguard/core/types.hpp"

namespace antguard {

enum class EventKind : std::uint8_t { packet_send, packet_arrive, window_tick, timer_expiry, alert_deliver };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::packet_send: return "PacketSend";
    case EventKind::packet_arrive: return "PacketArrive";
    case EventKind::window_tick: return "WindowTick";
    case EventKind::timer_expiry: return "TimerExpiry";
    case EventKind::alert_deliver: return "AlertDeliver";
  }
  return "?";
}

/// Min-heap of events ordered by (time, seq). Sequence numbers are handed
/// out at push time, so equal-time events run in scheduling order.
template <typename Payload>
class EventQueue {
 public:
  struct Entry {
    SimTime time;
    std::uint64_t seq;
    EventKind kind;
    Payload payload;
  };

  std::uint64_t push(SimTime time, EventKind kind, Payload payload) {
    const auto seq = next_seq_++;
    heap_.push_back({time, seq, kind, std::move(payload)});
    std::push_heap(heap_.begin(), heap_.end(), later);
    return seq;
  }

  Entry pop() {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    return e;
  }

  const Entry& top() const { return heap_.front(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

  /// Visit pending entries in unspecified order.
  template <typename F>
  void for_each(F&& f) const {
    for (const auto& e : heap_) f(e);
  }

 private:
  static bool later(const Entry& a, const Entry& b) {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }

  std::vector<Entry> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace antguard
