#pragma once

// Compiles traffic and attack specs into a time-ordered injection schedule.

#include <algorithm>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "antguard/core/types.hpp"
#include "antguard/scenario/config.hpp"
#include "antguard/sim/rng.hpp"

namespace antguard {

struct ScheduledSend {
  SimTime time = 0.0;
  Packet packet;
};

namespace detail {

inline bool contains_any(std::string_view payload, std::span<const Bytes> patterns) {
  for (const auto& p : patterns)
    if (pattern_contained(payload, p)) return true;
  return false;
}

inline Bytes random_bytes(Rng& rng, std::size_t n) {
  Bytes b(n, '\0');
  for (auto& c : b) c = static_cast<char>(rng.below(256));
  return b;
}

/// Random payload that contains no dictionary pattern.
inline Bytes clean_payload(Rng& rng, std::size_t n, std::span<const Bytes> patterns) {
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    auto b = random_bytes(rng, n);
    if (!contains_any(b, patterns)) return b;
  }
  throw ConfigError("payload generator: cannot build a pattern-free payload of " + std::to_string(n) + " bytes");
}

inline Bytes attack_payload(Rng& rng, std::size_t n, const Bytes& pattern) {
  const auto len = std::max(n, pattern.size());
  auto b = random_bytes(rng, len);
  const auto offset = static_cast<std::size_t>(rng.below(len - pattern.size() + 1));
  std::copy(pattern.begin(), pattern.end(), b.begin() + static_cast<std::ptrdiff_t>(offset));
  return b;
}

// Send times for one source over [start, stop).
inline std::vector<SimTime> send_times(TrafficModel model, double rate, double window, double start, double stop,
                                       Rng& rng) {
  std::vector<SimTime> out;
  const double interval = window / rate;
  if (model == TrafficModel::cbr) {
    for (std::uint64_t k = 0;; ++k) {
      const double t = start + static_cast<double>(k) * interval;
      if (t >= stop) break;
      out.push_back(t);
    }
  } else {
    for (double t = start + rng.exponential(interval); t < stop; t += rng.exponential(interval)) out.push_back(t);
  }
  return out;
}

}  // namespace detail

/// Deterministic schedule for (config, seed). Packet ids follow schedule
/// order; ties in time are broken by source declaration order.
inline std::vector<ScheduledSend> generate_traffic(const ScenarioConfig& config, std::uint64_t seed) {
  const auto& p = config.params;
  const std::span<const Bytes> dict(config.patterns);

  struct Pending {
    SimTime time;
    std::size_t source;
    std::size_t k;
    Packet packet;
  };
  std::vector<Pending> all;

  std::size_t source = 0;
  for (const auto& s : config.legit) {
    auto rng = Rng::stream(seed, 1000 + source);
    const double stop = std::min(s.stop.value_or(p.duration), p.duration);
    const auto times = detail::send_times(s.model, s.rate, p.window, s.start, stop, rng);
    for (std::size_t k = 0; k < times.size(); ++k) {
      Packet pkt;
      pkt.src = s.src;
      pkt.dst = s.dst;
      pkt.payload = detail::clean_payload(rng, static_cast<std::size_t>(s.payload), dict);
      pkt.created_at = times[k];
      pkt.hop_trace = {s.src};
      pkt.ground_truth = TrafficClass::legit;
      all.push_back({times[k], source, k, std::move(pkt)});
    }
    ++source;
  }

  for (const auto& a : config.attacks) {
    for (const auto attacker : a.attackers) {
      auto rng = Rng::stream(seed, 1000 + source);
      const double stop = std::min(a.stop.value_or(p.duration), p.duration);
      const auto times = detail::send_times(TrafficModel::cbr, a.rate, p.window, a.start, stop, rng);
      for (std::size_t k = 0; k < times.size(); ++k) {
        Packet pkt;
        pkt.src = attacker;
        pkt.dst = a.victim;
        pkt.payload = a.stealth ? detail::clean_payload(rng, static_cast<std::size_t>(a.payload), dict)
                                : detail::attack_payload(rng, static_cast<std::size_t>(a.payload), a.pattern);
        pkt.created_at = times[k];
        pkt.hop_trace = {attacker};
        pkt.ground_truth = TrafficClass::attack;
        all.push_back({times[k], source, k, std::move(pkt)});
      }
      ++source;
    }
  }

  std::stable_sort(all.begin(), all.end(), [](const Pending& x, const Pending& y) {
    return std::tie(x.time, x.source, x.k) < std::tie(y.time, y.source, y.k);
  });

  std::vector<ScheduledSend> out;
  out.reserve(all.size());
  PacketId next_id = 0;
  for (auto& e : all) {
    e.packet.packet_id = next_id++;
    out.push_back({e.time, std::move(e.packet)});
  }
  return out;
}

}  // namespace antguard
