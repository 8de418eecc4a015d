#pragma once

// DDoS preventing ant: per-victim analysis sessions on the adjunct node and
// the three-way comparison of current traffic against the alert-time count.

#include <algorithm>
#include <cstdint>

#include "antguard/core/types.hpp"
#include "antguard/sim/rng.hpp"

namespace antguard {

enum class SessionState : std::uint8_t { comparing, waiting, analyzing, closed };

struct DpaSession {
  NodeId victim;
  SampleBatch sample;
  std::int64_t alert_count = 0;
  std::int64_t current_count = 0;
  double reliability = 1.0;
  int retries = 0;
  SessionState state = SessionState::comparing;
  std::uint64_t serial = 0;

  static DpaSession open(const AlertMessage& alert, std::uint64_t serial) {
    const auto& d = std::get<DetectAlert>(alert.body);
    DpaSession s;
    s.victim = alert.origin;
    s.sample = d.sample;
    s.alert_count = d.sample.alert_count;
    s.current_count = d.sample.alert_count;
    s.reliability = d.reliability;
    s.serial = serial;
    return s;
  }
};

struct DpaParams {
  int max_retries = 3;  // K
  double window = 1.0;
};

struct DpaOutcome {
  enum class Kind : std::uint8_t { wait, no_attack, analyze };
  Kind kind;
  double delay = 0.0;  // sim time, only for wait

  bool operator==(const DpaOutcome&) const = default;
};

/// Half-width of the band in which counts are treated as equal.
inline std::int64_t equality_band(std::int64_t alert_count) {
  // max(1, ceil(0.05 * alert_count)), in integers
  return std::max<std::int64_t>(1, (alert_count + 19) / 20);
}

/// Compare the victim's latest full-window count with the alert-time count
/// and advance the session accordingly. A wait draws a delay uniform in
/// [0.5, 1.5] windows; after K waits the equal band escalates to analysis.
inline DpaOutcome dpa_compare(std::int64_t current_count, DpaSession& session, const DpaParams& params,
                              Rng& rng) {
  if (current_count < 0 || session.alert_count < 0) throw ContractViolation("dpa_compare: negative count");
  if (session.state != SessionState::comparing) throw ContractViolation("dpa_compare: session not comparing");
  const auto delta = equality_band(session.alert_count);

  if (current_count < session.alert_count - delta) {
    session.state = SessionState::closed;
    return {DpaOutcome::Kind::no_attack};
  }
  if (current_count > session.alert_count + delta || session.retries >= params.max_retries) {
    session.state = SessionState::analyzing;
    return {DpaOutcome::Kind::analyze};
  }
  ++session.retries;
  session.state = SessionState::waiting;
  return {DpaOutcome::Kind::wait, rng.uniform(0.5, 1.5) * params.window};
}

}  // namespace antguard
