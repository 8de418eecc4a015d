#pragma once

// Response: turns a verdict into drop/keep actions for the held originals and
// decides when dropping at the victim can be lifted.

#include <optional>
#include <set>

#include "antguard/core/types.hpp"
#include "antguard/filter/dpa.hpp"
#include "antguard/filter/tfa.hpp"

namespace antguard {

struct ResponseActions {
  PacketIdSet drop;
  PacketIdSet keep;
  std::optional<AttackSignature> signature;
};

inline ResponseActions response_apply(DpaSession& session, const TfaResult& result,
                                      const std::optional<AttackSignature>& signature) {
  if (session.state != SessionState::analyzing) throw ContractViolation("response_apply: session not analyzing");
  ResponseActions out{result.drop_set(), result.keep_set(), signature};
  session.state = SessionState::closed;
  return out;
}

struct ResponseParams {
  int lift_windows = 2;  // H
};

struct ResponseState {
  std::set<AttackSignature> active_rules;
  int below_threshold_streak = 0;
  bool lift_pending = false;

  bool active() const { return !active_rules.empty(); }
};

/// Track consecutive quiet windows at the victim. Once the streak reaches H
/// the state is marked `lift_pending`; the caller lifts `active_rules` and
/// resets the state.
inline ResponseState response_lift(ResponseState s, std::int64_t window_arrivals, std::int64_t threshold,
                                   const ResponseParams& params) {
  if (window_arrivals <= threshold)
    ++s.below_threshold_streak;
  else
    s.below_threshold_streak = 0;
  s.lift_pending = s.below_threshold_streak >= params.lift_windows;
  return s;
}

}  // namespace antguard
