#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "test_util.hpp"

namespace antguard {
namespace {

using testing::make_packet;
using testing::N;

DpaSession session_with(std::int64_t alert_count, int retries = 0) {
  DpaSession s;
  s.alert_count = alert_count;
  s.current_count = alert_count;
  s.retries = retries;
  return s;
}

TEST(DpaCompare, Examples) {
  auto rng = Rng::stream(1, 7);
  const DpaParams params{};
  EXPECT_EQ(equality_band(100), 5);

  auto a = session_with(100);
  EXPECT_EQ(dpa_compare(80, a, params, rng).kind, DpaOutcome::Kind::no_attack);
  EXPECT_EQ(a.state, SessionState::closed);

  auto b = session_with(100);
  EXPECT_EQ(dpa_compare(130, b, params, rng).kind, DpaOutcome::Kind::analyze);
  EXPECT_EQ(b.state, SessionState::analyzing);

  auto c = session_with(100);
  const auto w = dpa_compare(102, c, params, rng);
  EXPECT_EQ(w.kind, DpaOutcome::Kind::wait);
  EXPECT_GE(w.delay, 0.5);
  EXPECT_LT(w.delay, 1.5);
  EXPECT_EQ(c.retries, 1);
  EXPECT_EQ(c.state, SessionState::waiting);

  auto d = session_with(100, 3);
  EXPECT_EQ(dpa_compare(101, d, params, rng).kind, DpaOutcome::Kind::analyze);
}

TEST(DpaCompare, BandEdges) {
  auto rng = Rng::stream(1, 7);
  const DpaParams params{};
  for (std::int64_t a : {1, 19, 20, 21, 100, 499}) {
    const auto delta = equality_band(a);
    auto lo = session_with(a), in_lo = session_with(a), in_hi = session_with(a), hi = session_with(a);
    if (a - delta - 1 >= 0) { EXPECT_EQ(dpa_compare(a - delta - 1, lo, params, rng).kind, DpaOutcome::Kind::no_attack); }
    if (a - delta >= 0) { EXPECT_EQ(dpa_compare(a - delta, in_lo, params, rng).kind, DpaOutcome::Kind::wait); }
    EXPECT_EQ(dpa_compare(a + delta, in_hi, params, rng).kind, DpaOutcome::Kind::wait);
    EXPECT_EQ(dpa_compare(a + delta + 1, hi, params, rng).kind, DpaOutcome::Kind::analyze);
  }
}

TEST(DpaCompare, RejectsBadInput) {
  auto rng = Rng::stream(1, 7);
  auto s = session_with(10);
  EXPECT_THROW(dpa_compare(-1, s, {}, rng), ContractViolation);
  s.state = SessionState::waiting;
  EXPECT_THROW(dpa_compare(10, s, {}, rng), ContractViolation);
}

TEST(DpaCompare, SustainedEqualityWaitsExactlyKTimes) {
  auto rng = Rng::stream(5, 7);
  for (int k = 0; k <= 5; ++k) {
    auto s = session_with(60);
    int waits = 0;
    for (;;) {
      const auto o = dpa_compare(61, s, DpaParams{k, 1.0}, rng);
      if (o.kind != DpaOutcome::Kind::wait) {
        EXPECT_EQ(o.kind, DpaOutcome::Kind::analyze);
        break;
      }
      ++waits;
      s.state = SessionState::comparing;  // timer expiry
    }
    EXPECT_EQ(waits, k);
  }
}

SampleBatch batch_of(std::vector<std::pair<std::uint32_t, std::string>> rows) {
  SampleBatch b;
  PacketId id = 1;
  for (auto& [dst, payload] : rows) b.packets.push_back(make_packet(id++, 0, dst, payload));
  b.alert_count = static_cast<std::int64_t>(b.packets.size());
  return b;
}

TEST(TfaStateful, Examples) {
  std::vector<std::pair<std::uint32_t, std::string>> rows;
  for (int i = 0; i < 8; ++i) rows.emplace_back(4, "p");
  for (int i = 0; i < 2; ++i) rows.emplace_back(7, "p");
  const auto batch = batch_of(rows);
  const auto r = tfa_stateful(batch, 2.5, {});
  EXPECT_EQ(r.flagged, (PacketIdSet{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(r.modal_dst, N(4));

  std::vector<std::pair<std::uint32_t, std::string>> spread;
  for (std::uint32_t d : {1, 1, 1, 1, 2, 2, 2, 3, 3, 3}) spread.emplace_back(d, "p");
  EXPECT_TRUE(tfa_stateful(batch_of(spread), 2.5, {}).flagged.empty());

  EXPECT_TRUE(tfa_stateful(batch, 1.0, {}).flagged.empty());
  EXPECT_TRUE(tfa_stateful(batch, 1.2, {}).flagged.empty());  // r must exceed 1 + epsilon
}

TEST(TfaStateful, TiesGoToLowerNodeId) {
  const auto batch = batch_of({{7, "a"}, {7, "b"}, {3, "c"}, {3, "d"}});
  const auto r = tfa_stateful(batch, 3.0, {});
  EXPECT_EQ(r.modal_dst, N(3));
  EXPECT_EQ(r.flagged, (PacketIdSet{3, 4}));
}

TEST(TfaStateless, Examples) {
  std::vector<std::pair<std::uint32_t, std::string>> rows;
  for (int i = 0; i < 6; ++i) rows.emplace_back(5, "zzXFLOODXzz");
  for (int i = 0; i < 4; ++i) rows.emplace_back(5, "clean");
  const auto batch = batch_of(rows);
  const std::vector<Bytes> dict{"XFLOODX"};
  const auto r = tfa_stateless(batch, dict);
  EXPECT_EQ(r.flagged, (PacketIdSet{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(r.matched_pattern, Bytes("XFLOODX"));

  EXPECT_TRUE(tfa_stateless(batch, std::vector<Bytes>{}).flagged.empty());
  const auto none = tfa_stateless(batch_of({{5, "abc"}, {5, "def"}}), dict);
  EXPECT_TRUE(none.flagged.empty());
  EXPECT_FALSE(none.matched_pattern);
}

TEST(TfaStateless, MostMatchedPatternWithLexicographicTie) {
  const auto batch = batch_of({{5, "BB"}, {5, "AA"}, {5, "CC"}, {5, "CC"}});
  EXPECT_EQ(tfa_stateless(batch, std::vector<Bytes>{"BB", "AA"}).matched_pattern, Bytes("AA"));
  EXPECT_EQ(tfa_stateless(batch, std::vector<Bytes>{"BB", "AA", "CC"}).matched_pattern, Bytes("CC"));
}

TEST(TfaVerdicts, IntersectionExamples) {
  const auto batch = batch_of({{5, ""}, {5, ""}, {5, ""}, {5, ""}, {5, ""}, {5, ""}});
  const auto v = tfa_verdicts({{1, 2, 3, 4}, N(5)}, {{3, 4, 5}, "X"}, batch);
  EXPECT_EQ(v.drop_set(), (PacketIdSet{3, 4}));
  EXPECT_EQ(v.keep_set(), (PacketIdSet{1, 2, 5, 6}));

  EXPECT_TRUE(tfa_verdicts({{}, std::nullopt}, {{1, 2, 3}, "X"}, batch).drop_set().empty());
  const PacketIdSet all{1, 2, 3, 4, 5, 6};
  EXPECT_EQ(tfa_verdicts({all, N(5)}, {all, "X"}, batch).drop_set(), all);
}

TEST(DeriveSignature, Examples) {
  const auto batch = batch_of({{4, ""}, {4, ""}, {4, ""}, {4, ""}, {4, ""}});
  const auto v = tfa_verdicts({{1, 2, 3, 4}, N(4)}, {{3, 4, 5}, "XFLOODX"}, batch);
  EXPECT_EQ(derive_signature(v), AttackSignature(N(4), "XFLOODX"));
  EXPECT_FALSE(derive_signature(tfa_verdicts({{}, std::nullopt}, {{3}, "XFLOODX"}, batch)));
  const PacketIdSet all{1, 2, 3, 4, 5};
  EXPECT_EQ(derive_signature(tfa_verdicts({all, N(4)}, {all, "XFLOODX"}, batch)), AttackSignature(N(4), "XFLOODX"));
}

TEST(Tfa, AgreesWithBruteForceOracle) { EXPECT_EQ(oracle::filter_mismatches(300, 11), 0); }

TEST(Tfa, AnalysisOrderDoesNotMatter) {
  Rng rng = Rng::stream(3, 77);
  for (int i = 0; i < 300; ++i) {
    const auto c = oracle::random_case(rng);
    const TfaParams params{};
    const auto sf1 = tfa_stateful(c.batch, c.r, params);
    const auto sl1 = tfa_stateless(c.batch, c.patterns);
    const auto sl2 = tfa_stateless(c.batch, c.patterns);
    const auto sf2 = tfa_stateful(c.batch, c.r, params);
    const auto a = tfa_verdicts(sf1, sl1, c.batch);
    const auto b = tfa_verdicts(sf2, sl2, c.batch);
    ASSERT_EQ(a.verdicts, b.verdicts);
    ASSERT_EQ(a.modal_dst, b.modal_dst);
    ASSERT_EQ(a.matched_pattern, b.matched_pattern);
    ASSERT_EQ(a.verdicts, tfa_analyze(c.batch, c.r, c.patterns, params).verdicts);
  }
}

TEST(Tfa, DropSetIsExactlyTheIntersection) {
  Rng rng = Rng::stream(4, 77);
  for (int i = 0; i < 300; ++i) {
    const auto c = oracle::random_case(rng);
    const auto res = tfa_analyze(c.batch, c.r, c.patterns, {});
    PacketIdSet inter;
    for (auto id : res.stateful_flagged)
      if (res.stateless_flagged.count(id)) inter.insert(id);
    ASSERT_EQ(res.drop_set(), inter);
  }
}

TEST(Tfa, PatternFreePacketsAreNeverDropped) {
  Rng rng = Rng::stream(5, 77);
  for (int i = 0; i < 500; ++i) {
    const auto c = oracle::random_case(rng);
    const auto drop = tfa_analyze(c.batch, 3.0, c.patterns, {}).drop_set();
    for (const auto& p : c.batch.packets) {
      bool any = false;
      for (const auto& pat : c.patterns) any |= oracle::contains(p.payload, pat);
      if (!any) { ASSERT_FALSE(drop.count(p.packet_id)); }
    }
  }
}

TEST(Tfa, GroundTruthLabelsAreIgnored) {
  Rng rng = Rng::stream(6, 77);
  for (int i = 0; i < 200; ++i) {
    auto c = oracle::random_case(rng);
    const auto before = tfa_analyze(c.batch, c.r, c.patterns, {});
    for (auto& p : c.batch.packets)
      p.ground_truth = p.ground_truth == TrafficClass::attack ? TrafficClass::legit : TrafficClass::attack;
    const auto after = tfa_analyze(c.batch, c.r, c.patterns, {});
    ASSERT_EQ(before.verdicts, after.verdicts);
  }
}

TEST(Tfa, DetectionCodeNeverReadsGroundTruth) {
  for (auto rel : {"dda/agent.hpp", "dda/forward_log.hpp", "dda/reliability.hpp", "filter/dpa.hpp",
                   "filter/tfa.hpp", "filter/response.hpp"}) {
    std::ifstream f(std::string(ANTGUARD_INCLUDE_DIR) + "/antguard/" + rel);
    ASSERT_TRUE(f) << rel;
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_EQ(ss.str().find("ground_truth"), std::string::npos) << rel;
  }
}

TEST(ResponseApply, SplitsHeldPacketsAndClosesSession) {
  const auto batch = batch_of({{5, "XFLOODX"}, {5, "XFLOODX"}, {5, "ok"}});
  auto s = session_with(3);
  s.state = SessionState::analyzing;
  const std::vector<Bytes> dict{"XFLOODX"};
  const auto res = tfa_analyze(batch, 3.0, dict, {});
  const auto act = response_apply(s, res, derive_signature(res));
  EXPECT_EQ(act.drop, (PacketIdSet{1, 2}));
  EXPECT_EQ(act.keep, (PacketIdSet{3}));
  EXPECT_EQ(act.signature, AttackSignature(N(5), "XFLOODX"));
  EXPECT_EQ(s.state, SessionState::closed);
  EXPECT_THROW(response_apply(s, res, std::nullopt), ContractViolation);
}

TEST(ResponseApply, NoSignatureKeepsEverything) {
  const auto batch = batch_of({{5, "a"}, {6, "b"}});
  auto s = session_with(2);
  s.state = SessionState::analyzing;
  const auto res = tfa_analyze(batch, 3.0, std::vector<Bytes>{"XFLOODX"}, {});
  const auto act = response_apply(s, res, derive_signature(res));
  EXPECT_TRUE(act.drop.empty());
  EXPECT_EQ(act.keep, (PacketIdSet{1, 2}));
  EXPECT_FALSE(act.signature);
}

TEST(ResponseLift, StreakRule) {
  const ResponseParams h{2};
  ResponseState s;
  s = response_lift(s, 10, 51, h);
  EXPECT_FALSE(s.lift_pending);
  s = response_lift(s, 10, 51, h);
  EXPECT_TRUE(s.lift_pending);

  ResponseState t;
  t = response_lift(t, 10, 51, h);
  t = response_lift(t, 60, 51, h);
  EXPECT_EQ(t.below_threshold_streak, 0);
  t = response_lift(t, 10, 51, h);
  EXPECT_FALSE(t.lift_pending);
}

// After the victim lifts, packets that would have matched flow again.
TEST(ResponseLift, LiftedRuleStopsDropping) {
  const auto cfg = load_scenario(testing::scenario_path("figure1_lift.scenario"));
  const auto r = run(cfg, 3);
  std::optional<double> lifted_at;
  for (const auto& rec : r.trace.records)
    if (rec.action == Action::rule_lift && rec.node == N(5)) lifted_at = rec.time;
  ASSERT_TRUE(lifted_at);
  for (const auto& rec : r.trace.records)
    if (rec.time > *lifted_at && rec.node == N(5)) { EXPECT_NE(rec.action, Action::rule_dropped); }
  for (auto n : r.rules_at_end) EXPECT_EQ(n, 0u);
}

}  // namespace
}  // namespace antguard
