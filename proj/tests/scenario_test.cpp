#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

namespace antguard {
namespace {

using testing::N;

std::string base_text(const std::string& attack_line, const std::string& extra_params = "") {
  return "[topology]\n"
         "node 0 sensor 64\nnode 1 attacker 64\nnode 2 sensor 64\nnode 3 adjunct 64\n"
         "link 0 2 0.1\nlink 1 2 0.1\nlink 2 3 0.1\n"
         "[params]\nduration = 30\n" +
         extra_params +
         "[legit]\nflow src=0 dst=2 model=cbr rate=2\n"
         "[attack]\n" +
         attack_line +
         "\n[patterns]\nXFLOODX\n";
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(ParseScenario, ShippedFigure1IsValid) {
  const auto cfg = load_scenario(testing::scenario_path("figure1.scenario"));
  EXPECT_EQ(cfg.topology.nodes.size(), 7u);
  EXPECT_EQ(cfg.topology.nodes[4].kind, NodeKind::attacker);
  EXPECT_EQ(cfg.topology.nodes[6].kind, NodeKind::adjunct);
  ASSERT_EQ(cfg.attacks.size(), 1u);
  EXPECT_EQ(cfg.attacks[0].attackers, (std::vector<NodeId>{N(4)}));
  EXPECT_EQ(cfg.attacks[0].victim, N(5));
  EXPECT_EQ(cfg.patterns, (std::vector<Bytes>{"XFLOODX", std::string("\x00\xFFPING", 6)}));
  const auto topo = build_topology(cfg.topology);
  EXPECT_EQ(topo.next_hop(N(4), N(5)), N(3));  // E reaches F through D
  EXPECT_EQ(topo.nearest_adjunct(N(5)), N(6));
}

TEST(ParseScenario, AttackBeforeWarmupIsRejected) {
  const auto err = error_of(base_text("attack attackers=1 victim=2 rate=50 pattern=XFLOODX start=0"));
  EXPECT_NE(err.find("'start'"), std::string::npos) << err;
  EXPECT_NE(err.find("warmup"), std::string::npos) << err;
}

TEST(ParseScenario, UnknownFieldIsNamedWithLine) {
  const auto err = error_of(base_text("attack attackers=1 victim=2 rate=50 pattern=XFLOODX start=15", "bogus = 3\n"));
  EXPECT_NE(err.find("line 11"), std::string::npos) << err;
  EXPECT_NE(err.find("'bogus'"), std::string::npos) << err;

  const auto err2 = error_of(base_text("attack attackers=1 victim=2 rate=50 pattern=XFLOODX start=15 colour=red"));
  EXPECT_NE(err2.find("'colour'"), std::string::npos) << err2;
}

TEST(ParseScenario, OtherErrors) {
  const auto ok = "attack attackers=1 victim=2 rate=50 pattern=XFLOODX start=15";
  EXPECT_FALSE(error_of(base_text(ok)).size());
  EXPECT_NE(error_of(base_text("attack attackers=0 victim=2 rate=50 pattern=XFLOODX start=15")).find("attacker"),
            std::string::npos);
  EXPECT_NE(error_of(base_text("attack attackers=1 victim=2 rate=50 pattern=NOPE start=15")).find("dictionary"),
            std::string::npos);
  EXPECT_NE(error_of(base_text(ok, "window = abc\n")).find("'window'"), std::string::npos);
  EXPECT_NE(error_of("[nodes]\n").find("unknown section"), std::string::npos);
  EXPECT_NE(error_of("node 0 sensor 64\n").find("before the first section"), std::string::npos);
  EXPECT_THROW(load_scenario("/nonexistent/missing.scenario"), ConfigError);
}

TEST(Bytes, EscapeRoundTrip) {
  Rng rng = Rng::stream(8, 1);
  for (int i = 0; i < 500; ++i) {
    Bytes b(1 + rng.below(12), '\0');
    for (auto& c : b) c = static_cast<char>(rng.below(256));
    const auto e = escape_bytes(b);
    EXPECT_EQ(e.find_first_of(" \t#="), std::string::npos);
    EXPECT_EQ(unescape_bytes(e), b);
  }
  EXPECT_EQ(unescape_bytes("a\\x41"), Bytes("aA"));
  EXPECT_FALSE(unescape_bytes("\\x4"));
  EXPECT_FALSE(unescape_bytes("\\q00"));
  EXPECT_FALSE(unescape_bytes("\\xZZ"));
}

ScenarioConfig random_config(Rng& rng) {
  ScenarioConfig c;
  const auto n = static_cast<std::uint32_t>(4 + rng.below(5));
  for (std::uint32_t i = 0; i < n; ++i) {
    NodeDescriptor d{N(i), NodeKind::sensor, static_cast<int>(1 + rng.below(100)), std::nullopt};
    if (rng.below(2)) d.position = Position{rng.uniform(-5, 5), rng.uniform(0, 1e3)};
    c.topology.nodes.push_back(d);
  }
  c.topology.nodes[0].kind = NodeKind::adjunct;
  c.topology.nodes[n - 1].kind = NodeKind::attacker;
  if (rng.below(2)) c.topology.nodes[1].kind = NodeKind::sink;
  for (std::uint32_t i = 1; i < n; ++i)
    c.topology.links.push_back({N(static_cast<std::uint32_t>(rng.below(i))), N(i), rng.uniform(0.01, 1)});

  c.params.warmup_windows = static_cast<int>(1 + rng.below(12));
  c.params.window = rng.uniform(0.5, 2);
  c.params.duration = c.warmup_end() + rng.uniform(1, 100);
  c.params.epsilon = rng.uniform(0, 1);
  c.params.theta = rng.uniform(0.1, 1);
  c.params.seed = rng.below(1'000'000);
  if (rng.below(2)) c.params.buffer_capacity = static_cast<int>(1 + rng.below(200));
  c.params.energy.inspect = rng.uniform(0, 1);

  for (int p = 0, np = static_cast<int>(1 + rng.below(3)); p < np; ++p) {
    Bytes b(1 + rng.below(10), '\0');
    for (auto& ch : b) ch = static_cast<char>(rng.below(256));
    c.patterns.push_back(b);
  }
  for (int f = 0, nf = static_cast<int>(rng.below(4)); f < nf; ++f) {
    TrafficSourceSpec s;
    s.src = N(static_cast<std::uint32_t>(rng.below(n - 1)));
    s.dst = N(static_cast<std::uint32_t>((s.src.value + 1) % (n - 1)));
    s.model = rng.below(2) ? TrafficModel::cbr : TrafficModel::poisson;
    s.rate = rng.uniform(0.1, 10);
    s.payload = static_cast<int>(rng.below(64));
    s.start = rng.uniform(0, 5);
    if (rng.below(2)) s.stop = s.start + rng.uniform(1, 20);
    c.legit.push_back(s);
  }
  if (rng.below(3)) {
    AttackSpec a;
    a.attackers = {N(n - 1)};
    a.victim = N(1 + static_cast<std::uint32_t>(rng.below(n - 2)));
    a.rate = rng.uniform(1, 80);
    a.pattern = c.patterns[rng.below(c.patterns.size())];
    a.start = c.warmup_end() + rng.uniform(0, 10);
    if (rng.below(2)) a.stop = a.start + rng.uniform(0, 10);
    a.stealth = rng.below(2);
    c.attacks.push_back(a);
  }
  return c;
}

TEST(SerializeScenario, ParseOfSerializeIsIdentity) {
  Rng rng = Rng::stream(21, 1);
  for (int i = 0; i < 300; ++i) {
    const auto cfg = random_config(rng);
    ASSERT_NO_THROW(validate_scenario(cfg));
    const auto text = serialize_scenario(cfg);
    const auto back = parse_scenario(text);
    ASSERT_EQ(back, cfg) << text;
    ASSERT_EQ(serialize_scenario(back), text);
  }
}

TEST(SerializeScenario, ShippedScenariosRoundTrip) {
  for (auto name : {"figure1.scenario", "figure1_lift.scenario", "figure1_quiet.scenario"}) {
    const auto cfg = load_scenario(testing::scenario_path(name));
    EXPECT_EQ(parse_scenario(serialize_scenario(cfg)), cfg) << name;
  }
}

TEST(Overrides, ApplyAndReject) {
  auto cfg = load_scenario(testing::scenario_path("figure1.scenario"));
  apply_override(cfg, "epsilon=0.3");
  apply_override(cfg, "buffer_capacity=16");
  EXPECT_DOUBLE_EQ(cfg.params.epsilon, 0.3);
  EXPECT_EQ(effective_topology(cfg).nodes[2].buffer_capacity, 16);
  EXPECT_THROW(apply_override(cfg, "nope=1"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "epsilon"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "epsilon=x"), ConfigError);
}

ScenarioConfig traffic_base(double duration) {
  ScenarioConfig c;
  c.topology = testing::line_config(4, {{0, NodeKind::attacker}, {3, NodeKind::adjunct}});
  c.params.duration = duration;
  c.params.warmup_windows = 1;
  c.patterns = {"XFLOODX"};
  return c;
}

TEST(GenerateTraffic, CbrRateTimesDuration) {
  auto c = traffic_base(5);
  c.legit.push_back({N(1), N(2), TrafficModel::cbr, 2.0, 16, 0.0, std::nullopt});
  const auto s = generate_traffic(c, 1);
  ASSERT_EQ(s.size(), 10u);
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_DOUBLE_EQ(s[k].time, 0.5 * static_cast<double>(k));
}

TEST(GenerateTraffic, PoissonMeanWithinThreeStandardErrors) {
  auto c = traffic_base(1000);
  c.legit.push_back({N(1), N(2), TrafficModel::poisson, 5.0, 16, 0.0, std::nullopt});
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto s = generate_traffic(c, seed);
    std::vector<int> per_window(1000, 0);
    for (const auto& e : s) ++per_window.at(static_cast<std::size_t>(e.time));
    double mean = 0;
    for (int v : per_window) mean += v;
    mean /= 1000;
    const double se = std::sqrt(5.0 / 1000.0);
    EXPECT_LT(std::abs(mean - 5.0), 3 * se) << "seed " << seed << " mean " << mean;
  }
}

TEST(GenerateTraffic, AttackRateTimesActiveWindows) {
  auto c = traffic_base(40);
  c.attacks.push_back({{N(0)}, N(2), 50.0, "XFLOODX", 15.0, 25.0, 32, false});
  const auto s = generate_traffic(c, 1);
  ASSERT_EQ(s.size(), 500u);
  for (const auto& e : s) {
    EXPECT_EQ(e.packet.ground_truth, TrafficClass::attack);
    EXPECT_TRUE(pattern_contained(e.packet.payload, "XFLOODX"));
    EXPECT_GE(e.time, 15.0);
    EXPECT_LT(e.time, 25.0);
  }
}

TEST(GenerateTraffic, LabelsAndPayloadHygiene) {
  auto cfg = load_scenario(testing::scenario_path("figure1.scenario"));
  cfg.attacks.push_back(cfg.attacks[0]);
  cfg.attacks.back().stealth = true;
  const auto s = generate_traffic(cfg, 9);
  std::set<PacketId> ids;
  std::size_t stealth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& p = s[i].packet;
    EXPECT_EQ(p.packet_id, i);
    EXPECT_EQ(p.hop_trace, std::vector<NodeId>{p.src});
    if (i) { EXPECT_LE(s[i - 1].time, s[i].time); }
    bool dirty = false;
    for (const auto& pat : cfg.patterns) dirty |= pattern_contained(p.payload, pat);
    if (p.ground_truth == TrafficClass::legit) { EXPECT_FALSE(dirty) << "legit payload carries a pattern"; }
    if (p.ground_truth == TrafficClass::attack && !dirty) ++stealth;
  }
  EXPECT_EQ(stealth, 2250u);  // exactly the stealth copy
}

TEST(GenerateTraffic, DeterministicPerSeed) {
  const auto cfg = load_scenario(testing::scenario_path("figure1.scenario"));
  const auto a = generate_traffic(cfg, 4), b = generate_traffic(cfg, 4), c = generate_traffic(cfg, 5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].time, b[i].time);
    EXPECT_EQ(a[i].packet.payload, b[i].packet.payload);
  }
  bool differs = a.size() != c.size();
  for (std::size_t i = 0; !differs && i < a.size(); ++i) differs = a[i].packet.payload != c[i].packet.payload;
  EXPECT_TRUE(differs);
}

TEST(GridScenario, ShapeAndPlacement) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto cfg = make_grid_scenario({}, seed);
    EXPECT_EQ(cfg.topology.nodes.size(), 50u);
    EXPECT_EQ(cfg.topology.links.size(), 85u);  // 5*9 + 4*10
    ASSERT_EQ(cfg.attacks.size(), 1u);
    const auto& a = cfg.attacks[0];
    EXPECT_EQ(a.attackers.size(), 3u);
    EXPECT_EQ(a.victim, N(25));
    const auto topo = build_topology(cfg.topology);
    for (auto id : a.attackers) EXPECT_GE(topo.hop_distance(id, a.victim), 2);
    EXPECT_EQ(make_grid_scenario({}, seed), cfg);
  }
}

}  // namespace
}  // namespace antguard
