#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "heer/protocol_core.hpp"
#include "heer/random.hpp"

namespace {

using heer::ProtocolKind;
using heer::SensorState;
using heer::Thresholds;

heer::Network make_net(std::size_t n, double m, double a, std::uint64_t seed)
{
  heer::FieldConfig f;
  f.node_count = n;
  f.advanced_fraction = m;
  f.energy_factor = a;
  heer::Rng rng(seed);
  return heer::deploy(f, rng);
}

heer::Node node_with(double residual, double factor)
{
  heer::Node n;
  n.residual_energy = residual;
  n.initial_energy = residual;
  n.energy_factor = factor;
  n.node_class = factor > 0 ? heer::NodeClass::advanced : heer::NodeClass::normal;
  return n;
}

TEST(Protocol, NamesRoundTrip)
{
  for (auto kind : heer::all_protocols) EXPECT_EQ(heer::parse_protocol(heer::to_string(kind)), kind);
  EXPECT_EQ(heer::parse_protocol("heer_soft"), ProtocolKind::heer_soft);
  EXPECT_THROW(heer::parse_protocol("LEACH"), heer::ConfigError);
  EXPECT_EQ(heer::classification(ProtocolKind::deec), "Proactive");
  EXPECT_EQ(heer::classification(ProtocolKind::teen), "Reactive");
  EXPECT_EQ(heer::classification(ProtocolKind::heer_hard), "Reactive");
  EXPECT_EQ(heer::classification(ProtocolKind::heer_soft), "Reactive");
}

TEST(ChProbability, TwoLevelExamples)
{
  heer::FieldConfig f;
  f.advanced_fraction = 0.1;
  f.energy_factor = 1.0;
  const heer::ElectionParams p{0.1};
  EXPECT_NEAR(heer::ch_probability(node_with(0.5, 0.0), 0.55, p, f), 0.1 * 0.5 / (1.1 * 0.55), 1e-12);
  EXPECT_NEAR(heer::ch_probability(node_with(0.5, 0.0), 0.55, p, f), 0.0826446, 1e-6);
  EXPECT_NEAR(heer::ch_probability(node_with(1.0, 1.0), 0.55, p, f), 0.1 * 2.0 / (1.1 * 0.55), 1e-12);

  heer::FieldConfig homo;
  homo.advanced_fraction = 0.0;
  EXPECT_NEAR(heer::ch_probability(node_with(0.5, 0.0), 0.5, p, homo), 0.1, 1e-12);
  EXPECT_NEAR(heer::ch_probability(node_with(0.25, 0.0), 0.5, p, homo), 0.05, 1e-12);
}

TEST(ChProbability, NormalAndAdvancedSameState)
{
  heer::FieldConfig f;
  f.advanced_fraction = 0.1;
  f.energy_factor = 1.0;
  const heer::ElectionParams p{0.1};
  EXPECT_NEAR(heer::ch_probability(node_with(0.25, 0.0), 0.5, p, f), 0.1 * 0.25 / (1.1 * 0.5), 1e-12);
  EXPECT_NEAR(heer::ch_probability(node_with(0.25, 0.0), 0.5, p, f), 0.0454545454, 1e-9);
  EXPECT_NEAR(heer::ch_probability(node_with(0.25, 1.0), 0.5, p, f), 0.0909090909, 1e-9);

  // fresh network: E_i = E0(1+a_i) adds a second (1+a) factor between classes
  const double nrm = heer::ch_probability(node_with(0.5, 0.0), 0.55, p, f);
  const double adv = heer::ch_probability(node_with(1.0, 1.0), 0.55, p, f);
  EXPECT_NEAR(adv / nrm, 4.0, 1e-12);
}

TEST(ChProbability, MultiLevel)
{
  heer::FieldConfig f;
  f.node_count = 3;
  f.advanced_fraction = 0.0;
  f.multi_level_factors = std::vector<double>{1.0, 2.0, 3.0};
  const heer::ElectionParams p{0.1};
  // N = 3, sum a = 6, Ebar = 1.5
  EXPECT_NEAR(heer::ch_probability(node_with(1.0, 1.0), 1.5, p, f), 0.1 * 3 * 2 * 1.0 / (9 * 1.5), 1e-12);
  EXPECT_NEAR(heer::ch_probability(node_with(2.0, 3.0), 1.5, p, f), 0.1 * 3 * 4 * 2.0 / (9 * 1.5), 1e-12);

  // all-zero factors reduce to the two-level homogeneous value
  heer::FieldConfig zero = f;
  zero.multi_level_factors = std::vector<double>{0.0, 0.0, 0.0};
  heer::FieldConfig two = f;
  two.multi_level_factors.reset();
  EXPECT_NEAR(heer::ch_probability(node_with(0.4, 0.0), 0.5, p, zero),
              heer::ch_probability(node_with(0.4, 0.0), 0.5, p, two), 1e-15);
}

TEST(ChProbability, DeadOrEmptyNetwork)
{
  heer::FieldConfig f;
  const heer::ElectionParams p{0.1};
  auto dead = node_with(0.0, 0.0);
  dead.alive = false;
  EXPECT_EQ(heer::ch_probability(dead, 0.5, p, f), 0.0);
  EXPECT_EQ(heer::ch_probability(node_with(0.5, 0.0), 0.0, p, f), 0.0);
  EXPECT_LE(heer::ch_probability(node_with(100.0, 1.0), 0.01, p, f), 1.0);
}

TEST(ElectionThreshold, Examples)
{
  EXPECT_DOUBLE_EQ(heer::election_threshold(0.1, 0), 0.1);
  EXPECT_DOUBLE_EQ(heer::election_threshold(0.1, 9), 1.0);
  EXPECT_DOUBLE_EQ(heer::election_threshold(0.1, 10), 0.1);
  EXPECT_NEAR(heer::election_threshold(0.1, 5), 0.2, 1e-12);
  EXPECT_EQ(heer::election_threshold(0.0, 3), 0.0);
  EXPECT_EQ(heer::election_threshold(1.0, 3), 1.0);
}

TEST(ElectionThreshold, MonotoneWithinEpoch)
{
  for (double p : {0.05, 0.1, 0.2, 0.3}) {
    const auto epoch = heer::epoch_length(p);
    for (std::uint64_t r = 1; r < epoch; ++r)
      EXPECT_GE(heer::election_threshold(p, r), heer::election_threshold(p, r - 1));
    EXPECT_LE(heer::election_threshold(p, epoch - 1), 1.0);
  }
}

TEST(Election, EligibilityAfterTerm)
{
  auto n = node_with(0.5, 0.0);
  EXPECT_TRUE(heer::eligible(n, 0.1, 0));
  n.last_ch_round = 3;
  EXPECT_FALSE(heer::eligible(n, 0.1, 4));
  EXPECT_FALSE(heer::eligible(n, 0.1, 12));
  EXPECT_TRUE(heer::eligible(n, 0.1, 13));
  n.alive = false;
  EXPECT_FALSE(heer::eligible(n, 0.1, 100));
}

TEST(Election, MeanHeadCount)
{
  // Uniform energies: expected p_opt*N heads per round over an epoch.
  auto net = make_net(100, 0.0, 0.0, 11);
  const heer::ElectionParams p{0.1};
  double total = 0.0;
  const int rounds = 200;
  for (int r = 0; r < rounds; ++r) {
    net.round = static_cast<std::uint64_t>(r);
    const auto res = heer::select_cluster_heads(net, ProtocolKind::deec, p, 0.5, 1234);
    total += static_cast<double>(res.heads.size());
  }
  const double mean = total / rounds;
  EXPECT_GE(mean, 8.0);
  EXPECT_LE(mean, 12.0);
}

TEST(Election, EveryNodeServesOncePerEpoch)
{
  // homogeneous, equal energy: the rotation forces each node in exactly once
  auto net = make_net(100, 0.0, 0.0, 12);
  const heer::ElectionParams p{0.1};
  for (std::uint64_t r = 0; r < 10; ++r) {
    net.round = r;
    heer::select_cluster_heads(net, ProtocolKind::teen, p, 0.5, 77);
  }
  for (const auto& n : net.nodes) EXPECT_EQ(n.chosen_ch_count, 1u) << "node " << n.id;
}

TEST(Election, HeadsAscendingAndStateUpdated)
{
  auto net = make_net(100, 0.1, 1.0, 13);
  net.round = 4;
  const auto res = heer::select_cluster_heads(net, ProtocolKind::heer_soft, {0.1}, 99);
  EXPECT_TRUE(std::is_sorted(res.heads.begin(), res.heads.end()));
  for (auto id : res.heads) {
    EXPECT_EQ(net.nodes[id].last_ch_round, std::optional<std::uint64_t>(4));
    EXPECT_EQ(net.nodes[id].chosen_ch_count, 1u);
  }
}

TEST(Election, Deterministic)
{
  auto a = make_net(100, 0.1, 1.0, 14);
  auto b = a;
  for (std::uint64_t r = 0; r < 30; ++r) {
    a.round = b.round = r;
    const auto ra = heer::select_cluster_heads(a, ProtocolKind::deec, {0.1}, 5);
    const auto rb = heer::select_cluster_heads(b, ProtocolKind::deec, {0.1}, 5);
    EXPECT_EQ(ra.heads, rb.heads);
  }
}

TEST(Election, ForcedFallback)
{
  auto net = make_net(5, 0.0, 0.0, 15);
  for (auto& n : net.nodes) n.last_ch_round = 0;  // nobody eligible
  net.nodes[1].residual_energy = 0.2;
  net.nodes[3].residual_energy = 0.2;
  for (auto i : {0, 2, 4}) net.nodes[static_cast<std::size_t>(i)].residual_energy = 0.1;
  net.round = 1;
  const auto res = heer::select_cluster_heads(net, ProtocolKind::deec, {0.1}, 3);
  EXPECT_TRUE(res.forced);
  ASSERT_EQ(res.heads.size(), 1u);
  EXPECT_EQ(res.heads[0], 1u);

  for (auto& n : net.nodes) n.alive = false;
  const auto none = heer::select_cluster_heads(net, ProtocolKind::deec, {0.1}, 0.5, 3);
  EXPECT_TRUE(none.network_dead);
  EXPECT_TRUE(none.heads.empty());
}

TEST(Election, AdvancedNodesServeMore)
{
  // energy weighting: advanced nodes (a = 1) should be elected clearly more
  // often than normal ones at equal depletion
  auto net = make_net(100, 0.1, 1.0, 16);
  const heer::ElectionParams p{0.1};
  for (std::uint64_t r = 0; r < 400; ++r) {
    net.round = r;
    heer::select_cluster_heads(net, ProtocolKind::deec, p, 0.55, 21);
  }
  double adv = 0, nrm = 0;
  for (const auto& n : net.nodes)
    (n.node_class == heer::NodeClass::advanced ? adv : nrm) += static_cast<double>(n.chosen_ch_count);
  EXPECT_GT(adv / 10.0, 1.5 * nrm / 90.0);
}

TEST(Clusters, MatchesBruteForce)
{
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto net = make_net(60, 0.0, 0.0, 100 + seed);
    net.nodes[seed % 60].alive = false;
    heer::Rng pick(seed);
    std::vector<std::size_t> heads;
    for (std::size_t i = 0; i < 60; ++i)
      if (net.nodes[i].alive && pick.uniform() < 0.15) heads.push_back(i);
    if (heads.empty()) heads.push_back(seed == 0 ? 1 : 0);
    const auto map = heer::form_clusters(net, heads);
    for (const auto& n : net.nodes) {
      if (!n.alive) {
        EXPECT_FALSE(map[n.id].has_value());
        continue;
      }
      ASSERT_TRUE(map[n.id].has_value());
      if (std::find(heads.begin(), heads.end(), n.id) != heads.end()) {
        EXPECT_EQ(*map[n.id], n.id);
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      for (auto h : heads) best = std::min(best, heer::distance(n.position, net.nodes[h].position));
      EXPECT_NEAR(heer::distance(n.position, net.nodes[*map[n.id]].position), best, 1e-12);
    }
  }
}

TEST(Clusters, TieGoesToLowestId)
{
  auto net = make_net(3, 0.0, 0.0, 1);
  net.nodes[0].position = {10.0, 0.0};
  net.nodes[1].position = {0.0, 0.0};
  net.nodes[2].position = {20.0, 0.0};
  const auto map = heer::form_clusters(net, {2, 1});
  EXPECT_EQ(map[0], std::optional<std::size_t>(1));
  EXPECT_EQ(map[1], std::optional<std::size_t>(1));
  EXPECT_EQ(map[2], std::optional<std::size_t>(2));
}

TEST(Gate, Examples)
{
  const Thresholds t{100.0, 2.0};
  auto first = heer::should_transmit({99.9, std::nullopt}, t, ProtocolKind::heer_soft);
  EXPECT_FALSE(first.transmit);
  EXPECT_FALSE(first.state.sv.has_value());

  auto hit = heer::should_transmit({100.0, std::nullopt}, t, ProtocolKind::heer_soft);
  EXPECT_TRUE(hit.transmit);
  EXPECT_EQ(hit.state.sv, std::optional<double>(100.0));

  EXPECT_FALSE(heer::should_transmit({101.0, 100.0}, t, ProtocolKind::heer_soft).transmit);
  EXPECT_TRUE(heer::should_transmit({102.0, 100.0}, t, ProtocolKind::heer_soft).transmit);
  EXPECT_TRUE(heer::should_transmit({97.5, 100.0}, t, ProtocolKind::teen).transmit);
  EXPECT_FALSE(heer::should_transmit({97.5, 100.0}, {100.0, 2.0, heer::SoftMode::signed_rise},
                                     ProtocolKind::teen).transmit);

  // hard HEER ignores ST once SV is set
  EXPECT_TRUE(heer::should_transmit({100.5, 100.0}, t, ProtocolKind::heer_hard).transmit);
  EXPECT_FALSE(heer::should_transmit({99.0, 100.0}, t, ProtocolKind::heer_hard).transmit);

  // proactive: always, state untouched
  const SensorState s{10.0, std::nullopt};
  const auto pro = heer::should_transmit(s, t, ProtocolKind::deec);
  EXPECT_TRUE(pro.transmit);
  EXPECT_EQ(pro.state, s);
}

TEST(Gate, NeverFiresBelowHtFromReset)
{
  heer::Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double ht = rng.uniform(0.0, 200.0);
    const double cv = rng.uniform(-50.0, ht);
    if (cv >= ht) continue;
    for (auto kind : {ProtocolKind::teen, ProtocolKind::heer_hard, ProtocolKind::heer_soft})
      EXPECT_FALSE(heer::should_transmit({cv, std::nullopt}, {ht, 1.0}, kind).transmit);
  }
}

std::uint64_t count_reports(const std::vector<double>& trace, const Thresholds& t, ProtocolKind kind,
                            std::size_t reset_every)
{
  SensorState s;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i % reset_every == 0) s.sv.reset();
    s.cv = trace[i];
    const auto d = heer::should_transmit(s, t, kind);
    s = d.state;
    n += d.transmit ? 1 : 0;
  }
  return n;
}

TEST(Gate, MonotoneInThresholds)
{
  heer::Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> trace(300);
    double v = 100.0;
    for (auto& x : trace) {
      v += rng.uniform(-8.0, 8.0);
      x = v;
    }
    for (auto kind : {ProtocolKind::teen, ProtocolKind::heer_hard, ProtocolKind::heer_soft}) {
      std::uint64_t prev = UINT64_MAX;
      for (double ht : {60.0, 80.0, 100.0, 120.0, 140.0}) {
        const auto n = count_reports(trace, {ht, 2.0}, kind, 1);
        EXPECT_LE(n, prev);
        prev = n;
      }
    }
    // soft threshold only matters while SV is held
    std::uint64_t prev = UINT64_MAX;
    for (double st : {0.0, 1.0, 2.0, 5.0, 10.0, 50.0}) {
      const auto n = count_reports(trace, {90.0, st}, ProtocolKind::heer_soft, 1000);
      EXPECT_LE(n, prev);
      prev = n;
    }
  }
}

TEST(Gate, HugeSoftThresholdReportsOncePerPeriod)
{
  // with a huge ST the soft variant reports at most once per cluster period
  std::vector<double> trace(100, 150.0);
  EXPECT_EQ(count_reports(trace, {100.0, 1e9}, ProtocolKind::heer_soft, 10), 10u);
  EXPECT_EQ(count_reports(trace, {100.0, 1e9}, ProtocolKind::heer_hard, 10), 100u);
}

} // namespace
