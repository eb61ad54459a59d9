#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "heer/environment.hpp"

namespace {

heer::Network net_at(std::vector<heer::Point> pts)
{
  heer::FieldConfig f;
  f.node_count = pts.size();
  f.advanced_fraction = 0.0;
  heer::Rng rng(0);
  auto net = heer::deploy(f, rng);
  for (std::size_t i = 0; i < pts.size(); ++i) net.nodes[i].position = pts[i];
  return net;
}

TEST(Regions, StripBoundary)
{
  heer::EnvConfig cfg;
  cfg.hot_region_fraction = 0.3;
  const auto net = net_at({{29.9, 50.0}, {30.1, 50.0}, {0.0, 0.0}, {99.0, 99.0}});
  const auto b = heer::assign_regions(net, cfg);
  EXPECT_EQ(b[0], cfg.baseline_high);
  EXPECT_EQ(b[1], cfg.baseline_low);
  EXPECT_EQ(b[2], cfg.baseline_high);
  EXPECT_EQ(b[3], cfg.baseline_low);
}

TEST(Regions, WholeFieldHotOrCold)
{
  const auto net = net_at({{0.0, 0.0}, {99.99, 3.0}, {50.0, 50.0}});
  heer::EnvConfig cfg;
  cfg.hot_region_fraction = 1.0;
  for (double b : heer::assign_regions(net, cfg)) EXPECT_EQ(b, cfg.baseline_high);
  cfg.hot_region_fraction = 0.0;
  for (double b : heer::assign_regions(net, cfg)) EXPECT_EQ(b, cfg.baseline_low);
}

TEST(Walk, ZeroStepIsConstant)
{
  heer::EnvConfig cfg;
  cfg.step_magnitude = 0.0;
  heer::SensorTrace t(3, 120.0, cfg, 42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(t.next(), 120.0);
  EXPECT_EQ(heer::sample_cv(3, 57, 120.0, cfg, 42), 120.0);
}

TEST(Walk, StaysWithinBand)
{
  heer::EnvConfig cfg;
  cfg.step_magnitude = 5.0;
  for (std::size_t node = 0; node < 5; ++node) {
    heer::SensorTrace t(node, 120.0, cfg, 9);
    double prev = 120.0;
    for (int i = 0; i < 10000; ++i) {
      const double cv = t.next();
      EXPECT_GE(cv, 120.0 - 50.0);
      EXPECT_LE(cv, 120.0 + 50.0);
      EXPECT_LE(std::abs(cv - prev), 5.0 + 1e-12);
      prev = cv;
    }
  }
}

TEST(Walk, DeterministicAndReplayable)
{
  heer::EnvConfig cfg;
  heer::SensorTrace a(7, 50.0, cfg, 123);
  heer::SensorTrace b(7, 50.0, cfg, 123);
  heer::SensorTrace other(7, 50.0, cfg, 124);
  bool differs = false;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const double va = a.next();
    EXPECT_EQ(va, b.next());
    differs = differs || va != other.next();
    if (s % 37 == 0) {
      EXPECT_EQ(va, heer::sample_cv(7, s, 50.0, cfg, 123));
    }
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(a.steps_taken(), 200u);
}

TEST(Walk, NodesIndependentOfEachOther)
{
  heer::EnvConfig cfg;
  heer::SensorTrace a(1, 50.0, cfg, 5);
  heer::SensorTrace b(2, 50.0, cfg, 5);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += a.next() == b.next() ? 1 : 0;
  EXPECT_LT(same, 5);
}

TEST(Walk, ThresholdCrossingControllable)
{
  // A hot baseline above HT keeps the node triggering; a cold one never
  // reaches it when the walk band stays below HT.
  heer::EnvConfig cfg;
  cfg.step_magnitude = 2.0;
  heer::SensorTrace hot(0, 130.0, cfg, 1);
  heer::SensorTrace cold(1, 50.0, cfg, 1);
  int hot_hits = 0, cold_hits = 0;
  for (int i = 0; i < 1000; ++i) {
    hot_hits += hot.next() >= 100.0 ? 1 : 0;
    cold_hits += cold.next() >= 100.0 ? 1 : 0;
  }
  EXPECT_EQ(hot_hits, 1000);
  EXPECT_EQ(cold_hits, 0);
}

TEST(EnvConfig, Validation)
{
  heer::EnvConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.baseline_low = 200.0;
  EXPECT_THROW(cfg.validate(), heer::ConfigError);
  cfg = {};
  cfg.hot_region_fraction = 1.5;
  EXPECT_THROW(cfg.validate(), heer::ConfigError);
  cfg = {};
  cfg.step_magnitude = -1.0;
  EXPECT_THROW(cfg.validate(), heer::ConfigError);
}

} // namespace
