#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "heer/error.hpp"
#include "heer/random.hpp"

namespace heer {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& a, const Point& b) noexcept
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance_sq(const Point& a, const Point& b) noexcept
{
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

enum class NodeClass { normal, advanced };

struct Node {
  std::size_t id = 0;
  Point position;
  double initial_energy = 0.0;
  double residual_energy = 0.0;
  NodeClass node_class = NodeClass::normal;
  double energy_factor = 0.0;  ///< a (two-level) or a_i (multi-level); 0 for normal nodes
  bool alive = true;
  std::uint64_t chosen_ch_count = 0;
  std::optional<std::uint64_t> last_ch_round;

  /// Rounds elapsed since this node last served as CH, empty if never.
  std::optional<std::uint64_t> rounds_since_ch(std::uint64_t round) const
  {
    if (!last_ch_round) return std::nullopt;
    return round - *last_ch_round;
  }
};

/// Square sensing field and heterogeneity setup.
struct FieldConfig {
  double side_length = 100.0;
  std::size_t node_count = 100;
  std::optional<Point> bs_position;  ///< defaults to the field center
  double initial_energy = 0.5;       ///< E0
  double advanced_fraction = 0.1;    ///< m
  double energy_factor = 1.0;        ///< a
  std::optional<std::vector<double>> multi_level_factors;  ///< a_1..a_N

  Point base_station() const
  {
    return bs_position.value_or(Point{side_length / 2.0, side_length / 2.0});
  }

  bool multi_level() const noexcept { return multi_level_factors.has_value(); }

  std::size_t advanced_count() const
  {
    return static_cast<std::size_t>(std::lround(advanced_fraction * static_cast<double>(node_count)));
  }

  void validate() const
  {
    if (!(side_length > 0) || !std::isfinite(side_length))
      throw ConfigError("side_length: must be > 0");
    if (node_count == 0) throw ConfigError("node_count: must be > 0");
    if (!(initial_energy > 0) || !std::isfinite(initial_energy))
      throw ConfigError("initial_energy: must be > 0");
    if (!(advanced_fraction >= 0.0 && advanced_fraction < 1.0))
      throw ConfigError("advanced_fraction: must lie in [0, 1)");
    if (!(energy_factor >= 0) || !std::isfinite(energy_factor))
      throw ConfigError("energy_factor: must be >= 0");
    if (multi_level_factors) {
      if (multi_level_factors->size() != node_count)
        throw ConfigError("multi_level_factors: expected " + std::to_string(node_count) +
                          " entries, got " + std::to_string(multi_level_factors->size()));
      for (double a : *multi_level_factors)
        if (!(a >= 0) || !std::isfinite(a)) throw ConfigError("multi_level_factors: entries must be >= 0");
    }
  }
};

struct Network {
  std::vector<Node> nodes;
  FieldConfig field;
  std::uint64_t round = 0;

  std::size_t alive_count() const
  {
    std::size_t n = 0;
    for (const auto& node : nodes) n += node.alive ? 1 : 0;
    return n;
  }

  double total_residual() const
  {
    double sum = 0.0;
    for (const auto& node : nodes) sum += node.residual_energy;
    return sum;
  }

  double total_initial() const
  {
    double sum = 0.0;
    for (const auto& node : nodes) sum += node.initial_energy;
    return sum;
  }
};

/// Places N nodes uniformly at random over the field. For two-level setups the
/// first round(m*N) indices of a seeded shuffle become advanced nodes with
/// E0*(1+a); multi-level setups give node i the energy E0*(1+a_i).
inline Network deploy(const FieldConfig& config, Rng& rng)
{
  config.validate();
  Network net;
  net.field = config;
  net.nodes.resize(config.node_count);

  for (std::size_t i = 0; i < config.node_count; ++i) {
    auto& node = net.nodes[i];
    node.id = i;
    node.position.x = rng.uniform() * config.side_length;
    node.position.y = rng.uniform() * config.side_length;
  }

  std::vector<double> factors(config.node_count, 0.0);
  if (config.multi_level()) {
    factors = *config.multi_level_factors;
  } else {
    std::vector<std::size_t> order(config.node_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates; std::shuffle's draw pattern is implementation-defined.
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);
    const std::size_t k = config.advanced_count();
    for (std::size_t j = 0; j < k; ++j) factors[order[j]] = config.energy_factor;
    // a = 0 leaves "advanced" nodes indistinguishable from normal ones
  }

  for (std::size_t i = 0; i < config.node_count; ++i) {
    auto& node = net.nodes[i];
    node.energy_factor = factors[i];
    node.node_class = factors[i] > 0.0 ? NodeClass::advanced : NodeClass::normal;
    node.initial_energy = config.initial_energy * (1.0 + factors[i]);
    node.residual_energy = node.initial_energy;
    node.alive = true;
  }
  return net;
}

/// N*E0*(1 + a*m), the two-level network's starting energy.
inline double total_energy_two_level(const FieldConfig& config)
{
  return static_cast<double>(config.node_count) * config.initial_energy *
         (1.0 + config.energy_factor * config.advanced_fraction);
}

/// E0*(N + sum a_i).
inline double total_energy_multi_level(const FieldConfig& config)
{
  if (!config.multi_level_factors) throw ConfigError("multi_level_factors: not set");
  const auto& a = *config.multi_level_factors;
  if (a.size() != config.node_count)
    throw ConfigError("multi_level_factors: length does not match node_count");
  const double sum = std::accumulate(a.begin(), a.end(), 0.0);
  return config.initial_energy * (static_cast<double>(config.node_count) + sum);
}

/// Expected member-to-CH distance for k clusters over an MxM field of
/// uniformly placed nodes: M / sqrt(2*pi*k).
inline double expected_dist_to_ch(double side_length, std::size_t clusters)
{
  return side_length / std::sqrt(2.0 * std::numbers::pi * static_cast<double>(clusters));
}

/// Expected CH-to-BS distance with the sink at the field center: 0.765*M/2.
inline double expected_dist_to_bs(double side_length)
{
  return 0.765 * side_length / 2.0;
}

/// Mean residual energy over all N nodes; dead nodes count as zero.
inline double network_average_energy(const Network& net)
{
  return net.total_residual() / static_cast<double>(net.nodes.size());
}

} // namespace heer
