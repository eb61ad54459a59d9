#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "heer/error.hpp"
#include "heer/network_model.hpp"
#include "heer/random.hpp"

namespace heer {

/// Synthetic temperature field: a hot strip on the left of the field, a cold
/// remainder, and a clamped random walk around each node's baseline.
struct EnvConfig {
  double baseline_low = 50.0;
  double baseline_high = 120.0;
  double hot_region_fraction = 0.5;
  double step_magnitude = 5.0;  ///< max per-sample change
  std::uint64_t noise_seed = 0;

  void validate() const
  {
    if (!std::isfinite(baseline_low) || !std::isfinite(baseline_high) || baseline_low > baseline_high)
      throw ConfigError("baseline_low: must be finite and <= baseline_high");
    if (!(hot_region_fraction >= 0.0 && hot_region_fraction <= 1.0))
      throw ConfigError("hot_region_fraction: must lie in [0, 1]");
    if (!(step_magnitude >= 0) || !std::isfinite(step_magnitude))
      throw ConfigError("step_magnitude: must be >= 0");
  }
};

/// Baseline per node id: nodes with x < fraction*M are hot.
inline std::vector<double> assign_regions(const Network& net, const EnvConfig& config)
{
  const double edge = config.hot_region_fraction * net.field.side_length;
  std::vector<double> baseline(net.nodes.size());
  for (const auto& node : net.nodes) {
    const bool hot = config.hot_region_fraction >= 1.0 || node.position.x < edge;
    baseline[node.id] = hot ? config.baseline_high : config.baseline_low;
  }
  return baseline;
}

/// One step of the walk: clamp(prev + U(-d, d), baseline - 10d, baseline + 10d).
/// The increment is keyed on (seed, node, step) so traces never depend on
/// which other nodes happen to be sampled.
inline double walk_step(double prev, double baseline, const EnvConfig& config, std::uint64_t seed,
                        std::size_t node_id, std::uint64_t step)
{
  const double d = config.step_magnitude;
  const double u = keyed_uniform(seed, node_id, step);
  return std::clamp(prev + (2.0 * u - 1.0) * d, baseline - 10.0 * d, baseline + 10.0 * d);
}

/// CV of a node at sensing step `step`, replayed from cv(-1) = baseline.
/// O(step); the engine uses SensorTrace for incremental sampling.
inline double sample_cv(std::size_t node_id, std::uint64_t step, double baseline, const EnvConfig& config,
                        std::uint64_t seed)
{
  double cv = baseline;
  for (std::uint64_t s = 0; s <= step; ++s) cv = walk_step(cv, baseline, config, seed, node_id, s);
  return cv;
}

/// Incremental per-node walk; next() must be called once per sensing step.
class SensorTrace {
public:
  SensorTrace(std::size_t node_id, double baseline, const EnvConfig& config, std::uint64_t seed)
      : m_node(node_id), m_baseline(baseline), m_config(config), m_seed(seed), m_cv(baseline)
  {
  }

  double next()
  {
    m_cv = walk_step(m_cv, m_baseline, m_config, m_seed, m_node, m_step++);
    return m_cv;
  }

  double current() const noexcept { return m_cv; }
  std::uint64_t steps_taken() const noexcept { return m_step; }
  double baseline() const noexcept { return m_baseline; }

private:
  std::size_t m_node;
  double m_baseline;
  EnvConfig m_config;
  std::uint64_t m_seed;
  double m_cv;
  std::uint64_t m_step = 0;
};

} // namespace heer
