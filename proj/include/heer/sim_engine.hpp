#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heer/environment.hpp"
#include "heer/error.hpp"
#include "heer/network_model.hpp"
#include "heer/protocol_core.hpp"
#include "heer/radio_energy.hpp"
#include "heer/random.hpp"

namespace heer {

/// How the election estimates the network's mean energy.
enum class AvgEnergyMode {
  exact,        ///< true mean over all N nodes
  linear_decay  ///< E_total/N * (1 - r/R) from the expected per-round cost
};

struct SimConfig {
  FieldConfig field;
  RadioParams radio;
  ProtocolKind protocol = ProtocolKind::heer_soft;
  Thresholds thresholds;
  ElectionParams election;
  EnvConfig env;
  AvgEnergyMode avg_energy = AvgEnergyMode::exact;
  std::uint64_t data_packet_bits = 4000;
  std::uint64_t control_packet_bits = 200;
  std::uint64_t frames_per_round = 1;  ///< sensing slots within one cluster period
  double sensing_energy = 0.0;         ///< J per sample
  std::uint64_t max_rounds = 10000;
  std::uint64_t master_seed = 0;

  void validate() const
  {
    field.validate();
    if (!radio.valid()) throw ConfigError("radio: all coefficients must be finite and > 0");
    thresholds.validate();
    election.validate();
    env.validate();
    if (data_packet_bits < 1) throw ConfigError("data_packet_bits: must be >= 1");
    if (control_packet_bits < 1) throw ConfigError("control_packet_bits: must be >= 1");
    if (frames_per_round < 1) throw ConfigError("frames_per_round: must be >= 1");
    if (!(sensing_energy >= 0) || !std::isfinite(sensing_energy))
      throw ConfigError("sensing_energy: must be >= 0");
    if (max_rounds < 1) throw ConfigError("max_rounds: must be >= 1");
  }
};

struct RoundMetrics {
  std::uint64_t round = 0;
  std::size_t alive_count = 0;
  std::size_t ch_count = 0;
  std::uint64_t packets_to_ch = 0;
  std::uint64_t packets_to_bs = 0;
  double total_residual = 0.0;
  bool forced_ch = false;
};

struct Lifetimes {
  std::uint64_t stability = 0;
  std::uint64_t instability = 0;
  std::uint64_t lifetime = 0;
  bool censored = false;  ///< the run ended before the last node died
};

/// Stability ends at the first round whose alive count drops below N;
/// instability runs from there to the first round with nobody alive. Runs
/// that stop with survivors are censored at the number of rounds simulated.
inline Lifetimes compute_lifetimes(const std::vector<RoundMetrics>& per_round, std::size_t node_count)
{
  Lifetimes out;
  const auto rounds = static_cast<std::uint64_t>(per_round.size());
  std::optional<std::uint64_t> first_death;
  std::optional<std::uint64_t> all_dead;
  for (std::uint64_t i = 0; i < rounds; ++i) {
    if (!first_death && per_round[i].alive_count < node_count) first_death = i;
    if (per_round[i].alive_count == 0) {
      all_dead = i;
      break;
    }
  }
  out.stability = first_death.value_or(rounds);
  out.lifetime = all_dead.value_or(rounds);
  out.instability = out.lifetime - out.stability;
  out.censored = !all_dead.has_value();
  return out;
}

struct SimResult {
  std::vector<RoundMetrics> per_round;
  std::optional<std::uint64_t> first_death_round;
  std::optional<std::uint64_t> last_death_round;
  Lifetimes lifetimes;
  std::uint64_t packets_to_ch = 0;
  std::uint64_t packets_to_bs = 0;
  std::uint64_t forced_rounds = 0;
  double initial_energy = 0.0;
  double consumed_energy = 0.0;
  double max_conservation_error = 0.0;  ///< worst |residual + consumed - initial| / initial

  std::uint64_t throughput() const noexcept { return packets_to_ch + packets_to_bs; }
};

/// Expected network energy spent per round, used by the linear-decay mean
/// energy estimate: every node sends a data packet each slot, k = p_opt*N
/// CHs forward over the expected BS distance and members cover the expected
/// cluster radius.
inline double expected_round_energy(const SimConfig& c)
{
  const double n = static_cast<double>(c.field.node_count);
  const double bits = static_cast<double>(c.data_packet_bits);
  const double k = std::max(1.0, c.election.p_opt * n);
  const double d_ch = expected_dist_to_ch(c.field.side_length, static_cast<std::size_t>(std::lround(k)));
  const double d_bs = expected_dist_to_bs(c.field.side_length);
  const double per_slot = bits * (2.0 * n * c.radio.e_elec + n * c.radio.e_da +
                                  k * c.radio.e_mp * std::pow(d_bs, 4) + n * c.radio.e_fs * d_ch * d_ch);
  return per_slot * static_cast<double>(c.frames_per_round);
}

/// Round-driven simulation of one configuration. Owns the network, the sensor
/// traces and the energy ledger; step() advances one round.
class Simulation {
public:
  explicit Simulation(SimConfig config) : m_config(std::move(config))
  {
    m_config.validate();
    Rng deploy_rng(stream_seed(m_config.master_seed, Stream::deploy));
    m_net = deploy(m_config.field, deploy_rng);
    m_election_seed = stream_seed(m_config.master_seed, Stream::election);
    const auto env_seed = mix64(stream_seed(m_config.master_seed, Stream::environment), m_config.env.noise_seed);

    const auto baselines = assign_regions(m_net, m_config.env);
    m_traces.reserve(m_net.nodes.size());
    for (const auto& node : m_net.nodes)
      m_traces.emplace_back(node.id, baselines[node.id], m_config.env, env_seed);
    m_sensors.assign(m_net.nodes.size(), SensorState{});
    m_clusters.assign(m_net.nodes.size(), std::nullopt);

    m_result.initial_energy = m_net.total_initial();
    m_total_energy = m_config.field.multi_level() ? total_energy_multi_level(m_config.field)
                                                  : total_energy_two_level(m_config.field);
    m_round_energy = expected_round_energy(m_config);
  }

  const SimConfig& config() const noexcept { return m_config; }
  const Network& network() const noexcept { return m_net; }
  const ClusterMap& clusters() const noexcept { return m_clusters; }
  const std::vector<std::size_t>& heads() const noexcept { return m_heads; }
  const SimResult& result() const noexcept { return m_result; }
  const std::vector<SensorState>& sensors() const noexcept { return m_sensors; }

  bool finished() const noexcept
  {
    return m_net.round >= m_config.max_rounds || m_net.alive_count() == 0;
  }

  /// Mean energy fed to the election for the current round.
  double average_energy() const
  {
    const double exact = network_average_energy(m_net);
    if (m_config.avg_energy == AvgEnergyMode::exact) return exact;
    const double n = static_cast<double>(m_net.nodes.size());
    const double rounds_total = m_total_energy / m_round_energy;
    const double est = m_total_energy / n * (1.0 - static_cast<double>(m_net.round) / rounds_total);
    return est > 0.0 ? est : exact;
  }

  /// Executes one round; returns false once the run is over.
  bool step()
  {
    if (finished()) return false;
    const auto& radio = m_config.radio;
    const auto data_bits = m_config.data_packet_bits;
    const auto ctrl_bits = m_config.control_packet_bits;
    const Point bs = m_net.field.base_station();

    RoundMetrics metrics;
    metrics.round = m_net.round;

    // (1) election, clustering and SV reset
    const auto election = select_cluster_heads(m_net, m_config.protocol, m_config.election, average_energy(),
                                               m_election_seed);
    m_heads = election.heads;
    m_clusters = form_clusters(m_net, m_heads);
    for (auto& s : m_sensors) s.sv.reset();
    metrics.ch_count = m_heads.size();
    metrics.forced_ch = election.forced;

    std::vector<char> is_head(m_net.nodes.size(), 0);
    for (auto id : m_heads) is_head[id] = 1;

    // (2) CH threshold/schedule broadcast
    const double ctrl_range = expected_dist_to_ch(m_net.field.side_length, m_heads.size());
    for (auto id : m_heads) spend(id, tx_energy(radio, ctrl_bits, ctrl_range));
    for (const auto& node : m_net.nodes)
      if (node.alive && !is_head[node.id]) spend(node.id, rx_energy(radio, ctrl_bits));

    // (3)-(4) sensing slots
    std::vector<std::uint64_t> reports(m_net.nodes.size(), 0);
    for (std::uint64_t frame = 0; frame < m_config.frames_per_round; ++frame) {
      for (const auto& node : m_net.nodes) {
        if (!node.alive) continue;
        m_sensors[node.id].cv = m_traces[node.id].next();
        if (m_config.sensing_energy > 0.0) spend(node.id, m_config.sensing_energy);
      }
      std::fill(reports.begin(), reports.end(), 0);

      for (const auto& node : m_net.nodes) {
        if (!node.alive || is_head[node.id]) continue;
        const auto ch = *m_clusters[node.id];
        if (!m_net.nodes[ch].alive) continue;  // CH exhausted earlier this round
        const auto decision = should_transmit(m_sensors[node.id], m_config.thresholds, m_config.protocol);
        m_sensors[node.id] = decision.state;
        if (!decision.transmit) continue;
        spend(node.id, tx_energy(radio, data_bits, distance(node.position, m_net.nodes[ch].position)));
        spend(ch, rx_energy(radio, data_bits));
        ++reports[ch];
        ++metrics.packets_to_ch;
      }

      for (auto id : m_heads) {
        const auto& head = m_net.nodes[id];
        if (!head.alive) continue;
        const auto own = should_transmit(m_sensors[id], m_config.thresholds, m_config.protocol);
        m_sensors[id] = own.state;
        if (reports[id] == 0 && !own.transmit) continue;
        // the CH's own reading always rides along with its members' reports
        spend(id, aggregation_energy(radio, data_bits, reports[id] + 1));
        spend(id, tx_energy(radio, data_bits, distance(head.position, bs)));
        ++metrics.packets_to_bs;
      }
    }

    // (5) bookkeeping
    metrics.alive_count = m_net.alive_count();
    metrics.total_residual = m_net.total_residual();
    if (metrics.alive_count < m_net.nodes.size() && !m_result.first_death_round)
      m_result.first_death_round = m_net.round;
    if (metrics.alive_count == 0) m_result.last_death_round = m_net.round;

    const double err = std::abs(metrics.total_residual + m_result.consumed_energy - m_result.initial_energy) /
                       m_result.initial_energy;
    m_result.max_conservation_error = std::max(m_result.max_conservation_error, err);
    m_result.packets_to_ch += metrics.packets_to_ch;
    m_result.packets_to_bs += metrics.packets_to_bs;
    m_result.forced_rounds += metrics.forced_ch ? 1 : 0;
    m_result.per_round.push_back(metrics);

    ++m_net.round;
    return !finished();
  }

  SimResult run()
  {
    while (step()) {
    }
    m_result.lifetimes = compute_lifetimes(m_result.per_round, m_net.nodes.size());
    return m_result;
  }

private:
  /// Draws energy from a node, clamped at empty. A node that empties dies on
  /// the spot and takes no further part in the round.
  void spend(std::size_t id, double joules)
  {
    auto& node = m_net.nodes[id];
    if (!node.alive) return;
    const double drawn = std::min(joules, node.residual_energy);
    node.residual_energy -= drawn;
    m_result.consumed_energy += drawn;
    if (node.residual_energy <= 0.0) {
      node.residual_energy = 0.0;
      node.alive = false;
    }
  }

  SimConfig m_config;
  Network m_net;
  std::uint64_t m_election_seed = 0;
  std::vector<SensorTrace> m_traces;
  std::vector<SensorState> m_sensors;
  ClusterMap m_clusters;
  std::vector<std::size_t> m_heads;
  SimResult m_result;
  double m_total_energy = 0.0;
  double m_round_energy = 0.0;
};

inline SimResult run(const SimConfig& config)
{
  return Simulation(config).run();
}

} // namespace heer
