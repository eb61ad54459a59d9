#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heer/error.hpp"
#include "heer/network_model.hpp"
#include "heer/random.hpp"

namespace heer {

enum class ProtocolKind { teen, deec, heer_hard, heer_soft };

inline constexpr ProtocolKind all_protocols[] = {ProtocolKind::teen, ProtocolKind::deec,
                                                 ProtocolKind::heer_hard, ProtocolKind::heer_soft};

inline std::string_view to_string(ProtocolKind kind)
{
  switch (kind) {
    case ProtocolKind::teen: return "TEEN";
    case ProtocolKind::deec: return "DEEC";
    case ProtocolKind::heer_hard: return "HEER_HARD";
    case ProtocolKind::heer_soft: return "HEER_SOFT";
  }
  return "?";
}

inline ProtocolKind parse_protocol(std::string_view text)
{
  std::string up(text);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (auto kind : all_protocols)
    if (to_string(kind) == up) return kind;
  throw ConfigError("protocol: unknown value '" + std::string(text) +
                    "' (expected TEEN, DEEC, HEER_HARD or HEER_SOFT)");
}

/// Proactive protocols report every sensing slot; reactive ones only on
/// threshold events.
inline bool is_proactive(ProtocolKind kind) noexcept { return kind == ProtocolKind::deec; }

inline std::string_view classification(ProtocolKind kind)
{
  return is_proactive(kind) ? "Proactive" : "Reactive";
}

/// TEEN elects with the plain LEACH probability; the others weight it by
/// residual energy.
inline bool energy_weighted(ProtocolKind kind) noexcept { return kind != ProtocolKind::teen; }

inline bool uses_soft_threshold(ProtocolKind kind) noexcept
{
  return kind == ProtocolKind::teen || kind == ProtocolKind::heer_soft;
}

enum class SoftMode {
  absolute,  ///< |CV - SV| >= ST
  signed_rise  ///< CV - SV >= ST
};

struct Thresholds {
  double ht = 100.0;
  double st = 2.0;
  SoftMode soft_mode = SoftMode::absolute;

  void validate() const
  {
    if (!std::isfinite(ht)) throw ConfigError("ht: must be finite");
    if (!(st >= 0) || !std::isfinite(st)) throw ConfigError("st: must be >= 0");
  }
};

struct SensorState {
  double cv = 0.0;
  std::optional<double> sv;  ///< value at the last triggered report this cluster period

  friend bool operator==(const SensorState&, const SensorState&) = default;
};

struct TransmitDecision {
  bool transmit = false;
  SensorState state;
};

/// Reactive gate. The first report of a cluster period needs CV >= HT; after
/// that, soft-threshold protocols report on a change of at least ST from the
/// stored value while hard HEER keeps using HT alone.
inline TransmitDecision should_transmit(SensorState state, const Thresholds& t, ProtocolKind kind)
{
  if (is_proactive(kind)) return {true, state};

  bool fire = false;
  if (!state.sv || !uses_soft_threshold(kind)) {
    fire = state.cv >= t.ht;
  } else {
    const double diff = state.cv - *state.sv;
    fire = (t.soft_mode == SoftMode::absolute ? std::abs(diff) : diff) >= t.st;
  }
  if (fire) state.sv = state.cv;
  return {fire, state};
}

struct ElectionParams {
  double p_opt = 0.1;

  void validate() const
  {
    if (!(p_opt > 0.0 && p_opt < 1.0)) throw ConfigError("p_opt: must lie in (0, 1)");
  }
};

/// Residual-energy weighted CH probability. Two-level networks use
/// p_opt*(1+a_i)*E_i/((1+a*m)*Ebar), where a_i is 0 for normal nodes and a
/// for advanced ones; multi-level networks use
/// p_opt*N*(1+a_i)*E_i/((N + sum a_j)*Ebar).
inline double ch_probability(const Node& node, double avg_energy, const ElectionParams& params,
                             const FieldConfig& field)
{
  if (!node.alive || !(avg_energy > 0.0)) return 0.0;
  const double weight = (1.0 + node.energy_factor) * node.residual_energy / avg_energy;
  double norm = 0.0;
  if (field.multi_level()) {
    const auto& a = *field.multi_level_factors;
    const double n = static_cast<double>(field.node_count);
    const double sum_a = std::accumulate(a.begin(), a.end(), 0.0);
    norm = (n + sum_a) / n;
  } else {
    norm = 1.0 + field.energy_factor * field.advanced_fraction;
  }
  return std::clamp(params.p_opt * weight / norm, 0.0, 1.0);
}

/// Per-protocol election probability for one node.
inline double election_probability(const Node& node, ProtocolKind kind, double avg_energy,
                                   const ElectionParams& params, const FieldConfig& field)
{
  if (!node.alive) return 0.0;
  if (!energy_weighted(kind)) return params.p_opt;
  return ch_probability(node, avg_energy, params, field);
}

/// Rotation epoch length round(1/p), at least one round.
inline std::uint64_t epoch_length(double p)
{
  if (!(p > 0.0)) return UINT64_MAX;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(1.0 / p)));
}

/// LEACH rotation threshold p / (1 - p*(r mod round(1/p))).
inline double election_threshold(double p, std::uint64_t round)
{
  if (!(p > 0.0)) return 0.0;
  if (p >= 1.0) return 1.0;
  const auto epoch = epoch_length(p);
  const double t = p / (1.0 - p * static_cast<double>(round % epoch));
  return std::min(t, 1.0);
}

/// A node may stand again once a full epoch has passed since its last term.
inline bool eligible(const Node& node, double p, std::uint64_t round)
{
  if (!node.alive) return false;
  const auto since = node.rounds_since_ch(round);
  return !since || *since >= epoch_length(p);
}

struct ElectionResult {
  std::vector<std::size_t> heads;  ///< ascending node ids
  bool forced = false;             ///< no node self-elected; fallback CH used
  bool network_dead = false;
};

/// One election round. Each eligible node compares a keyed uniform draw on
/// (seed, round, id) with its rotation threshold. Elected nodes get their
/// rotation state reset. When nobody stands, the alive node with the most
/// residual energy (lowest id on ties) is forced into the role.
inline ElectionResult select_cluster_heads(Network& net, ProtocolKind kind, const ElectionParams& params,
                                           double avg_energy, std::uint64_t election_seed)
{
  ElectionResult result;
  const std::uint64_t r = net.round;
  for (auto& node : net.nodes) {
    if (!node.alive) continue;
    const double p = election_probability(node, kind, avg_energy, params, net.field);
    if (!eligible(node, p, r)) continue;
    const double draw = keyed_uniform(election_seed, r, node.id);
    if (draw < election_threshold(p, r)) result.heads.push_back(node.id);
  }

  if (result.heads.empty()) {
    const Node* best = nullptr;
    for (const auto& node : net.nodes)
      if (node.alive && (!best || node.residual_energy > best->residual_energy)) best = &node;
    if (!best) {
      result.network_dead = true;
      return result;
    }
    result.heads.push_back(best->id);
    result.forced = true;
  }

  for (auto id : result.heads) {
    auto& node = net.nodes[id];
    node.last_ch_round = r;
    ++node.chosen_ch_count;
  }
  return result;
}

inline ElectionResult select_cluster_heads(Network& net, ProtocolKind kind, const ElectionParams& params,
                                           std::uint64_t election_seed)
{
  return select_cluster_heads(net, kind, params, network_average_energy(net), election_seed);
}

/// Cluster membership, indexed by node id. Dead nodes map to nothing; CHs map
/// to themselves; everyone else joins the nearest CH (lowest id on ties).
using ClusterMap = std::vector<std::optional<std::size_t>>;

inline ClusterMap form_clusters(const Network& net, const std::vector<std::size_t>& heads)
{
  ClusterMap map(net.nodes.size());
  if (heads.empty()) return map;
  std::vector<std::size_t> sorted = heads;
  std::sort(sorted.begin(), sorted.end());

  for (const auto& node : net.nodes) {
    if (!node.alive) continue;
    std::size_t best = sorted.front();
    double best_d = distance_sq(node.position, net.nodes[best].position);
    for (std::size_t k = 1; k < sorted.size(); ++k) {
      const double d = distance_sq(node.position, net.nodes[sorted[k]].position);
      if (d < best_d) {
        best_d = d;
        best = sorted[k];
      }
    }
    map[node.id] = best;
  }
  // a CH is always at distance zero from itself, but a coincident lower-id CH
  // would otherwise capture it
  for (auto id : sorted) map[id] = id;
  return map;
}

} // namespace heer
