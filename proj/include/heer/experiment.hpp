#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "heer/config.hpp"
#include "heer/error.hpp"
#include "heer/protocol_core.hpp"
#include "heer/sim_engine.hpp"

namespace heer {

using Setting = std::pair<std::string, std::string>;

/// A named comparison: shared settings over the built-in defaults plus one
/// delta per compared configuration.
struct ExperimentPreset {
  std::string name;
  std::string description;
  std::vector<Setting> shared;
  std::vector<std::vector<Setting>> configs;
  std::size_t seeds = 20;
};

namespace detail {

inline std::vector<std::vector<Setting>> one_per_protocol()
{
  std::vector<std::vector<Setting>> out;
  for (auto kind : all_protocols) out.push_back({{"protocol", std::string(to_string(kind))}});
  return out;
}

// Environment shared by the homogeneous presets: every node sits in the hot
// strip and its reading wanders over [baseline - 10*step, baseline + 10*step],
// so HT crossings are frequent without being constant.
inline std::vector<Setting> homogeneous_base()
{
  return {{"advanced_fraction", "0"}, {"hot_region_fraction", "1"}, {"baseline_high", "160"},
          {"step_magnitude", "14"},   {"frames_per_round", "2"},  {"p_opt", "0.2"}};
}

} // namespace detail

inline const std::vector<ExperimentPreset>& presets()
{
  static const std::vector<ExperimentPreset> all = [] {
    std::vector<ExperimentPreset> v;

    ExperimentPreset table2{"table2", "homogeneous field, HT=100, ST=2", detail::homogeneous_base(),
                            detail::one_per_protocol(), 20};
    table2.shared.emplace_back("ht", "100");
    table2.shared.emplace_back("st", "2");
    v.push_back(table2);

    ExperimentPreset fig5{"fig5", "homogeneous field, HT=70, ST=10", detail::homogeneous_base(),
                          detail::one_per_protocol(), 20};
    fig5.shared.emplace_back("ht", "70");
    fig5.shared.emplace_back("st", "10");
    v.push_back(fig5);

    ExperimentPreset hetero{"hetero", "two-level field, m=0.1, a=1, HT=100, ST=2", detail::homogeneous_base(),
                            detail::one_per_protocol(), 20};
    hetero.shared[0] = {"advanced_fraction", "0.1"};
    hetero.shared.emplace_back("energy_factor", "1");
    hetero.shared.emplace_back("ht", "100");
    hetero.shared.emplace_back("st", "2");
    v.push_back(hetero);
    return v;
  }();
  return all;
}

inline std::string preset_names()
{
  std::string out;
  for (const auto& p : presets()) {
    if (!out.empty()) out += ", ";
    out += p.name;
  }
  return out;
}

inline const ExperimentPreset& find_preset(std::string_view name)
{
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw ConfigError("preset: unknown '" + std::string(name) + "' (available: " + preset_names() + ")");
}

/// Expands a preset into full configurations over `base`.
inline std::vector<SimConfig> resolve(const ExperimentPreset& preset, const SimConfig& base = {})
{
  std::vector<SimConfig> out;
  for (const auto& delta : preset.configs) {
    ConfigBuilder builder(base);
    for (const auto& [k, v] : preset.shared) builder.set(k, v);
    for (const auto& [k, v] : delta) builder.set(k, v);
    out.push_back(builder.build());
  }
  return out;
}

struct SampleStats {
  double mean = 0.0;
  double sd = 0.0;  ///< sample standard deviation; 0 for a single sample
};

inline SampleStats sample_stats(const std::vector<double>& xs)
{
  SampleStats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

struct BatchRow {
  SimConfig config;                ///< as given, before per-seed override
  std::vector<std::uint64_t> seeds;
  std::vector<SimResult> runs;     ///< seed order
  SampleStats stability;
  SampleStats lifetime;
  SampleStats throughput;
};

struct BatchReport {
  std::vector<BatchRow> rows;  ///< config order
};

/// Runs every (config, seed) pair. Results keep config-major, seed-minor
/// order. A failing run aborts the batch with the offending pair named.
inline BatchReport run_batch(const std::vector<SimConfig>& configs, const std::vector<std::uint64_t>& seeds)
{
  if (configs.empty()) throw ConfigError("batch: no configurations");
  if (seeds.empty()) throw ConfigError("batch: no seeds");
  BatchReport report;
  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    BatchRow row;
    row.config = configs[ci];
    row.seeds = seeds;
    std::vector<double> stab, life, thr;
    for (auto seed : seeds) {
      SimConfig c = configs[ci];
      c.master_seed = seed;
      try {
        row.runs.push_back(run(c));
      } catch (const std::exception& e) {
        throw std::runtime_error("batch: config #" + std::to_string(ci) + " (" +
                                 std::string(to_string(c.protocol)) + "), seed " + std::to_string(seed) +
                                 ": " + e.what());
      }
      const auto& r = row.runs.back();
      stab.push_back(static_cast<double>(r.lifetimes.stability));
      life.push_back(static_cast<double>(r.lifetimes.lifetime));
      thr.push_back(static_cast<double>(r.throughput()));
    }
    row.stability = sample_stats(stab);
    row.lifetime = sample_stats(life);
    row.throughput = sample_stats(thr);
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline std::vector<std::uint64_t> seed_range(std::uint64_t count, std::uint64_t first = 0)
{
  std::vector<std::uint64_t> out(count);
  for (std::uint64_t i = 0; i < count; ++i) out[i] = first + i;
  return out;
}

inline constexpr std::string_view rounds_csv_header =
    "round,alive,ch_count,packets_to_ch,packets_to_bs,total_residual,forced_ch";
inline constexpr std::string_view compare_csv_header =
    "protocol,classification,stability_mean,stability_sd,lifetime_mean,lifetime_sd,throughput_mean";

inline std::string provenance_line(const SimConfig& c)
{
  return "# config_hash=" + config_hash(c) + " master_seed=" + std::to_string(c.master_seed);
}

/// Per-round CSV: provenance comment, header, one row per simulated round.
inline void write_rounds_csv(std::ostream& out, const SimConfig& config, const SimResult& result)
{
  out << provenance_line(config) << '\n' << rounds_csv_header << '\n';
  for (const auto& m : result.per_round) {
    out << m.round << ',' << m.alive_count << ',' << m.ch_count << ',' << m.packets_to_ch << ','
        << m.packets_to_bs << ',' << format_double(m.total_residual) << ',' << (m.forced_ch ? 1 : 0) << '\n';
  }
}

inline std::string summary_line(const SimResult& r)
{
  std::ostringstream s;
  s << "stability=" << r.lifetimes.stability << " instability=" << r.lifetimes.instability
    << " lifetime=" << r.lifetimes.lifetime << (r.lifetimes.censored ? " (censored)" : "")
    << " packets_to_ch=" << r.packets_to_ch << " packets_to_bs=" << r.packets_to_bs
    << " throughput=" << r.throughput() << " forced_rounds=" << r.forced_rounds;
  return s.str();
}

/// Hash over every resolved configuration of a batch.
inline std::string batch_hash(const BatchReport& report)
{
  std::string text;
  for (const auto& row : report.rows) text += serialize(row.config);
  return fnv1a_hex(text);
}

inline void write_compare_csv(std::ostream& out, const BatchReport& report)
{
  const auto& seeds = report.rows.front().seeds;
  out << "# config_hash=" << batch_hash(report) << " master_seed=" << seeds.front()
      << " seeds=" << seeds.size() << '\n';
  out << compare_csv_header << '\n';
  for (const auto& row : report.rows) {
    out << to_string(row.config.protocol) << ',' << classification(row.config.protocol) << ','
        << format_double(row.stability.mean) << ',' << format_double(row.stability.sd) << ','
        << format_double(row.lifetime.mean) << ',' << format_double(row.lifetime.sd) << ','
        << format_double(row.throughput.mean) << '\n';
  }
}

} // namespace heer
