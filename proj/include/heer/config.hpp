#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "heer/error.hpp"
#include "heer/sim_engine.hpp"

namespace heer {

/// Shortest round-trip decimal form, independent of the C locale.
inline std::string format_double(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view key, std::string_view text)
{
  text = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty())
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  return v;
}

inline std::uint64_t parse_uint(std::string_view key, std::string_view text)
{
  text = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty())
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

inline std::vector<double> parse_list(std::string_view key, std::string_view text)
{
  std::vector<double> out;
  text = trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

} // namespace detail

/// Flat key/value view of a SimConfig. Keys are the file and --set vocabulary.
class ConfigBuilder {
public:
  ConfigBuilder() = default;
  explicit ConfigBuilder(SimConfig base) : m_config(std::move(base)) {}

  /// Applies one `key = value` setting. Unknown keys and malformed values
  /// raise ConfigError naming the key.
  void set(std::string_view key, std::string_view value)
  {
    using detail::parse_double;
    using detail::parse_uint;
    key = detail::trim(key);
    value = detail::trim(value);
    auto& c = m_config;
    const std::string k(key);

    if (k == "side_length") c.field.side_length = parse_double(k, value);
    else if (k == "node_count") c.field.node_count = parse_uint(k, value);
    else if (k == "bs_x") m_bs_x = parse_double(k, value);
    else if (k == "bs_y") m_bs_y = parse_double(k, value);
    else if (k == "initial_energy") c.field.initial_energy = parse_double(k, value);
    else if (k == "advanced_fraction") c.field.advanced_fraction = parse_double(k, value);
    else if (k == "energy_factor") c.field.energy_factor = parse_double(k, value);
    else if (k == "multi_level_factors") {
      if (value.empty()) c.field.multi_level_factors.reset();
      else c.field.multi_level_factors = detail::parse_list(k, value);
    }
    else if (k == "e_elec") c.radio.e_elec = parse_double(k, value);
    else if (k == "e_fs") c.radio.e_fs = parse_double(k, value);
    else if (k == "e_mp") c.radio.e_mp = parse_double(k, value);
    else if (k == "e_da") c.radio.e_da = parse_double(k, value);
    else if (k == "protocol") c.protocol = parse_protocol(value);
    else if (k == "ht") c.thresholds.ht = parse_double(k, value);
    else if (k == "st") c.thresholds.st = parse_double(k, value);
    else if (k == "soft_mode") {
      if (value == "absolute") c.thresholds.soft_mode = SoftMode::absolute;
      else if (value == "signed") c.thresholds.soft_mode = SoftMode::signed_rise;
      else throw ConfigError("soft_mode: expected 'absolute' or 'signed'");
    }
    else if (k == "p_opt") c.election.p_opt = parse_double(k, value);
    else if (k == "avg_energy") {
      if (value == "exact") c.avg_energy = AvgEnergyMode::exact;
      else if (value == "linear_decay") c.avg_energy = AvgEnergyMode::linear_decay;
      else throw ConfigError("avg_energy: expected 'exact' or 'linear_decay'");
    }
    else if (k == "baseline_low") c.env.baseline_low = parse_double(k, value);
    else if (k == "baseline_high") c.env.baseline_high = parse_double(k, value);
    else if (k == "hot_region_fraction") c.env.hot_region_fraction = parse_double(k, value);
    else if (k == "step_magnitude") c.env.step_magnitude = parse_double(k, value);
    else if (k == "noise_seed") c.env.noise_seed = parse_uint(k, value);
    else if (k == "data_packet_bits") c.data_packet_bits = parse_uint(k, value);
    else if (k == "control_packet_bits") c.control_packet_bits = parse_uint(k, value);
    else if (k == "frames_per_round") c.frames_per_round = parse_uint(k, value);
    else if (k == "sensing_energy") c.sensing_energy = parse_double(k, value);
    else if (k == "max_rounds") c.max_rounds = parse_uint(k, value);
    else if (k == "seed") c.master_seed = parse_uint(k, value);
    else throw ConfigError(k + ": unknown key");
  }

  /// Applies a `key=value` token as given on the command line.
  void set_assignment(std::string_view token)
  {
    const auto eq = token.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(std::string(detail::trim(token)) + ": expected key=value");
    set(token.substr(0, eq), token.substr(eq + 1));
  }

  /// Reads `key = value` lines; `#` starts a comment.
  void load(std::istream& in, const std::string& origin = "config")
  {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string_view view(line);
      if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
      view = detail::trim(view);
      if (view.empty()) continue;
      const auto eq = view.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
      set(view.substr(0, eq), view.substr(eq + 1));
    }
  }

  void load_file(const std::string& path)
  {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    load(in, path);
  }

  /// Resolved and validated configuration.
  SimConfig build() const
  {
    SimConfig c = m_config;
    if (m_bs_x || m_bs_y) {
      const double centre = c.field.side_length / 2.0;
      c.field.bs_position = Point{m_bs_x.value_or(centre), m_bs_y.value_or(centre)};
    }
    c.validate();
    return c;
  }

private:
  SimConfig m_config;
  std::optional<double> m_bs_x;
  std::optional<double> m_bs_y;
};

/// Canonical `key = value` listing of every setting, one per line.
inline std::string serialize(const SimConfig& c)
{
  std::ostringstream out;
  auto put = [&](std::string_view k, const std::string& v) { out << k << " = " << v << '\n'; };
  const auto bs = c.field.base_station();
  put("side_length", format_double(c.field.side_length));
  put("node_count", std::to_string(c.field.node_count));
  put("bs_x", format_double(bs.x));
  put("bs_y", format_double(bs.y));
  put("initial_energy", format_double(c.field.initial_energy));
  put("advanced_fraction", format_double(c.field.advanced_fraction));
  put("energy_factor", format_double(c.field.energy_factor));
  if (c.field.multi_level_factors) {
    std::string list;
    for (double a : *c.field.multi_level_factors) {
      if (!list.empty()) list += ',';
      list += format_double(a);
    }
    put("multi_level_factors", list);
  }
  put("e_elec", format_double(c.radio.e_elec));
  put("e_fs", format_double(c.radio.e_fs));
  put("e_mp", format_double(c.radio.e_mp));
  put("e_da", format_double(c.radio.e_da));
  put("protocol", std::string(to_string(c.protocol)));
  put("ht", format_double(c.thresholds.ht));
  put("st", format_double(c.thresholds.st));
  put("soft_mode", c.thresholds.soft_mode == SoftMode::absolute ? "absolute" : "signed");
  put("p_opt", format_double(c.election.p_opt));
  put("avg_energy", c.avg_energy == AvgEnergyMode::exact ? "exact" : "linear_decay");
  put("baseline_low", format_double(c.env.baseline_low));
  put("baseline_high", format_double(c.env.baseline_high));
  put("hot_region_fraction", format_double(c.env.hot_region_fraction));
  put("step_magnitude", format_double(c.env.step_magnitude));
  put("noise_seed", std::to_string(c.env.noise_seed));
  put("data_packet_bits", std::to_string(c.data_packet_bits));
  put("control_packet_bits", std::to_string(c.control_packet_bits));
  put("frames_per_round", std::to_string(c.frames_per_round));
  put("sensing_energy", format_double(c.sensing_energy));
  put("max_rounds", std::to_string(c.max_rounds));
  put("seed", std::to_string(c.master_seed));
  return out.str();
}

/// 64-bit FNV-1a digest as 16 hex digits.
inline std::string fnv1a_hex(std::string_view text)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static constexpr char digits[] = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  return std::string(buf, 16);
}

inline std::string config_hash(const SimConfig& c)
{
  return fnv1a_hex(serialize(c));
}

} // namespace heer
