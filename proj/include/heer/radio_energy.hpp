#pragma once

#include <cmath>
#include <cstdint>

namespace heer {

/// First-order radio model coefficients. Defaults are the simulation table
/// values: 5 nJ/bit electronics, 10 pJ/bit/m^2 free space, 0.013 pJ/bit/m^4
/// multipath, 5 nJ/bit/signal aggregation.
struct RadioParams {
  double e_elec = 5e-9;      ///< J/bit, TX and RX electronics
  double e_fs = 10e-12;      ///< J/bit/m^2
  double e_mp = 0.013e-12;   ///< J/bit/m^4
  double e_da = 5e-9;        ///< J/bit/signal

  bool valid() const noexcept
  {
    return e_elec > 0 && e_fs > 0 && e_mp > 0 && e_da > 0 && std::isfinite(e_elec) &&
           std::isfinite(e_fs) && std::isfinite(e_mp) && std::isfinite(e_da);
  }
};

/// Distance at which the d^2 and d^4 amplifier terms cost the same.
inline double crossover_distance(const RadioParams& p) noexcept
{
  return std::sqrt(p.e_fs / p.e_mp);
}

inline double tx_energy(const RadioParams& p, std::uint64_t bits, double distance) noexcept
{
  const double b = static_cast<double>(bits);
  const double d2 = distance * distance;
  if (distance < crossover_distance(p)) return b * p.e_elec + b * p.e_fs * d2;
  return b * p.e_elec + b * p.e_mp * d2 * d2;
}

inline double rx_energy(const RadioParams& p, std::uint64_t bits) noexcept
{
  return static_cast<double>(bits) * p.e_elec;
}

inline double aggregation_energy(const RadioParams& p, std::uint64_t bits, std::uint64_t signals) noexcept
{
  return static_cast<double>(bits) * static_cast<double>(signals) * p.e_da;
}

} // namespace heer
