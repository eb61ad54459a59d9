#pragma once

#include <cstdint>
#include <random>

namespace heer {

/// SplitMix64 finalizer. Used to derive independent streams from a seed.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept
{
  return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept
{
  return mix64(mix64(a, b), c);
}

/// Maps 64 random bits onto [0, 1) with 53-bit resolution.
constexpr double to_unit(std::uint64_t bits) noexcept
{
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Stateless uniform draw keyed by (seed, a, b). Used where a value must be
/// reproducible without replaying a stream (election draws, sensor noise).
constexpr double keyed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept
{
  return to_unit(mix64(seed, a, b));
}

// Stream tags so that the deployment, election and environment draws never
// share a sequence.
enum class Stream : std::uint64_t { deploy = 1, election = 2, environment = 3 };

constexpr std::uint64_t stream_seed(std::uint64_t master, Stream s) noexcept
{
  return mix64(master, static_cast<std::uint64_t>(s));
}

/// Sequential generator with a portable output sequence. std::mt19937_64 is
/// fully specified by the standard; the distributions are not, so uniform
/// draws go through to_unit instead of std::uniform_real_distribution.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : m_engine(seed) {}

  double uniform() { return to_unit(m_engine()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n)
  {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = m_engine();
    while (x >= limit) x = m_engine();
    return x % n;
  }

private:
  std::mt19937_64 m_engine;
};

} // namespace heer
