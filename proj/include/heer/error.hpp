#pragma once

#include <stdexcept>
#include <string>

namespace heer {

/// Raised for any invalid configuration, before a simulation starts.
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace heer
