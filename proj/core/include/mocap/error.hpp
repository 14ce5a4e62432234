#pragma once

#include <stdexcept>

namespace mocap {

/// Config value out of range, or unknown config key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unreadable/unwritable path or malformed file.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Validated data violates a documented invariant.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace mocap
