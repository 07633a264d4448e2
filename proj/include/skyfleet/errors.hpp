#pragma once

#include <stdexcept>

namespace skyfleet {

/// Configuration rejected by validation or infeasible for generation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No path exists between two cells under the active obstacle rule.
class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read, written or parsed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace skyfleet
