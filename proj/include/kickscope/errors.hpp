#pragma once

#include <stdexcept>
#include <string>

namespace kickscope {

/// Raised when a geometry, grid, unit system or run configuration violates one
/// of its invariants. The message names the violated invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace kickscope
