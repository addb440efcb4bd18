#pragma once

#include <stdexcept>
#include <string>

namespace dialrl {

// Invalid or inconsistent configuration (missing checkpoints, empty filter
// results, mismatched catalog sizes). The CLI maps this to its own exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dialrl
