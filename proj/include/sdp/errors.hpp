#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sdp {

// Invalid parameter or malformed input (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A region or lattice extent is too small or too large (CLI exit code 3).
class ExtentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two configurations that must share a seed key do not.
class CouplingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exhaustive enumeration refused because it would exceed its budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace diag {

using Sink = std::function<void(std::string_view)>;

// Replaces the warning sink; returns the previous one. Default writes to stderr.
Sink set_warning_sink(Sink sink);
void warn(std::string_view message);

}  // namespace diag
}  // namespace sdp
