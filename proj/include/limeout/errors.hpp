#pragma once

#include <stdexcept>
#include <string>

namespace limeout {

// Bad run configuration: unknown keys, out-of-range values, references to
// columns that do not exist.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Bad input data: missing files, malformed CSV rows, degenerate targets.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Training cannot proceed: single-class training data, empty active
// feature set after masking, and similar.
class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

// The weighted ridge system for a surrogate is singular and lambda is zero,
// so no fit exists.  Never silently regularized.
class DegenerateNeighborhoodError : public std::runtime_error {
 public:
  explicit DegenerateNeighborhoodError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace limeout
