#pragma once

#include <stdexcept>
#include <string>

namespace streamfec {

/// Caller passed malformed input (wrong length, mixed fields, zero inverse, ...).
struct UsageError : std::invalid_argument {
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Code parameters violate the construction constraints.
struct ParameterError : std::invalid_argument {
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Received symbols contradict the code (this is an erasure decoder, not an
/// error decoder).
struct IntegrityError : std::runtime_error {
  explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

/// More unknowns than the punctured system can carry.
struct CapacityError : std::invalid_argument {
  explicit CapacityError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace streamfec
