#pragma once

#include <stdexcept>
#include <string>

namespace gwnash {

/// Raised when an argument, file, or configuration violates a documented
/// precondition or invariant. The message names the offending field.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised for file-system failures while reading or writing artifacts.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gwnash
