#pragma once

#include <stdexcept>
#include <string>

namespace onebit {

// Invalid parameters or configuration values.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Vector/matrix shapes that do not line up.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what)
      : std::invalid_argument(what) {}
};

// The solver ended on an all-zero iterate, which cannot be normalized.
class DegenerateResultError : public std::runtime_error {
 public:
  explicit DegenerateResultError(const std::string& what)
      : std::runtime_error(what) {}
};

// Malformed or unreadable files.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace onebit
