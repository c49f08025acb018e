#pragma once

#include <stdexcept>
#include <string>

namespace hge {

/// Invalid shapes, flags or settings.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Id outside a table or vocabulary.
class LookupError : public std::out_of_range {
 public:
  explicit LookupError(const std::string& what) : std::out_of_range(what) {}
};

/// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure during optimisation (NaN / Inf loss).
class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hge
