#pragma once

#include <stdexcept>
#include <string>

namespace dialseg {

/// Malformed input data, schema violations, incompatible configurations.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Training diverged or could not produce a usable model.
class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dialseg
