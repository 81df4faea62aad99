#pragma once

#include <stdexcept>
#include <string>

namespace sreels {

// Error categories map onto the CLI exit codes: validation -> 2,
// numeric domain -> 3, capacity -> 4.

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sreels
