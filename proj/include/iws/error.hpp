#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iws {

enum class ErrorKind {
  validation,
  enumeration_limit,
  truncation,
};

/// Library error. The kind drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error validation_error(const std::string& message) {
  return Error(ErrorKind::validation, message);
}

inline Error enumeration_limit_error(std::size_t n, std::size_t limit) {
  return Error(ErrorKind::enumeration_limit,
               "population too large for exact enumeration (N=" + std::to_string(n) +
                   " > limit " + std::to_string(limit) + "); use Monte Carlo simulation");
}

inline Error truncation_error(const std::string& message) {
  return Error(ErrorKind::truncation, message);
}

}  // namespace iws
