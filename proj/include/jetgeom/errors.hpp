#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jetgeom {

/// Malformed expression text. The offset is a byte index into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Unbound variable or a non-finite intermediate/final value.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent model, field, or configuration data.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A metric that is singular, ill-conditioned, or not positive definite.
class MetricDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace jetgeom
