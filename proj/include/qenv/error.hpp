#pragma once

#include <stdexcept>
#include <string>

namespace qenv {

/// Malformed input text (table, presentation, matrix, cochain, report).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a mathematical axiom.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured cap (steps, generators, entry size, time) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qenv
