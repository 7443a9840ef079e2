#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace dmx {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed point or matrix input. row() is the 0-based data row when the
// problem is inside the body, empty for header problems.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::optional<std::size_t> row = std::nullopt);
  std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  std::optional<std::size_t> row_;
};

// Input outside the kernel's domain (negative probabilities, zero
// coordinates under strict KL, non-binary data for the binary l-inf engine).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Size or shape mismatch between arguments.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Monomial budgets, integer overflow guards, table caps.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace dmx
