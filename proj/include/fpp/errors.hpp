#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fpp {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed presentation text. `offset` is a byte offset into the input;
/// `line` and `column` are 1-based.
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t offset, std::size_t line,
             std::size_t column);

  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

/// Coset enumeration did not close within the coset cap.
class CosetLimitExceeded : public Error {
public:
  CosetLimitExceeded(std::size_t cosets_defined, std::size_t limit);

  std::size_t cosets_defined() const noexcept { return cosets_defined_; }
  std::size_t limit() const noexcept { return limit_; }

private:
  std::size_t cosets_defined_;
  std::size_t limit_;
};

/// An internal verification failed. Never caused by valid input.
class ConsistencyError : public Error {
public:
  using Error::Error;
};

/// d_lo * d_hi != 0 in a homology computation.
class CompositionNotZero : public ConsistencyError {
public:
  using ConsistencyError::ConsistencyError;
};

class OrderTooLarge : public Error {
public:
  OrderTooLarge(std::size_t order, std::size_t cap);
};

}  // namespace fpp
