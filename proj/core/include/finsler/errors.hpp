#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finsler {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression text. `offset` is the 0-based character position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Evaluation outside the real domain of an operation (log of a non-positive
// number, division by zero, ...), or outside a metric family's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// a(x) or g(x, y) failed the positive-definiteness factorization.
// `pivot` is 1-based.
class DegenerateMetricError : public Error {
 public:
  DegenerateMetricError(const std::string& what, std::size_t pivot)
      : Error(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class ZeroDirectionError : public Error {
 public:
  ZeroDirectionError() : Error("direction y must be nonzero") {}
};

class SingularCoefficientError : public Error {
 public:
  using Error::Error;
};

}  // namespace finsler
