#ifndef HEATETA_ERROR_HPP
#define HEATETA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace heateta {

// Base class for all engine errors. Subclasses map onto the CLI exit codes:
// ParseError/ValidationError -> 2, BudgetError -> 3, CheckError -> 4.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (rationals, JSON documents, report payloads).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Structurally well-formed input that violates a mathematical precondition
// (tensor symmetries, dimensions, unsupported jet data, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// A computation was asked for more degrees than its inputs can certify.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& msg) : Error(msg) {}
};

// An internal exactness check failed (domain errors, broken invariants).
class CheckError : public Error {
 public:
  explicit CheckError(const std::string& msg) : Error(msg) {}
};

}  // namespace heateta

#endif
