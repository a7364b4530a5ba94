#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace csam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the PDDL/trajectory readers; line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnsupportedConstruct : public Error {
 public:
  explicit UnsupportedConstruct(std::string construct)
      : Error("unsupported construct: " + construct),
        construct_(std::move(construct)) {}

  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class TypeMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownAction : public Error {
 public:
  using Error::Error;
};

class UnknownFluent : public Error {
 public:
  using Error::Error;
};

class IncompleteState : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  PreconditionViolated(const std::string& message, std::size_t step)
      : Error(message), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class ConflictingEffects : public Error {
 public:
  using Error::Error;
};

// Input model declares two effects with the same result literal but
// different antecedents.
class DisjunctiveAntecedent : public Error {
 public:
  using Error::Error;
};

class AmbiguousBinding : public Error {
 public:
  using Error::Error;
};

class NoBinding : public Error {
 public:
  using Error::Error;
};

class UniverseTooLarge : public Error {
 public:
  using Error::Error;
};

class UniverseMismatch : public Error {
 public:
  using Error::Error;
};

// PosAnte outgrew its combinatorial bound; indicates a learner bug.
class SizeBoundViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace csam
