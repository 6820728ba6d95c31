// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace faultloc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text could not be parsed. Carries a 1-based source location when
/// one is known (line 0 means "unknown").
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? format(what, line, column) : what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    std::string loc = "line " + std::to_string(line);
    if (column > 0) loc += ":" + std::to_string(column);
    return loc + ": " + what;
  }

  int line_;
  int column_;
};

/// A formula violates a structural invariant (variable 0, index past
/// num_vars, non-positive weight, ...).
class FormulaError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The hard part of a diagnosis problem is unsatisfiable: no set of
/// components can explain the observations.
class NoDiagnosisError : public Error {
 public:
  using Error::Error;
};

/// Like NoDiagnosisError, but the hard part becomes satisfiable once the
/// loop-unwinding assumptions are dropped.
class UnwindInsufficientError : public NoDiagnosisError {
 public:
  using NoDiagnosisError::NoDiagnosisError;
};

/// An enumeration exceeded its configured size cap.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

/// A cooperative deadline expired.
class TimeoutError : public Error {
 public:
  using Error::Error;
};

}  // namespace faultloc
