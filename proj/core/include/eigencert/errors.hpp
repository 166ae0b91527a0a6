// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGENCERT_ERRORS_HPP
#define EIGENCERT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigencert {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// A file could not be opened or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// Malformed input file; `line()` is 1-based, 0 when the error is not tied to a line.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Structurally readable input that violates a data invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

class SingularElement : public Error {
public:
  using Error::Error;
};

class EmptyProblem : public Error {
public:
  using Error::Error;
};

class DefinitenessError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
  std::vector<double> residuals_;
};

class RankError : public Error {
public:
  using Error::Error;
};

class MissingConstant : public Error {
public:
  using Error::Error;
};

class InvalidEnclosure : public Error {
public:
  using Error::Error;
};

class BoundNotApplicable : public Error {
public:
  using Error::Error;
};

class InadmissibleShift : public Error {
public:
  using Error::Error;
};

class GramInconsistency : public Error {
public:
  using Error::Error;
};

class NestingError : public Error {
public:
  using Error::Error;
};

}  // namespace eigencert

#endif  // EIGENCERT_ERRORS_HPP
