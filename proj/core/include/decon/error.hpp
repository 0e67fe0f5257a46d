#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace decon {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed mesh text. `line()` is 1-based; 0 means end of input.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Mesh violates a structural invariant (index range, unused vertex, open boundary, ...).
class MeshError : public Error {
 public:
  using Error::Error;
};

class DegenerateSimplexError : public MeshError {
 public:
  DegenerateSimplexError(std::size_t simplex, double measure)
      : MeshError("degenerate simplex " + std::to_string(simplex) +
                  " (measure " + std::to_string(measure) + ")"),
        simplex_(simplex) {}
  std::size_t simplex() const noexcept { return simplex_; }

 private:
  std::size_t simplex_;
};

/// Inconsistent domain description or operator input.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Linear solve failed: singular or infeasible system.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, long rank_estimate = -1)
      : Error(what), rank_(rank_estimate) {}
  /// Numerical rank of the offending matrix, or -1 when not estimated.
  long rank_estimate() const noexcept { return rank_; }

 private:
  long rank_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace decon
