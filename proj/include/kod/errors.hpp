#pragma once

#include <stdexcept>
#include <string>

namespace kod {

/// Arithmetic failure such as division by zero.
struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input that is well formed but mathematically invalid (J^2 != -I,
/// non-dual frame/coframe, ...). Maps to CLI exit status 1.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Syntax error in an expression or spec file.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what), line(line), column(column) {}
  int line;
  int column;
};

/// Request outside the supported class of manifolds/structures.
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Internal invariant breach. Maps to CLI exit status 2.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace kod
