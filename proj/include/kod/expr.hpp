// Parser for the expression grammar used by spec files and CLI arguments:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' ['-'] integer)?
//   atom   := integer | 'i' | 'pi' | 'π' | identifier | '(' expr ')'
//
// Whitespace is ignored. Division by a non-constant yields a rational
// function; the printers in poly.hpp produce text this parser reads back.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "kod/poly.hpp"

namespace kod {

/// Parses an expression. When `declared` is given, identifiers outside it
/// are rejected. Errors are ParseError with 1-based line/column.
RatFn parse_expression(std::string_view text, const std::set<std::string>* declared = nullptr);

/// Parses and requires a polynomial result.
Poly parse_polynomial(std::string_view text, const std::set<std::string>* declared = nullptr);

/// Parses and requires a constant (no symbols).
Scalar parse_scalar(std::string_view text);

}  // namespace kod
