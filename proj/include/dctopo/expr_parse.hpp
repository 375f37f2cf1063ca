#pragma once

#include <stdexcept>
#include <string>

#include "dctopo/pareto.hpp"

namespace dctopo {

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(std::size_t pos, const std::string& msg)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

/// Parses the construction-expression grammar:
///   expr := base | "L(" expr ")" | "Deg(" expr "," int ")"
///         | "Pow(" expr "," int ")" | "Prod(" expr "," expr ")"
///         | "Undir(" expr ")"
/// with bases named after their constructors, e.g. UniRing(1,4), Diamond.
/// Whitespace-insensitive; round-trips with print_expr.
TopoExprPtr parse_expr(const std::string& text);

}  // namespace dctopo
