#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cscal/symbolic/expr.hpp"

namespace cscal::sym {

// Names visible to the expression parser.
struct ParseContext {
  std::vector<std::string> coordinates;
  std::vector<std::string> parameters;
  std::map<std::string, std::size_t> functions;  // name -> arity
  // Accept any identifier: bare names become symbols, applied names functions.
  bool allow_undeclared = false;
};

// Grammar: infix + - * / ^, integer/decimal literals, identifiers, f(args),
// sin/cos/exp/log/sqrt, diff(e, c, ...), D[i,...](f)(args), parentheses.
// Exponents must be integers or halves of integers. Errors carry line/column,
// offset by `line` and `column` so callers can report file positions.
Expr parse_expr(std::string_view text, const ParseContext& ctx, int line = 1, int column = 1);

}  // namespace cscal::sym
