#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pcf/algebra.hpp"
#include "pcf/mvpoly.hpp"

namespace pcf {

// Expression tree shared by the polynomial syntax and the series-term grammar.
struct Expr {
  enum class Kind { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Call };
  Kind kind = Kind::Num;
  Q value;           // Num
  std::string name;  // Var / Call
  std::vector<std::shared_ptr<const Expr>> args;
  std::size_t offset = 0;  // byte offset of the node in the source text
};
using ExprPtr = std::shared_ptr<const Expr>;

// Grammar: integers and rationals, identifiers, + - * / ^ (also **), parentheses,
// postfix ! for factorial, function calls name(args...), and implicit
// multiplication between adjacent factors ("3n", "2(n+1)", "n(n+1)").
// Whitespace is ignored. Errors carry the byte offset.
ExprPtr parse_expr(const std::string& text);

// Names treated as function calls when followed by '('.
bool is_function_name(const std::string& name);

// Convert to a univariate rational function in `var`; any other identifier or a
// function call is an error reported at its byte offset.
RF expr_to_rf(const ExprPtr& e, const std::string& var = "n");
RF parse_rf(const std::string& text, const std::string& var = "n");
Poly parse_poly(const std::string& text, const std::string& var = "n");

MvRF expr_to_mvrf(const ExprPtr& e, const std::vector<std::string>& vars);
MvRF parse_mvrf(const std::string& text, const std::vector<std::string>& vars);

// Identifiers appearing in an expression (excluding function names).
std::vector<std::string> free_variables(const ExprPtr& e);

}  // namespace pcf
