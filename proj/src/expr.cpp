#include "pcf/expr.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace pcf {

namespace {

const std::set<std::string>& function_names() {
  static const std::set<std::string> names = {"factorial", "binom",     "binomial", "rising_factorial",
                                              "pochhammer", "harmonic", "sum",      "fact", "prod"};
  return names;
}

ExprPtr make_num(const Q& v, std::size_t off) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Num;
  e->value = v;
  e->offset = off;
  return e;
}

ExprPtr make_node(Expr::Kind k, std::vector<ExprPtr> args, std::size_t off, std::string name = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->args = std::move(args);
  e->offset = off;
  e->name = std::move(name);
  return e;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  ExprPtr parse() {
    skip();
    if (pos_ >= s_.size()) throw ParseError(pos_, "empty expression");
    ExprPtr e = expr();
    skip();
    if (pos_ < s_.size()) throw ParseError(pos_, std::string("unexpected character '") + s_[pos_] + "'");
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool peek_pow() {
    skip();
    if (pos_ >= s_.size()) return false;
    if (s_[pos_] == '^') return true;
    return s_[pos_] == '*' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '*';
  }
  bool starts_atom() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
           c == '(';
  }

  ExprPtr expr() {
    std::size_t off = pos_;
    ExprPtr lhs = term();
    for (;;) {
      skip();
      if (peek('+')) {
        ++pos_;
        lhs = make_node(Expr::Kind::Add, {lhs, term()}, off);
      } else if (peek('-')) {
        ++pos_;
        lhs = make_node(Expr::Kind::Sub, {lhs, term()}, off);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    std::size_t off = pos_;
    ExprPtr lhs = unary();
    for (;;) {
      skip();
      if (peek('*') && !peek_pow()) {
        ++pos_;
        lhs = make_node(Expr::Kind::Mul, {lhs, unary()}, off);
      } else if (peek('/')) {
        ++pos_;
        lhs = make_node(Expr::Kind::Div, {lhs, unary()}, off);
      } else if (starts_atom()) {
        lhs = make_node(Expr::Kind::Mul, {lhs, power()}, off);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    skip();
    std::size_t off = pos_;
    if (peek('-')) {
      ++pos_;
      return make_node(Expr::Kind::Neg, {unary()}, off);
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  ExprPtr power() {
    skip();
    std::size_t off = pos_;
    ExprPtr base = postfix();
    if (peek_pow()) {
      pos_ += (s_[pos_] == '^') ? 1 : 2;
      ExprPtr ex = unary();  // right associative; allows n^-1 and c^(-2n)
      return make_node(Expr::Kind::Pow, {base, ex}, off);
    }
    return base;
  }

  ExprPtr postfix() {
    std::size_t off = pos_;
    ExprPtr a = atom();
    while (peek('!')) {
      ++pos_;
      a = make_node(Expr::Kind::Call, {a}, off, "factorial");
    }
    return a;
  }

  ExprPtr atom() {
    skip();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    std::size_t off = pos_;
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '.') throw ParseError(pos_, "decimal literals are not supported");
      Int v(s_.substr(start, pos_ - start), 10);
      return make_num(Q(v), off);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      if (is_function_name(name) && peek('(')) {
        ++pos_;
        std::vector<ExprPtr> args;
        if (!peek(')')) {
          args.push_back(expr());
          while (peek(',')) {
            ++pos_;
            args.push_back(expr());
          }
        }
        if (!peek(')')) throw ParseError(pos_, "expected ')' to close call to " + name);
        ++pos_;
        return make_node(Expr::Kind::Call, std::move(args), off, name);
      }
      auto v = std::make_shared<Expr>();
      v->kind = Expr::Kind::Var;
      v->name = name;
      v->offset = off;
      return v;
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!peek(')')) throw ParseError(pos_, "expected ')'");
      ++pos_;
      return e;
    }
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

long integer_exponent(const Q& e, std::size_t off) {
  if (e.get_den() != 1 || !e.get_num().fits_slong_p()) throw ParseError(off, "exponent must be a small integer");
  return e.get_num().get_si();
}

template <class T>
T power_of(const T& base, long e, const T& one) {
  T result = one, b = base;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  while (k) {
    if (k & 1UL) result = result * b;
    k >>= 1U;
    if (k) b = b * b;
  }
  return result;
}

}  // namespace

bool is_function_name(const std::string& name) { return function_names().count(name) > 0; }

ExprPtr parse_expr(const std::string& text) { return Parser(text).parse(); }

RF expr_to_rf(const ExprPtr& e, const std::string& var) {
  switch (e->kind) {
    case Expr::Kind::Num:
      return RF(e->value);
    case Expr::Kind::Var:
      if (e->name != var) throw ParseError(e->offset, "unknown symbol '" + e->name + "' (expected '" + var + "')");
      return RF(Poly::var());
    case Expr::Kind::Add:
      return expr_to_rf(e->args[0], var) + expr_to_rf(e->args[1], var);
    case Expr::Kind::Sub:
      return expr_to_rf(e->args[0], var) - expr_to_rf(e->args[1], var);
    case Expr::Kind::Mul:
      return expr_to_rf(e->args[0], var) * expr_to_rf(e->args[1], var);
    case Expr::Kind::Div: {
      RF d = expr_to_rf(e->args[1], var);
      if (d.is_zero()) throw ParseError(e->args[1]->offset, "division by zero");
      return expr_to_rf(e->args[0], var) / d;
    }
    case Expr::Kind::Neg:
      return -expr_to_rf(e->args[0], var);
    case Expr::Kind::Pow: {
      RF ex = expr_to_rf(e->args[1], var);
      if (!ex.is_polynomial() || ex.num().degree() > 0)
        throw ParseError(e->args[1]->offset, "exponent must be an integer constant");
      long k = integer_exponent(ex.as_poly().coeff(0), e->args[1]->offset);
      RF base = expr_to_rf(e->args[0], var);
      if (k < 0 && base.is_zero()) throw ParseError(e->offset, "zero raised to a negative power");
      RF r = power_of(base, k, RF(1L));
      return k < 0 ? RF(1L) / r : r;
    }
    case Expr::Kind::Call:
      throw ParseError(e->offset, "function '" + e->name + "' is not allowed in a polynomial expression");
  }
  throw ParseError(e->offset, "invalid expression");
}

RF parse_rf(const std::string& text, const std::string& var) { return expr_to_rf(parse_expr(text), var); }

Poly parse_poly(const std::string& text, const std::string& var) {
  RF f = parse_rf(text, var);
  if (!f.is_polynomial()) throw ParseError(0, "expected a polynomial in " + var + ", got " + f.str(var));
  return f.as_poly();
}

MvRF expr_to_mvrf(const ExprPtr& e, const std::vector<std::string>& vars) {
  std::size_t nv = vars.size();
  switch (e->kind) {
    case Expr::Kind::Num:
      return MvRF(nv, e->value);
    case Expr::Kind::Var: {
      auto it = std::find(vars.begin(), vars.end(), e->name);
      if (it == vars.end()) throw ParseError(e->offset, "unknown symbol '" + e->name + "'");
      return MvRF(MvPoly::variable(nv, static_cast<std::size_t>(it - vars.begin())));
    }
    case Expr::Kind::Add:
      return expr_to_mvrf(e->args[0], vars) + expr_to_mvrf(e->args[1], vars);
    case Expr::Kind::Sub:
      return expr_to_mvrf(e->args[0], vars) - expr_to_mvrf(e->args[1], vars);
    case Expr::Kind::Mul:
      return expr_to_mvrf(e->args[0], vars) * expr_to_mvrf(e->args[1], vars);
    case Expr::Kind::Div: {
      MvRF d = expr_to_mvrf(e->args[1], vars);
      if (d.is_zero()) throw ParseError(e->args[1]->offset, "division by zero");
      return expr_to_mvrf(e->args[0], vars) / d;
    }
    case Expr::Kind::Neg:
      return -expr_to_mvrf(e->args[0], vars);
    case Expr::Kind::Pow: {
      MvRF ex = expr_to_mvrf(e->args[1], vars);
      if (!ex.num().is_constant() || !ex.den().is_constant())
        throw ParseError(e->args[1]->offset, "exponent must be an integer constant");
      long k = integer_exponent(ex.num().constant_value() / ex.den().constant_value(), e->args[1]->offset);
      MvRF base = expr_to_mvrf(e->args[0], vars);
      MvRF r = power_of(base, k, MvRF(nv, Q(1)));
      return k < 0 ? MvRF(nv, Q(1)) / r : r;
    }
    case Expr::Kind::Call:
      throw ParseError(e->offset, "function '" + e->name + "' is not allowed in a rational expression");
  }
  throw ParseError(e->offset, "invalid expression");
}

MvRF parse_mvrf(const std::string& text, const std::vector<std::string>& vars) {
  return expr_to_mvrf(parse_expr(text), vars);
}

static void collect_vars(const ExprPtr& e, std::set<std::string>& out) {
  if (e->kind == Expr::Kind::Var) out.insert(e->name);
  for (const auto& a : e->args) collect_vars(a, out);
}

std::vector<std::string> free_variables(const ExprPtr& e) {
  std::set<std::string> s;
  collect_vars(e, s);
  return {s.begin(), s.end()};
}

}  // namespace pcf
