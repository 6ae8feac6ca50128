#include "pcf/terms.hpp"

#include <map>
#include <optional>
#include <set>

namespace pcf {

namespace {

using Env = std::map<std::string, long>;

long as_long(const Q& v, const ExprPtr& e, const char* what) {
  if (v.get_den() != 1 || !v.get_num().fits_slong_p())
    throw InputError(std::string(what) + " must be an integer (at byte " + std::to_string(e->offset) + ")");
  return v.get_num().get_si();
}

void validate(const ExprPtr& e, std::set<std::string>& bound) {
  switch (e->kind) {
    case Expr::Kind::Var:
      if (!bound.count(e->name)) throw ParseError(e->offset, "unknown symbol '" + e->name + "'");
      return;
    case Expr::Kind::Call: {
      static const std::map<std::string, std::size_t> arity = {
          {"factorial", 1}, {"fact", 1},     {"binom", 2}, {"binomial", 2}, {"rising_factorial", 2},
          {"pochhammer", 2}, {"harmonic", 1}, {"sum", 4},   {"prod", 4}};
      auto it = arity.find(e->name);
      if (it == arity.end()) throw ParseError(e->offset, "unknown function '" + e->name + "'");
      if (e->args.size() != it->second)
        throw ParseError(e->offset, e->name + " expects " + std::to_string(it->second) + " arguments");
      if (e->name == "sum" || e->name == "prod") {
        const ExprPtr& var = e->args[0];
        if (var->kind != Expr::Kind::Var) throw ParseError(var->offset, "expected a summation variable");
        validate(e->args[1], bound);
        validate(e->args[2], bound);
        bool fresh = bound.insert(var->name).second;
        validate(e->args[3], bound);
        if (fresh) bound.erase(var->name);
        return;
      }
      for (const auto& a : e->args) validate(a, bound);
      return;
    }
    default:
      for (const auto& a : e->args) validate(a, bound);
  }
}

Q ipow(const Q& base, long e, long n) {
  if (e < 0 && base == 0) throw PoleError(n, "zero raised to a negative power in series term");
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  Int num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), k);
  return e < 0 ? make_q(den, num) : make_q(num, den);
}

Q eval_expr(const ExprPtr& e, Env& env, long n) {
  switch (e->kind) {
    case Expr::Kind::Num:
      return e->value;
    case Expr::Kind::Var:
      return Q(env.at(e->name));
    case Expr::Kind::Add:
      return eval_expr(e->args[0], env, n) + eval_expr(e->args[1], env, n);
    case Expr::Kind::Sub:
      return eval_expr(e->args[0], env, n) - eval_expr(e->args[1], env, n);
    case Expr::Kind::Mul:
      return eval_expr(e->args[0], env, n) * eval_expr(e->args[1], env, n);
    case Expr::Kind::Neg:
      return -eval_expr(e->args[0], env, n);
    case Expr::Kind::Div: {
      Q d = eval_expr(e->args[1], env, n);
      if (d == 0) throw PoleError(n, "division by zero in series term");
      return eval_expr(e->args[0], env, n) / d;
    }
    case Expr::Kind::Pow: {
      Q b = eval_expr(e->args[0], env, n);
      long k = as_long(eval_expr(e->args[1], env, n), e->args[1], "exponent");
      return ipow(b, k, n);
    }
    case Expr::Kind::Call:
      break;
  }
  const std::string& f = e->name;
  if (f == "factorial" || f == "fact") {
    long x = as_long(eval_expr(e->args[0], env, n), e->args[0], "factorial argument");
    if (x < 0) throw PoleError(n, "factorial of a negative integer");
    Int r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(x));
    return Q(r);
  }
  if (f == "binom" || f == "binomial") {
    Q top = eval_expr(e->args[0], env, n);
    long k = as_long(eval_expr(e->args[1], env, n), e->args[1], "binomial lower index");
    if (k < 0) return Q(0);
    if (top.get_den() == 1) {
      Int r;
      mpz_bin_ui(r.get_mpz_t(), top.get_num().get_mpz_t(), static_cast<unsigned long>(k));
      return Q(r);
    }
    Q acc(1);
    for (long i = 0; i < k; ++i) acc = acc * (top - i) / Q(i + 1);
    return acc;
  }
  if (f == "rising_factorial" || f == "pochhammer") {
    Q q = eval_expr(e->args[0], env, n);
    long m = as_long(eval_expr(e->args[1], env, n), e->args[1], "rising factorial length");
    if (m < 0) throw InputError("rising factorial with negative length at n=" + std::to_string(n));
    // Integer and half-integer bases keep numerator and denominator as integers throughout.
    Int num = 1, den = 1;
    for (long i = 0; i < m; ++i) {
      Q t = q + i;
      num *= t.get_num();
      den *= t.get_den();
    }
    return make_q(num, den);
  }
  if (f == "harmonic") {
    long m = as_long(eval_expr(e->args[0], env, n), e->args[0], "harmonic index");
    Q acc(0);
    for (long i = 1; i <= m; ++i) acc += Q(1, i);
    return acc;
  }
  // sum / prod
  const std::string& var = e->args[0]->name;
  long lo = as_long(eval_expr(e->args[1], env, n), e->args[1], "lower bound");
  long hi = as_long(eval_expr(e->args[2], env, n), e->args[2], "upper bound");
  bool is_sum = f == "sum";
  std::optional<long> saved;
  if (auto it = env.find(var); it != env.end()) saved = it->second;
  Q acc(is_sum ? 0 : 1);
  for (long k = lo; k <= hi; ++k) {
    env[var] = k;
    Q v = eval_expr(e->args[3], env, n);
    if (is_sum)
      acc += v;
    else
      acc *= v;
  }
  if (saved)
    env[var] = *saved;
  else
    env.erase(var);
  return acc;
}

}  // namespace

TermExpression::TermExpression(const std::string& text) : text_(text), root_(parse_expr(text)) {
  std::set<std::string> bound{"n"};
  validate(root_, bound);
}

Q TermExpression::eval(long n) const {
  Env env{{"n", n}};
  return eval_expr(root_, env, n);
}

RationalSequence eval_series_terms(const TermExpression& term, long n0, long count) {
  RationalSequence s;
  s.start_index = n0;
  Q acc(0);
  for (long k = n0; k < n0 + count; ++k) {
    acc += term.eval(k);
    s.terms.push_back(acc);
  }
  return s;
}

RationalSequence eval_series_terms(const std::string& term, long n0, long count) {
  return eval_series_terms(TermExpression(term), n0, count);
}

}  // namespace pcf
