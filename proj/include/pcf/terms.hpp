#pragma once

#include <string>
#include <vector>

#include "pcf/algebra.hpp"
#include "pcf/expr.hpp"

namespace pcf {

struct RationalSequence {
  long start_index = 0;  // index of terms[0]
  std::vector<Q> terms;
};

// A series summand in n, e.g. "(-1)^n/(2n+1)" or "n!/(2^(n+1) rising_factorial(1/2, n+1))".
// Beyond the polynomial syntax it accepts factorial(x) or x!, binom(a, b),
// rising_factorial(q, m) (alias pochhammer), harmonic(m), sum(k, lo, hi, expr),
// prod(k, lo, hi, expr) and integer powers c^e of any rational subexpression.
// The only free variable is n; sum/prod bind their first argument.
class TermExpression {
 public:
  explicit TermExpression(const std::string& text);
  const std::string& text() const { return text_; }
  // Exact value at n; throws PoleError on division by zero and InputError on domain errors.
  Q eval(long n) const;

 private:
  std::string text_;
  ExprPtr root_;
};

// Partial sums S_k = sum_{n=n0}^{k} t(n) for k = n0 .. n0+count-1.
RationalSequence eval_series_terms(const TermExpression& term, long n0, long count);
RationalSequence eval_series_terms(const std::string& term, long n0, long count);

}  // namespace pcf
