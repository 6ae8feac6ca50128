#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "pcf/errors.hpp"

namespace pcf {

using Int = mpz_class;
using Q = mpq_class;

Q make_q(const Int& num, const Int& den);
std::string q_str(const Q& q);
Q parse_q(const std::string& text);  // "-3/4", "12"
Int int_gcd(const Int& a, const Int& b);
Int int_lcm(const Int& a, const Int& b);

// Dense univariate polynomial over Q in the formal variable n. Coefficient i
// multiplies n^i; the highest stored coefficient is always nonzero.
class Poly {
 public:
  Poly() = default;
  Poly(const Q& c);  // NOLINT(google-explicit-constructor)
  Poly(long c);      // NOLINT(google-explicit-constructor)
  Poly(int c) : Poly(static_cast<long>(c)) {}  // NOLINT(google-explicit-constructor)

  static Poly from_coeffs(std::vector<Q> coeffs);
  static Poly var();
  static Poly monomial(const Q& c, int power);
  // Product of (n - r) over the given roots.
  static Poly from_roots(const std::vector<Q>& roots);

  // Degree of the zero polynomial is kZeroDegree.
  static constexpr int kZeroDegree = -1;
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<Q>& coeffs() const { return c_; }
  Q coeff(int i) const;
  Q lead() const;

  Q eval(const Q& x) const;
  Q eval(long x) const;
  // Integer evaluation; requires integer coefficients.
  Int eval_int(long x) const;
  bool has_integer_coeffs() const;

  // p(alpha*n + beta)
  Poly compose_affine(const Q& alpha, const Q& beta) const;
  Poly shift(const Q& s) const { return compose_affine(Q(1), s); }
  Poly compose(const Poly& q) const;

  // Positive rational c such that p/c has coprime integer coefficients, with
  // sign chosen so that p/c has positive leading coefficient.
  Q content() const;
  // p / content(), i.e. primitive integer polynomial with positive leading coefficient.
  Poly primitive() const;
  Poly monic() const;
  // Least common denominator of the coefficients.
  Int denominator_lcm() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Q& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Q& s) { return a *= s; }
  friend Poly operator*(const Q& s, Poly a) { return a *= s; }
  Poly pow(unsigned e) const;

  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }
  // Lexicographic on (degree, coefficients from the top) for deterministic ordering.
  bool operator<(const Poly& o) const;

  std::string str(const std::string& var = "n") const;
  std::vector<std::string> coeff_strings() const;

 private:
  void trim();
  std::vector<Q> c_;
};

// Quotient and remainder; throws MathError when q is zero.
std::pair<Poly, Poly> divrem(const Poly& p, const Poly& q);
// Exact division; throws MathError when the remainder is nonzero.
Poly exact_div(const Poly& p, const Poly& q);
bool divides(const Poly& d, const Poly& p);
// Primitive integer gcd with positive leading coefficient; gcd(0,0) = 0.
Poly gcd(const Poly& p, const Poly& q);
Poly lcm(const Poly& p, const Poly& q);
// Rational roots r with |r| <= bound and denominator dividing the leading coefficient
// (denominators capped at den_cap), repeated by multiplicity.
std::vector<Q> rational_roots(const Poly& p, long bound = 50, long den_cap = 64);
// Positive integer roots, ascending.
std::vector<long> positive_integer_roots(const Poly& p);

// Reduced rational function num/den. Invariants: den != 0, gcd(num, den) = 1,
// den has positive leading coefficient and integer content 1.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(1) {}
  RationalFunction(const Poly& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(const Q& c) : num_(c), den_(1) {}     // NOLINT(google-explicit-constructor)
  RationalFunction(long c) : num_(c), den_(1) {}         // NOLINT(google-explicit-constructor)
  RationalFunction(int c) : num_(c), den_(1) {}          // NOLINT(google-explicit-constructor)
  RationalFunction(const Poly& num, const Poly& den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  Poly as_poly() const;  // throws unless polynomial
  Q eval(const Q& x) const;  // throws PoleError for a zero denominator at integer x

  RationalFunction compose_affine(const Q& alpha, const Q& beta) const;
  RationalFunction shift(const Q& s) const { return compose_affine(Q(1), s); }

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction pow(int e) const;

  bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RationalFunction& o) const { return !(*this == o); }

  std::string str(const std::string& var = "n") const;

 private:
  Poly num_;
  Poly den_;
};

using RF = RationalFunction;

RF rf_reduce(const Poly& num, const Poly& den);

}  // namespace pcf
