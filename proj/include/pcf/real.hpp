#pragma once

#include <mpfr.h>

#include <string>

#include "pcf/algebra.hpp"

namespace pcf {

// RAII wrapper around an MPFR float. Binary operations produce a result whose
// precision is the larger of the operand precisions; rounding is to nearest.
class Real {
 public:
  explicit Real(long prec_bits = 128);
  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  static Real from_q(const Q& q, long prec_bits);
  static Real from_int(const Int& z, long prec_bits);
  static Real from_long(long v, long prec_bits);
  static Real from_double(double v, long prec_bits);
  // Decimal string (e.g. "3.14159..."); throws InputError on malformed input.
  static Real from_string(const std::string& s, long prec_bits);
  static Real inf(long prec_bits);
  static Real nan(long prec_bits);

  long prec() const { return static_cast<long>(mpfr_get_prec(v_)); }
  Real with_prec(long prec_bits) const;
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_inf() const { return mpfr_inf_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // Binary exponent e with 0.5 <= |x| / 2^e < 1 (for nonzero finite x).
  long exponent2() const { return static_cast<long>(mpfr_get_exp(v_)); }
  // Scientific decimal string with `digits` significant digits.
  std::string str(int digits = 30) const;
  // Fixed notation with `digits` after the point.
  std::string fixed(int digits) const;

  Real operator-() const;
  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  Real& operator+=(const Real& o) { return *this = *this + o; }
  Real& operator-=(const Real& o) { return *this = *this - o; }
  Real& operator*=(const Real& o) { return *this = *this * o; }
  Real& operator/=(const Real& o) { return *this = *this / o; }
  friend Real operator*(const Real& a, long b);
  friend Real operator/(const Real& a, long b);
  friend Real operator+(const Real& a, long b);

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  // Nearest integer (ties away from zero).
  Int round_int() const;

 private:
  mpfr_t v_;
};

Real abs(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real sqrt(const Real& x);
Real pow2(long e, long prec_bits);
Real pow10(long e, long prec_bits);
// Natural log of |z| for a big integer without materializing a huge float.
double log_abs(const Int& z);
double log_abs(const Real& x);

long digits_to_bits(long digits);
long bits_to_digits(long bits);

}  // namespace pcf
