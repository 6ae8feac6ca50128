#include "pcf/real.hpp"

#include <cmath>
#include <vector>

namespace pcf {

namespace {
mpfr_prec_t clamp_prec(long p) {
  if (p < MPFR_PREC_MIN) p = MPFR_PREC_MIN;
  return static_cast<mpfr_prec_t>(p);
}
mpfr_prec_t max_prec(const Real& a, const Real& b) { return std::max(mpfr_get_prec(a.raw()), mpfr_get_prec(b.raw())); }
}  // namespace

Real::Real(long prec_bits) {
  mpfr_init2(v_, clamp_prec(prec_bits));
  mpfr_set_zero(v_, 1);
}

Real::Real(const Real& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::from_q(const Q& q, long prec_bits) {
  Real r(prec_bits);
  mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real Real::from_int(const Int& z, long prec_bits) {
  Real r(prec_bits);
  mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real Real::from_long(long v, long prec_bits) {
  Real r(prec_bits);
  mpfr_set_si(r.v_, v, MPFR_RNDN);
  return r;
}

Real Real::from_double(double v, long prec_bits) {
  Real r(prec_bits);
  mpfr_set_d(r.v_, v, MPFR_RNDN);
  return r;
}

Real Real::from_string(const std::string& s, long prec_bits) {
  Real r(prec_bits);
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) throw InputError("malformed decimal number");
  return r;
}

Real Real::inf(long prec_bits) {
  Real r(prec_bits);
  mpfr_set_inf(r.v_, 1);
  return r;
}

Real Real::nan(long prec_bits) {
  Real r(prec_bits);
  mpfr_set_nan(r.v_);
  return r;
}

Real Real::with_prec(long prec_bits) const {
  Real r(prec_bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

std::string Real::str(int digits) const {
  if (is_nan()) return "nan";
  if (is_inf()) return sign() > 0 ? "inf" : "-inf";
  std::vector<char> buf(static_cast<size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v_);
  return std::string(buf.data());
}

std::string Real::fixed(int digits) const {
  if (!is_finite()) return str();
  int n = mpfr_snprintf(nullptr, 0, "%.*Rf", digits, v_);
  std::vector<char> buf(static_cast<size_t>(n) + 1);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rf", digits, v_);
  return std::string(buf.data());
}

Real Real::operator-() const {
  Real r(prec());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, long b) {
  Real r(a.prec());
  mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, long b) {
  Real r(a.prec());
  mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
Real operator+(const Real& a, long b) {
  Real r(a.prec());
  mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

Int Real::round_int() const {
  if (!is_finite()) throw MathError("cannot round a non-finite value");
  Int z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDNA);
  return z;
}

Real abs(const Real& x) {
  Real r(x.prec());
  mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  Real r(x.prec());
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real log2(const Real& x) {
  Real r(x.prec());
  mpfr_log2(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r(x.prec());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real pow2(long e, long prec_bits) {
  Real r(prec_bits);
  mpfr_set_ui_2exp(r.raw(), 1, static_cast<mpfr_exp_t>(e), MPFR_RNDN);
  return r;
}

Real pow10(long e, long prec_bits) {
  Real r(prec_bits);
  Real ten = Real::from_long(10, prec_bits);
  mpfr_pow_si(r.raw(), ten.raw(), e, MPFR_RNDN);
  return r;
}

double log_abs(const Int& z) {
  if (z == 0) return -INFINITY;
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

double log_abs(const Real& x) {
  if (x.is_zero()) return -INFINITY;
  if (!x.is_finite()) return INFINITY;
  long e = 0;
  double m = mpfr_get_d_2exp(&e, x.raw(), MPFR_RNDN);
  return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

long digits_to_bits(long digits) { return static_cast<long>(std::ceil(static_cast<double>(digits) * 3.3219280948873623)); }
long bits_to_digits(long bits) { return static_cast<long>(std::floor(static_cast<double>(bits) * 0.30102999566398120)); }

}  // namespace pcf
