#include "pcf/algebra.hpp"

#include <numeric>

#include <algorithm>
#include <sstream>

namespace pcf {

Q make_q(const Int& num, const Int& den) {
  if (den == 0) throw MathError("rational with zero denominator");
  Q q(num, den);
  q.canonicalize();
  return q;
}

std::string q_str(const Q& q) { return q.get_str(10); }

Q parse_q(const std::string& text) {
  Q q;
  if (q.set_str(text, 10) != 0) throw InputError("not a rational number: '" + text + "'");
  if (q.get_den() == 0) throw InputError("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

Int int_gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int int_lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const Q& c) {
  if (c != 0) c_.push_back(c);
}

Poly::Poly(long c) {
  if (c != 0) c_.emplace_back(c);
}

Poly Poly::from_coeffs(std::vector<Q> coeffs) {
  Poly p;
  p.c_ = std::move(coeffs);
  for (auto& q : p.c_) q.canonicalize();
  p.trim();
  return p;
}

Poly Poly::var() { return from_coeffs({Q(0), Q(1)}); }

Poly Poly::monomial(const Q& c, int power) {
  if (c == 0) return Poly();
  std::vector<Q> v(static_cast<size_t>(power) + 1, Q(0));
  v.back() = c;
  return from_coeffs(std::move(v));
}

Poly Poly::from_roots(const std::vector<Q>& roots) {
  Poly p(1L);
  for (const auto& r : roots) p *= Poly::from_coeffs({-r, Q(1)});
  return p;
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Q Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return Q(0);
  return c_[static_cast<size_t>(i)];
}

Q Poly::lead() const { return c_.empty() ? Q(0) : c_.back(); }

Q Poly::eval(const Q& x) const {
  Q acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Q Poly::eval(long x) const {
  Q acc(0);
  Q qx(x);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * qx + *it;
  return acc;
}

bool Poly::has_integer_coeffs() const {
  return std::all_of(c_.begin(), c_.end(), [](const Q& q) { return q.get_den() == 1; });
}

Int Poly::eval_int(long x) const {
  Int acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += it->get_num();
  }
  return acc;
}

Poly Poly::compose_affine(const Q& alpha, const Q& beta) const {
  // Horner in the polynomial ring: acc = acc*(alpha n + beta) + c_i.
  Poly lin = Poly::from_coeffs({beta, alpha});
  Poly acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * lin;
    acc += Poly(*it);
  }
  return acc;
}

Poly Poly::compose(const Poly& q) const {
  Poly acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * q;
    acc += Poly(*it);
  }
  return acc;
}

Int Poly::denominator_lcm() const {
  Int l(1);
  for (const auto& q : c_) l = int_lcm(l, q.get_den());
  return l;
}

Q Poly::content() const {
  if (c_.empty()) return Q(0);
  Int den = denominator_lcm();
  Int g(0);
  for (const auto& q : c_) g = int_gcd(g, Int(q.get_num() * (den / q.get_den())));
  Q c = make_q(g, den);
  if (lead() < 0) c = -c;
  return c;
}

Poly Poly::primitive() const {
  if (c_.empty()) return Poly();
  Q c = content();
  Poly p = *this;
  for (auto& q : p.c_) q /= c;
  return p;
}

Poly Poly::monic() const {
  if (c_.empty()) return Poly();
  Q l = lead();
  Poly p = *this;
  for (auto& q : p.c_) q /= l;
  return p;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& q : p.c_) q = -q;
  return p;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Q(0));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Q(0));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.c_.empty() || b.c_.empty()) return Poly();
  Poly r;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, Q(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  r.trim();
  return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Q& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& q : c_) q *= s;
  return *this;
}

Poly Poly::pow(unsigned e) const {
  Poly result(1L), base = *this;
  while (e) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return result;
}

bool Poly::operator<(const Poly& o) const {
  if (degree() != o.degree()) return degree() < o.degree();
  for (int i = degree(); i >= 0; --i) {
    const Q& a = c_[static_cast<size_t>(i)];
    const Q& b = o.c_[static_cast<size_t>(i)];
    if (a != b) return a < b;
  }
  return false;
}

std::string Poly::str(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    Q c = c_[static_cast<size_t>(i)];
    if (c == 0) continue;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << c.get_str();
      continue;
    }
    if (c != 1) os << c.get_str() << "*";
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

std::vector<std::string> Poly::coeff_strings() const {
  std::vector<std::string> out;
  out.reserve(c_.size());
  for (const auto& q : c_) out.push_back(q.get_str());
  return out;
}

std::pair<Poly, Poly> divrem(const Poly& p, const Poly& q) {
  if (q.is_zero()) throw MathError("polynomial division by zero");
  std::vector<Q> rem = p.coeffs();
  int dq = q.degree();
  int dp = p.degree();
  if (dp < dq) return {Poly(), p};
  std::vector<Q> quot(static_cast<size_t>(dp - dq + 1), Q(0));
  Q lq = q.lead();
  for (int i = dp; i >= dq; --i) {
    Q c = rem[static_cast<size_t>(i)] / lq;
    quot[static_cast<size_t>(i - dq)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= dq; ++j) rem[static_cast<size_t>(i - dq + j)] -= c * q.coeffs()[static_cast<size_t>(j)];
  }
  rem.resize(static_cast<size_t>(dq));
  return {Poly::from_coeffs(std::move(quot)), Poly::from_coeffs(std::move(rem))};
}

Poly exact_div(const Poly& p, const Poly& q) {
  auto [quot, rem] = divrem(p, q);
  if (!rem.is_zero()) throw MathError("inexact polynomial division");
  return quot;
}

bool divides(const Poly& d, const Poly& p) {
  if (d.is_zero()) return p.is_zero();
  return divrem(p, d).second.is_zero();
}

Poly gcd(const Poly& p, const Poly& q) {
  Poly a = p.primitive(), b = q.primitive();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    Poly r = divrem(a, b).second.primitive();
    a = std::move(b);
    b = std::move(r);
  }
  return a.primitive();
}

Poly lcm(const Poly& p, const Poly& q) {
  if (p.is_zero() || q.is_zero()) return Poly();
  return exact_div(p * q, gcd(p, q)).primitive();
}

std::vector<Q> rational_roots(const Poly& p, long bound, long den_cap) {
  std::vector<Q> roots;
  if (p.degree() < 1) return roots;
  Poly work = p.primitive();
  // Zero roots first.
  while (work.degree() >= 1 && work.coeff(0) == 0) {
    roots.emplace_back(0);
    work = exact_div(work, Poly::var());
  }
  if (work.degree() < 1) return roots;
  Int lead = work.lead().get_num();
  if (lead < 0) lead = -lead;
  std::vector<long> dens;
  for (long d = 1; d <= den_cap; ++d)
    if (mpz_divisible_ui_p(lead.get_mpz_t(), static_cast<unsigned long>(d))) dens.push_back(d);
  for (long d : dens) {
    for (long num = -bound * d; num <= bound * d; ++num) {
      if (num == 0) continue;
      if (std::gcd(std::labs(num), d) != 1) continue;
      Int c0 = work.coeff(0).get_num();
      if (!mpz_divisible_ui_p(c0.get_mpz_t(), static_cast<unsigned long>(std::labs(num)))) continue;
      Q r(num, d);
      r.canonicalize();
      while (work.degree() >= 1 && work.eval(r) == 0) {
        roots.push_back(r);
        work = exact_div(work, Poly::from_coeffs({-r, Q(1)}));
      }
      if (work.degree() < 1) break;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<long> positive_integer_roots(const Poly& p) {
  std::vector<long> out;
  if (p.degree() < 1) return out;
  Poly prim = p.primitive();
  int low = 0;
  while (prim.coeff(low) == 0) ++low;
  if (low == prim.degree()) return out;
  // An integer root divides the lowest nonzero coefficient and is below the Cauchy bound.
  Int c0 = abs(prim.coeff(low).get_num());
  Q maxratio(0);
  for (int i = 0; i < prim.degree(); ++i) {
    Q r = abs(prim.coeff(i) / prim.lead());
    if (r > maxratio) maxratio = r;
  }
  Q cauchy = maxratio + 1;
  Int lim = cauchy.get_num() / cauchy.get_den() + 1;
  long limit = lim.fits_slong_p() ? lim.get_si() : 100000L;
  limit = std::min(limit, 100000L);
  for (long x = 1; x <= limit; ++x) {
    if (!mpz_divisible_ui_p(c0.get_mpz_t(), static_cast<unsigned long>(x))) continue;
    if (prim.eval_int(x) == 0) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw MathError("rational function with zero denominator");
  if (num.is_zero()) {
    num_ = Poly();
    den_ = Poly(1L);
    return;
  }
  Poly g = gcd(num, den);
  Poly n = g.degree() > 0 ? exact_div(num, g) : num;
  Poly d = g.degree() > 0 ? exact_div(den, g) : den;
  Q c = d.content();
  num_ = n * (Q(1) / c);
  den_ = d * (Q(1) / c);
}

RF rf_reduce(const Poly& num, const Poly& den) { return RF(num, den); }

Poly RationalFunction::as_poly() const {
  if (!is_polynomial()) throw MathError("rational function is not a polynomial: " + str());
  return num_ * (Q(1) / den_.lead());
}

Q RationalFunction::eval(const Q& x) const {
  Q d = den_.eval(x);
  if (d == 0) {
    long idx = (x.get_den() == 1 && x.get_num().fits_slong_p()) ? x.get_num().get_si() : 0;
    throw PoleError(idx, "rational function pole");
  }
  return num_.eval(x) / d;
}

RationalFunction RationalFunction::compose_affine(const Q& alpha, const Q& beta) const {
  return RF(num_.compose_affine(alpha, beta), den_.compose_affine(alpha, beta));
}

RationalFunction RationalFunction::operator-() const {
  RF r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return RF(a.num_ + b.num_, a.den_);
  return RF(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return RF();
  if (a.is_polynomial() && b.is_polynomial()) {
    RF r;
    r.num_ = a.num_ * b.num_ * (Q(1) / (a.den_.lead() * b.den_.lead()));
    r.den_ = Poly(1L);
    return r;
  }
  return RF(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw MathError("rational function division by zero");
  return RF(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::pow(int e) const {
  if (e < 0) return RF(1L) / pow(-e);
  return RF(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
}

std::string RationalFunction::str(const std::string& var) const {
  if (is_polynomial()) return as_poly().str(var);
  return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
}

}  // namespace pcf
