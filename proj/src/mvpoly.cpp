#include "pcf/mvpoly.hpp"

#include <sstream>

namespace pcf {

MvPoly::MvPoly(std::size_t nvars, const Q& c) : nvars_(nvars) {
  if (c != 0) terms_[Exponents(nvars, 0)] = c;
}

MvPoly MvPoly::variable(std::size_t nvars, std::size_t index) {
  MvPoly p(nvars);
  Exponents e(nvars, 0);
  e.at(index) = 1;
  p.terms_[e] = Q(1);
  return p;
}

bool MvPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  for (int e : terms_.begin()->first)
    if (e != 0) return false;
  return true;
}

Q MvPoly::constant_value() const {
  if (terms_.empty()) return Q(0);
  return terms_.begin()->second;
}

int MvPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

void MvPoly::add_term(const Exponents& e, const Q& c) {
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

MvPoly MvPoly::operator-() const {
  MvPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MvPoly& MvPoly::operator+=(const MvPoly& o) {
  if (nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MvPoly& MvPoly::operator-=(const MvPoly& o) {
  if (nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MvPoly operator*(const MvPoly& a, const MvPoly& b) {
  MvPoly r(std::max(a.nvars_, b.nvars_));
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      MvPoly::Exponents e(r.nvars_, 0);
      for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
      for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

MvPoly MvPoly::scaled(const Q& s) const {
  if (s == 0) return MvPoly(nvars_);
  MvPoly r = *this;
  for (auto& [e, c] : r.terms_) c *= s;
  return r;
}

MvPoly MvPoly::pow(unsigned e) const {
  MvPoly result(nvars_, Q(1)), base = *this;
  while (e) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return result;
}

Q MvPoly::eval(const std::vector<Q>& point) const {
  if (point.size() != nvars_) throw MathError("point dimension does not match variable count");
  Q acc(0);
  for (const auto& [e, c] : terms_) {
    Q t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    acc += t;
  }
  return acc;
}

Poly MvPoly::substitute_affine(const std::vector<Q>& offset, const std::vector<Q>& slope) const {
  if (offset.size() != nvars_ || slope.size() != nvars_)
    throw MathError("substitution vector length does not match variable count");
  std::vector<Poly> lin;
  for (std::size_t i = 0; i < nvars_; ++i) lin.push_back(Poly::from_coeffs({offset[i], slope[i]}));
  Poly acc;
  for (const auto& [e, c] : terms_) {
    Poly t(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) t *= lin[i].pow(static_cast<unsigned>(e[i]));
    acc += t;
  }
  return acc;
}

MvPoly MvPoly::shift_var(std::size_t index, const Q& delta) const {
  MvPoly r(nvars_);
  for (const auto& [e, c] : terms_) {
    // (x + delta)^k expanded by the binomial theorem.
    int k = e.at(index);
    Int binom(1);
    Q dpow(1);
    std::vector<Q> dpows(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) {
      dpows[static_cast<std::size_t>(j)] = dpow;
      dpow *= delta;
    }
    for (int j = 0; j <= k; ++j) {
      Exponents ne = e;
      ne[index] = k - j;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(j));
      r.add_term(ne, c * Q(binom) * dpows[static_cast<std::size_t>(j)]);
    }
  }
  return r;
}

Q MvPoly::content() const {
  if (terms_.empty()) return Q(0);
  Int den(1), g(0);
  for (const auto& [e, c] : terms_) den = int_lcm(den, c.get_den());
  for (const auto& [e, c] : terms_) g = int_gcd(g, Int(c.get_num() * (den / c.get_den())));
  return make_q(g, den);
}

static std::string monomial_str(const MvPoly::Exponents& e, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += i < names.size() ? names[i] : ("x" + std::to_string(i));
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

std::string MvPoly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    Q c = it->second;
    bool neg = c < 0;
    if (neg) c = -c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    std::string mono = monomial_str(it->first, names);
    if (mono.empty()) {
      os << c.get_str();
    } else {
      if (c != 1) os << c.get_str() << "*";
      os << mono;
    }
  }
  return os.str();
}

bool mv_exact_divide(const MvPoly& p, const MvPoly& d, MvPoly& quotient) {
  if (d.is_zero()) throw MathError("multivariate division by zero");
  quotient = MvPoly(std::max(p.nvars(), d.nvars()));
  MvPoly r = p;
  const auto& lt_d = *d.terms().rbegin();
  std::size_t guard = 0;
  while (!r.is_zero()) {
    if (++guard > 100000) return false;
    const auto lt_r = *r.terms().rbegin();
    MvPoly::Exponents e(lt_r.first.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      int diff = lt_r.first[i] - (i < lt_d.first.size() ? lt_d.first[i] : 0);
      if (diff < 0) return false;
      e[i] = diff;
    }
    MvPoly t(quotient.nvars(), lt_r.second / lt_d.second);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) t = t * MvPoly::variable(quotient.nvars(), i).pow(static_cast<unsigned>(e[i]));
    quotient += t;
    r -= t * d;
  }
  return true;
}

// ---------------------------------------------------------------- MvRF

MvRationalFunction::MvRationalFunction(const MvPoly& p) : num_(p), den_(p.nvars(), Q(1)) {}

MvRationalFunction::MvRationalFunction(const MvPoly& num, const MvPoly& den) : num_(num), den_(den) {
  if (den_.is_zero()) throw MathError("multivariate rational function with zero denominator");
  normalize();
}

void MvRationalFunction::normalize() {
  std::size_t nv = std::max(num_.nvars(), den_.nvars());
  if (num_.is_zero()) {
    num_ = MvPoly(nv);
    den_ = MvPoly(nv, Q(1));
    reduced_ = true;
    return;
  }
  if (!den_.is_constant()) {
    MvPoly q;
    if (mv_exact_divide(num_, den_, q)) {
      num_ = q;
      den_ = MvPoly(nv, Q(1));
    }
  }
  // Move the denominator's integer content (and sign of its leading term) into the numerator.
  Q c = den_.content();
  if (den_.terms().rbegin()->second < 0) c = -c;
  num_ = num_.scaled(Q(1) / c);
  den_ = den_.scaled(Q(1) / c);
  reduced_ = den_.is_constant();
}

MvRationalFunction MvRationalFunction::operator-() const {
  MvRF r = *this;
  r.num_ = -r.num_;
  return r;
}

MvRationalFunction operator+(const MvRationalFunction& a, const MvRationalFunction& b) {
  if (a.den_ == b.den_) return MvRF(a.num_ + b.num_, a.den_);
  return MvRF(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

MvRationalFunction operator-(const MvRationalFunction& a, const MvRationalFunction& b) { return a + (-b); }

MvRationalFunction operator*(const MvRationalFunction& a, const MvRationalFunction& b) {
  return MvRF(a.num_ * b.num_, a.den_ * b.den_);
}

MvRationalFunction operator/(const MvRationalFunction& a, const MvRationalFunction& b) {
  if (b.is_zero()) throw MathError("multivariate rational function division by zero");
  return MvRF(a.num_ * b.den_, a.den_ * b.num_);
}

bool MvRationalFunction::equals(const MvRationalFunction& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

Q MvRationalFunction::eval(const std::vector<Q>& point) const {
  Q d = den_.eval(point);
  if (d == 0) throw MathError("multivariate rational function evaluated at a pole");
  return num_.eval(point) / d;
}

RF MvRationalFunction::substitute_affine(const std::vector<Q>& offset, const std::vector<Q>& slope) const {
  Poly d = den_.substitute_affine(offset, slope);
  if (d.is_zero()) throw MathError("substitution makes the denominator identically zero");
  return RF(num_.substitute_affine(offset, slope), d);
}

MvRationalFunction MvRationalFunction::shift_var(std::size_t index, const Q& delta) const {
  return MvRF(num_.shift_var(index, delta), den_.shift_var(index, delta));
}

std::string MvRationalFunction::str(const std::vector<std::string>& names) const {
  if (den_.is_constant()) {
    return num_.scaled(Q(1) / den_.constant_value()).str(names);
  }
  return "(" + num_.str(names) + ")/(" + den_.str(names) + ")";
}

RF mv_substitute_affine(const MvRF& f, const std::vector<Q>& point, const std::vector<long>& direction) {
  if (point.size() != f.nvars() || direction.size() != f.nvars())
    throw MathError("substitution vector length does not match variable count");
  std::vector<Q> offset, slope;
  for (std::size_t i = 0; i < point.size(); ++i) {
    offset.push_back(point[i] - Q(direction[i]));
    slope.emplace_back(direction[i]);
  }
  return f.substitute_affine(offset, slope);
}

}  // namespace pcf
