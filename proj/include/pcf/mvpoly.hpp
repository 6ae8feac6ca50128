#pragma once

#include <map>
#include <string>
#include <vector>

#include "pcf/algebra.hpp"
#include "pcf/matrix.hpp"

namespace pcf {

// Sparse multivariate polynomial over Q in a fixed number of variables. Variable
// names live with the owner (e.g. a CMF); here variables are positional.
class MvPoly {
 public:
  using Exponents = std::vector<int>;

  MvPoly() = default;
  explicit MvPoly(std::size_t nvars) : nvars_(nvars) {}
  MvPoly(std::size_t nvars, const Q& c);
  static MvPoly variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Q constant_value() const;  // valid when is_constant()
  const std::map<Exponents, Q>& terms() const { return terms_; }
  int total_degree() const;

  MvPoly operator-() const;
  MvPoly& operator+=(const MvPoly& o);
  MvPoly& operator-=(const MvPoly& o);
  friend MvPoly operator+(MvPoly a, const MvPoly& b) { return a += b; }
  friend MvPoly operator-(MvPoly a, const MvPoly& b) { return a -= b; }
  friend MvPoly operator*(const MvPoly& a, const MvPoly& b);
  MvPoly scaled(const Q& s) const;
  MvPoly pow(unsigned e) const;
  bool operator==(const MvPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
  bool operator!=(const MvPoly& o) const { return !(*this == o); }

  Q eval(const std::vector<Q>& point) const;
  // Substitute x_i -> offset_i + slope_i * n, giving a univariate polynomial in n.
  Poly substitute_affine(const std::vector<Q>& offset, const std::vector<Q>& slope) const;
  // Substitute x_index -> x_index + delta.
  MvPoly shift_var(std::size_t index, const Q& delta) const;
  // Integer content normalization factor (positive rational c, p/c primitive integer).
  Q content() const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  void add_term(const Exponents& e, const Q& c);
  std::size_t nvars_ = 0;
  std::map<Exponents, Q> terms_;
};

// Multivariate rational function. Reduction is best effort: integer content is
// normalized and exact polynomial quotients are taken when the denominator
// divides the numerator; otherwise the pair is kept unreduced and equality is
// decided by cross multiplication.
class MvRationalFunction {
 public:
  MvRationalFunction() = default;
  explicit MvRationalFunction(const MvPoly& p);
  MvRationalFunction(const MvPoly& num, const MvPoly& den);
  MvRationalFunction(std::size_t nvars, const Q& c) : MvRationalFunction(MvPoly(nvars, c)) {}

  const MvPoly& num() const { return num_; }
  const MvPoly& den() const { return den_; }
  std::size_t nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool reduced() const { return reduced_; }

  MvRationalFunction operator-() const;
  friend MvRationalFunction operator+(const MvRationalFunction& a, const MvRationalFunction& b);
  friend MvRationalFunction operator-(const MvRationalFunction& a, const MvRationalFunction& b);
  friend MvRationalFunction operator*(const MvRationalFunction& a, const MvRationalFunction& b);
  friend MvRationalFunction operator/(const MvRationalFunction& a, const MvRationalFunction& b);
  MvRationalFunction& operator+=(const MvRationalFunction& o) { return *this = *this + o; }
  MvRationalFunction& operator-=(const MvRationalFunction& o) { return *this = *this - o; }

  // Mathematical equality (cross multiplication).
  bool equals(const MvRationalFunction& o) const;

  Q eval(const std::vector<Q>& point) const;  // throws MathError on a zero denominator
  // x_i -> offset_i + slope_i * n; throws MathError if the denominator vanishes identically.
  RF substitute_affine(const std::vector<Q>& offset, const std::vector<Q>& slope) const;
  MvRationalFunction shift_var(std::size_t index, const Q& delta) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  void normalize();
  MvPoly num_;
  MvPoly den_;
  bool reduced_ = true;
};

using MvRF = MvRationalFunction;
using MatMvRF = std::vector<std::vector<MvRF>>;

// Convenience entry point: substitutes x -> point + (n-1) * direction componentwise.
RF mv_substitute_affine(const MvRF& f, const std::vector<Q>& point, const std::vector<long>& direction);

// Exact multivariate division p / d when d divides p; returns false otherwise.
bool mv_exact_divide(const MvPoly& p, const MvPoly& d, MvPoly& quotient);

}  // namespace pcf
