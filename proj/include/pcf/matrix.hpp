#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pcf/algebra.hpp"

namespace pcf {

// Small dense row-major matrix over a commutative ring T (Q, Int, Poly, RF, ...).
template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), d_(rows * cols, T(0)) {}
  Mat(std::size_t rows, std::size_t cols, std::vector<T> data) : r_(rows), c_(cols), d_(std::move(data)) {
    if (d_.size() != r_ * c_) throw MathError("matrix data size mismatch");
  }
  static Mat identity(std::size_t m) {
    Mat I(m, m);
    for (std::size_t i = 0; i < m; ++i) I(i, i) = T(1);
    return I;
  }
  static Mat of2(T a, T b, T c, T d) { return Mat(2, 2, {std::move(a), std::move(b), std::move(c), std::move(d)}); }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  T& operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }
  const std::vector<T>& data() const { return d_; }
  std::vector<T>& data() { return d_; }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.c_ != b.r_) throw MathError("matrix dimension mismatch in product");
    Mat r(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t j = 0; j < b.c_; ++j) {
        T acc(0);
        for (std::size_t k = 0; k < a.c_; ++k) acc += a(i, k) * b(k, j);
        r(i, j) = std::move(acc);
      }
    return r;
  }
  friend Mat operator+(const Mat& a, const Mat& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw MathError("matrix dimension mismatch in sum");
    Mat r = a;
    for (std::size_t i = 0; i < r.d_.size(); ++i) r.d_[i] += b.d_[i];
    return r;
  }
  friend Mat operator-(const Mat& a, const Mat& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw MathError("matrix dimension mismatch in difference");
    Mat r = a;
    for (std::size_t i = 0; i < r.d_.size(); ++i) r.d_[i] -= b.d_[i];
    return r;
  }
  Mat scaled(const T& s) const {
    Mat r = *this;
    for (auto& x : r.d_) x = x * s;
    return r;
  }
  bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && d_ == o.d_; }
  bool operator!=(const Mat& o) const { return !(*this == o); }
  bool is_zero() const {
    for (const auto& x : d_)
      if (!(x == T(0))) return false;
    return true;
  }

  template <class F>
  auto map(F f) const -> Mat<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    std::vector<U> out;
    out.reserve(d_.size());
    for (const auto& x : d_) out.push_back(f(x));
    return Mat<U>(r_, c_, std::move(out));
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> d_;
};

template <class T>
T det(const Mat<T>& m) {
  if (m.rows() != m.cols()) throw MathError("determinant of non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return T(1);
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  T acc(0);
  for (std::size_t j = 0; j < n; ++j) {
    Mat<T> minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t cc = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        minor(i - 1, cc++) = m(i, k);
      }
    }
    T term = m(0, j) * det(minor);
    if (j % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

// Adjugate: adj(A) * A = det(A) * I.
template <class T>
Mat<T> adjugate(const Mat<T>& m) {
  std::size_t n = m.rows();
  if (n != m.cols()) throw MathError("adjugate of non-square matrix");
  if (n == 1) return Mat<T>::identity(1);
  if (n == 2) return Mat<T>::of2(m(1, 1), T(0) - m(0, 1), T(0) - m(1, 0), m(0, 0));
  Mat<T> adj(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Mat<T> minor(n - 1, n - 1);
      std::size_t rr = 0;
      for (std::size_t a = 0; a < n; ++a) {
        if (a == i) continue;
        std::size_t cc = 0;
        for (std::size_t b = 0; b < n; ++b) {
          if (b == j) continue;
          minor(rr, cc++) = m(a, b);
        }
        ++rr;
      }
      T cof = det(minor);
      adj(j, i) = ((i + j) % 2 == 0) ? cof : T(0) - cof;
    }
  return adj;
}

using MatQ = Mat<Q>;
using MatInt = Mat<Int>;
using MatPoly = Mat<Poly>;
using MatRF = Mat<RF>;

// Returns (adjugate, determinant); throws when the determinant vanishes identically.
std::pair<MatRF, RF> mat_adjugate_inverse(const MatRF& a);

MatRF to_rf(const MatPoly& m);
MatRF compose_affine(const MatRF& m, const Q& alpha, const Q& beta);
MatRF shift(const MatRF& m, const Q& s);
MatQ eval(const MatRF& m, const Q& x);

// Projective equality (equal up to a nonzero scalar from the base field).
bool projectively_equal(const MatRF& a, const MatRF& b);
bool projectively_equal(const MatQ& a, const MatQ& b);

// Scale a rational matrix to integers with gcd 1; sign chosen so that the first
// nonzero entry (row-major) is positive. Zero matrix stays zero.
MatInt primitive_int(const MatQ& m);
// Scale a polynomial matrix by a rational constant so that all coefficients are coprime
// integers and the first nonzero entry has positive leading coefficient.
MatPoly primitive_poly(const MatPoly& m);

std::string mat_str(const MatQ& m);
std::string mat_str(const MatInt& m);
std::string mat_str(const MatRF& m, const std::string& var = "n");

}  // namespace pcf
