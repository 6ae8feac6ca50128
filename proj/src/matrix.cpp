#include "pcf/matrix.hpp"

#include <sstream>

namespace pcf {

std::pair<MatRF, RF> mat_adjugate_inverse(const MatRF& a) {
  RF d = det(a);
  if (d.is_zero()) throw MathError("matrix is identically singular");
  return {adjugate(a), d};
}

MatRF to_rf(const MatPoly& m) {
  return m.map([](const Poly& p) { return RF(p); });
}

MatRF compose_affine(const MatRF& m, const Q& alpha, const Q& beta) {
  return m.map([&](const RF& f) { return f.compose_affine(alpha, beta); });
}

MatRF shift(const MatRF& m, const Q& s) { return compose_affine(m, Q(1), s); }

MatQ eval(const MatRF& m, const Q& x) {
  return m.map([&](const RF& f) { return f.eval(x); });
}

template <class T>
static bool proj_eq(const Mat<T>& a, const Mat<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  // Pick the first pivot where a is nonzero; a ≡ b iff a * b_pivot == b * a_pivot.
  std::size_t piv = a.data().size();
  for (std::size_t i = 0; i < a.data().size(); ++i)
    if (!(a.data()[i] == T(0))) {
      piv = i;
      break;
    }
  if (piv == a.data().size()) return b.is_zero();
  const T& ap = a.data()[piv];
  const T& bp = b.data()[piv];
  if (bp == T(0)) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    if (!(a.data()[i] * bp == b.data()[i] * ap)) return false;
  return true;
}

bool projectively_equal(const MatRF& a, const MatRF& b) { return proj_eq(a, b); }
bool projectively_equal(const MatQ& a, const MatQ& b) { return proj_eq(a, b); }

MatInt primitive_int(const MatQ& m) {
  Int den(1);
  for (const auto& q : m.data()) den = int_lcm(den, q.get_den());
  std::vector<Int> ints;
  Int g(0);
  for (const auto& q : m.data()) {
    Int v = q.get_num() * (den / q.get_den());
    g = int_gcd(g, v);
    ints.push_back(v);
  }
  if (g == 0) return MatInt(m.rows(), m.cols());
  int sign = 1;
  for (const auto& v : ints)
    if (v != 0) {
      sign = v < 0 ? -1 : 1;
      break;
    }
  for (auto& v : ints) v = v / g * sign;
  return MatInt(m.rows(), m.cols(), std::move(ints));
}

MatPoly primitive_poly(const MatPoly& m) {
  Int den(1);
  for (const auto& p : m.data()) den = int_lcm(den, p.denominator_lcm());
  Int g(0);
  for (const auto& p : m.data())
    for (const auto& c : p.coeffs()) g = int_gcd(g, Int(c.get_num() * (den / c.get_den())));
  if (g == 0) return m;
  Q scale = make_q(den, g);
  for (const auto& p : m.data())
    if (!p.is_zero()) {
      if (p.lead() < 0) scale = -scale;
      break;
    }
  return m.map([&](const Poly& p) { return p * scale; });
}

std::string mat_str(const MatQ& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string mat_str(const MatInt& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string mat_str(const MatRF& m, const std::string& var) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).str(var);
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace pcf
