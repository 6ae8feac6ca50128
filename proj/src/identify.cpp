#include "pcf/identify.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "pcf/hash.hpp"

#ifndef PCF_DATA_DIR
#define PCF_DATA_DIR "data"
#endif

namespace pcf {

namespace {

struct Digits {
  std::string integer_part;
  std::string fraction;
};

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, Digits>& cache() {
  static std::map<std::string, Digits> c;
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Digits& load(const std::string& name) {
  if (!is_known_constant(name)) throw InputError("unknown constant '" + name + "'");
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto it = cache().find(name);
  if (it != cache().end()) return it->second;
  std::string path = data_dir() + "/constants/" + name + ".txt";
  std::string body = read_file(path);
  std::string sidecar = read_file(path + ".sha256");
  std::string expected = sidecar.substr(0, sidecar.find_first_of(" \n"));
  if (sha256_hex(body) != expected) throw std::runtime_error("checksum mismatch for " + path);
  std::istringstream ls(body);
  Digits d;
  std::getline(ls, d.integer_part);
  std::getline(ls, d.fraction);
  if (d.integer_part.empty() || d.fraction.empty()) throw std::runtime_error("malformed digit file " + path);
  return cache().emplace(name, std::move(d)).first->second;
}

Real from_int(const Int& z, long prec) { return Real::from_int(z, prec); }

}  // namespace

const std::vector<std::string>& known_constants() {
  static const std::vector<std::string> names = {"pi", "e", "zeta3", "catalan"};
  return names;
}

bool is_known_constant(const std::string& name) {
  for (const auto& n : known_constants())
    if (n == name) return true;
  return false;
}

std::string data_dir() {
  if (const char* env = std::getenv("PCF_DATA_DIR"); env && *env) return env;
  return PCF_DATA_DIR;
}

ConstantRef constant_ref(const std::string& name) {
  const Digits& d = load(name);
  return {name, static_cast<long>(d.fraction.size())};
}

ApproxValue constant_value(const std::string& name, long precision_bits) {
  const Digits& d = load(name);
  long need = bits_to_digits(precision_bits) + 10;
  if (need > static_cast<long>(d.fraction.size()))
    throw PrecisionError("constant " + name + " has " + std::to_string(d.fraction.size()) + " digits, " +
                         std::to_string(need) + " requested");
  ApproxValue v;
  v.precision_bits = std::max(64L, precision_bits);
  v.value = Real::from_string(d.integer_part + "." + d.fraction.substr(0, static_cast<std::size_t>(need)),
                              v.precision_bits);
  v.error_bound = pow10(-need, 64);
  v.method = "table";
  return v;
}

std::optional<IntegerRelation> pslq(const std::vector<Real>& xs, const PslqOptions& opts) {
  std::size_t n = xs.size();
  if (n < 2) throw InputError("pslq needs at least two inputs");
  long prec = 0;
  for (const auto& x : xs) prec = std::max(prec, x.prec());
  long wd = opts.working_digits > 0 ? opts.working_digits : bits_to_digits(prec);
  if (wd < 10 + static_cast<long>(n) * opts.max_coeff_digits)
    throw PrecisionError("pslq needs " + std::to_string(10 + static_cast<long>(n) * opts.max_coeff_digits) +
                         " digits, have " + std::to_string(wd));
  prec = std::max(prec, digits_to_bits(wd) + 64);

  Real eps = pow10(-(wd * 6) / 10, prec);
  Real coeff_bound = pow10(opts.max_coeff_digits, prec);
  Real xmax(prec);
  for (const auto& x : xs) xmax = std::max(xmax, abs(x), [](const Real& a, const Real& b) { return a < b; });

  auto accept = [&](const std::vector<Int>& r) -> std::optional<IntegerRelation> {
    Real s(prec), rmax(prec);
    bool nz = false;
    for (std::size_t i = 0; i < n; ++i) {
      s += from_int(r[i], prec) * xs[i].with_prec(prec);
      Real ri = abs(from_int(r[i], prec));
      if (rmax < ri) rmax = ri;
      nz = nz || r[i] != 0;
    }
    if (!nz || rmax > coeff_bound) return std::nullopt;
    Real scale = rmax * (xmax < Real::from_long(1, prec) ? Real::from_long(1, prec) : xmax);
    if (!(abs(s) < eps * scale)) return std::nullopt;
    return IntegerRelation{r, abs(s)};
  };

  // Exact zeros give trivial relations.
  for (std::size_t i = 0; i < n; ++i)
    if (abs(xs[i]) < eps * (xmax.is_zero() ? Real::from_long(1, prec) : xmax)) {
      std::vector<Int> r(n, 0);
      r[i] = 1;
      return IntegerRelation{r, abs(xs[i])};
    }

  std::vector<Real> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = xs[i].with_prec(prec);
  std::vector<Real> s(n, Real(prec));
  for (std::size_t k = n; k-- > 0;) {
    Real acc = x[k] * x[k];
    if (k + 1 < n) acc += s[k + 1] * s[k + 1];
    s[k] = sqrt(acc);
  }
  Real s0 = s[0];
  std::vector<Real> y(n, Real(prec));
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = x[i] / s0;
    s[i] = s[i] / s0;
  }
  std::size_t m1 = n - 1;
  std::vector<std::vector<Real>> H(n, std::vector<Real>(m1, Real(prec)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m1; ++j) {
      if (i == j)
        H[i][j] = s[j + 1] / s[j];
      else if (i > j)
        H[i][j] = -(y[i] * y[j]) / (s[j] * s[j + 1]);
    }
  MatInt A = MatInt::identity(n), B = MatInt::identity(n);

  auto reduce_entry = [&](std::size_t i, std::size_t j) {
    if (H[j][j].is_zero()) return;
    Int t = (H[i][j] / H[j][j]).round_int();
    if (t == 0) return;
    Real tr = from_int(t, prec);
    y[j] += tr * y[i];
    for (std::size_t k = 0; k <= j; ++k) H[i][k] -= tr * H[j][k];
    for (std::size_t k = 0; k < n; ++k) {
      A(i, k) -= t * A(j, k);
      B(k, j) += t * B(k, i);
    }
  };
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i; j-- > 0;) reduce_entry(i, j);

  Real gamma = sqrt(Real::from_long(4, prec) / Real::from_long(3, prec));
  Int a_limit;
  mpz_ui_pow_ui(a_limit.get_mpz_t(), 10, static_cast<unsigned long>(wd));

  for (long iter = 0; iter < opts.max_iterations; ++iter) {
    std::size_t m = 0;
    Real best(prec), g = gamma;
    for (std::size_t i = 0; i < m1; ++i) {
      Real v = g * abs(H[i][i]);
      if (i == 0 || v > best) {
        best = v;
        m = i;
      }
      g = g * gamma;
    }
    std::swap(y[m], y[m + 1]);
    std::swap(H[m], H[m + 1]);
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(A(m, k), A(m + 1, k));
      std::swap(B(k, m), B(k, m + 1));
    }
    if (m + 1 < m1) {
      Real t0 = sqrt(H[m][m] * H[m][m] + H[m][m + 1] * H[m][m + 1]);
      Real t1 = H[m][m] / t0, t2 = H[m][m + 1] / t0;
      for (std::size_t i = m; i < n; ++i) {
        Real t3 = H[i][m], t4 = H[i][m + 1];
        H[i][m] = t1 * t3 + t2 * t4;
        H[i][m + 1] = t1 * t4 - t2 * t3;
      }
    }
    for (std::size_t i = m + 1; i < n; ++i)
      for (std::size_t j = std::min(i - 1, m + 1) + 1; j-- > 0;) reduce_entry(i, j);

    for (std::size_t j = 0; j < n; ++j) {
      if (abs(y[j]) < eps) {
        std::vector<Int> r(n);
        for (std::size_t k = 0; k < n; ++k) r[k] = B(k, j);
        if (auto rel = accept(r)) return rel;
      }
    }
    Real hmax(prec);
    for (std::size_t j = 0; j < m1; ++j)
      if (hmax < abs(H[j][j])) hmax = abs(H[j][j]);
    if (hmax.is_zero()) return std::nullopt;
    if (Real::from_long(1, prec) / hmax > coeff_bound) return std::nullopt;
    for (const auto& e : A.data())
      if (abs(e) > a_limit) return std::nullopt;
  }
  return std::nullopt;
}

MatInt normalize_mobius(const MatInt& m) {
  Int g = 0;
  for (const auto& e : m.data()) g = int_gcd(g, e);
  if (g == 0) return m;
  MatInt out = m;
  Int lead = m(1, 0) != 0 ? m(1, 0) : m(1, 1) != 0 ? m(1, 1) : m(0, 0) != 0 ? m(0, 0) : m(0, 1);
  if (lead < 0) g = -g;
  for (auto& e : out.data()) e /= g;
  return out;
}

std::optional<MobiusIdentification> identify_mobius(const ApproxValue& L, const std::string& constant,
                                                    const IdentifyOptions& opts) {
  long digits = std::min(L.reliable_digits(), opts.max_digits);
  if (digits < opts.min_digits)
    throw PrecisionError("limit has " + std::to_string(digits) + " reliable digits, " +
                         std::to_string(opts.min_digits) + " required");
  long prec = digits_to_bits(digits) + 32;
  Real c = constant_value(constant, prec).value;
  Real l = L.value.with_prec(prec);
  PslqOptions po;
  po.working_digits = digits;
  po.max_coeff_digits = std::min(opts.max_coeff_digits, (digits - 10) / 4);
  auto rel = pslq({l * c, l, c, Real::from_long(1, prec)}, po);
  if (!rel) return std::nullopt;
  const auto& r = rel->coefficients;
  MatInt m = MatInt::of2(-r[2], -r[3], r[0], r[1]);
  if (det(m) == 0) return std::nullopt;
  m = normalize_mobius(m);
  Real err = abs(mobius_apply(m, c) - l);
  Real tol = pow10(-digits / 2, prec) * (abs(l) < Real::from_long(1, prec) ? Real::from_long(1, prec) : abs(l));
  if (!(err < tol)) return std::nullopt;
  MobiusIdentification out;
  out.matrix = m;
  out.constant = constant;
  out.verified_digits =
      err.is_zero() ? digits : std::min(digits, static_cast<long>(std::floor(-log_abs(err) / std::log(10.0))));
  return out;
}

}  // namespace pcf
