#include "pcf/transforms.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace pcf {

namespace {

RF rf_shift(const RF& f, long s) { return f.shift(Q(s)); }

// c(n) c(n-1) ... c(n-i+1)
RF falling_product(const RF& c, int i) {
  RF acc(1L);
  for (int j = 0; j < i; ++j) acc = acc * rf_shift(c, -j);
  return acc;
}

Recurrence from_rf_coeffs(const std::vector<RF>& coeffs) {
  Poly den(1L);
  for (const auto& f : coeffs) den = lcm(den, f.den());
  Recurrence r;
  for (const auto& f : coeffs) r.coeffs.push_back((f * RF(den)).as_poly());
  r.denom = den;
  return r;
}

std::vector<RF> rf_coeffs(const Recurrence& rec) {
  std::vector<RF> out;
  for (const auto& c : rec.coeffs) out.emplace_back(c, rec.denom);
  return out;
}

// Evaluate a rational function at an integer, reporting poles as nullopt.
std::optional<Q> try_eval(const RF& f, long n) {
  Q d = f.den().eval(n);
  if (d == 0) return std::nullopt;
  return Q(f.num().eval(n) / d);
}

std::optional<MatQ> try_eval(const MatRF& m, long n) {
  MatQ out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      auto v = try_eval(m(i, j), n);
      if (!v) return std::nullopt;
      out(i, j) = *v;
    }
  return out;
}

MatRF rational_companion(const RationalPCF& p) { return MatRF::of2(RF(0L), p.b, RF(1L), p.a); }

void compose_value(TransformTrace& t, const std::optional<MatQ>& m) {
  if (!t.value_map_valid) return;
  if (!m || det(*m) == 0) {
    t.value_map_valid = false;
    return;
  }
  t.value_map = *m * t.value_map;
}

// K of the inflated fraction is c(0) K.
void record_inflate(TransformTrace& t, const RF& c) {
  TransformStep st;
  st.kind = TransformStep::Kind::Inflate;
  st.c = c;
  t.steps.push_back(st);
  auto c0 = try_eval(c, 0);
  if (!c0 || *c0 == 0)
    compose_value(t, std::nullopt);
  else
    compose_value(t, MatQ::of2(*c0, 0, 0, 1));
}

// ---- integer content helpers ----

void refine_base(std::vector<Int>& base, Int x) {
  std::vector<Int> work{std::move(x)};
  while (!work.empty()) {
    Int y = work.back();
    work.pop_back();
    if (y <= 1) continue;
    bool split = false;
    for (std::size_t i = 0; i < base.size(); ++i) {
      Int g = int_gcd(y, base[i]);
      if (g == 1) continue;
      Int b = base[i];
      base.erase(base.begin() + static_cast<long>(i));
      work.push_back(g);
      work.push_back(b / g);
      work.push_back(y / g);
      split = true;
      break;
    }
    if (!split) base.push_back(y);
  }
}

long valuation(Int x, const Int& p) {
  if (x == 0) return 0;
  if (x < 0) x = -x;
  long v = 0;
  while (mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) {
    x /= p;
    ++v;
  }
  return v;
}

long ceil_half(long x) { return x >= 0 ? (x + 1) / 2 : -((-x) / 2); }

}  // namespace

Q content_scale(const Q& alpha, const Q& beta) {
  std::vector<Int> parts;
  for (const Q* q : {&alpha, &beta}) {
    if (*q == 0) continue;
    Int num = abs(q->get_num());
    parts.push_back(num);
    parts.push_back(q->get_den());
  }
  // Strip small primes by trial division, then split what remains into a coprime base.
  std::vector<Int> base;
  std::vector<Int> rest = parts;
  for (unsigned long p = 2; p < 10000; ++p) {
    bool prime = true;
    for (unsigned long d = 2; d * d <= p; ++d)
      if (p % d == 0) {
        prime = false;
        break;
      }
    if (!prime) continue;
    bool used = false;
    for (auto& r : rest)
      while (r > 1 && mpz_divisible_ui_p(r.get_mpz_t(), p)) {
        r /= p;
        used = true;
      }
    if (used) base.emplace_back(p);
    bool all_one = std::all_of(rest.begin(), rest.end(), [](const Int& r) { return r <= 1; });
    if (all_one) break;
  }
  std::vector<Int> big;
  for (auto& r : rest)
    if (r > 1) refine_base(big, r);
  base.insert(base.end(), big.begin(), big.end());

  Q c(1);
  for (const auto& p : base) {
    long e = LONG_MIN;
    if (alpha != 0) e = std::max(e, valuation(alpha.get_den(), p) - valuation(alpha.get_num(), p));
    if (beta != 0) e = std::max(e, ceil_half(valuation(beta.get_den(), p) - valuation(beta.get_num(), p)));
    if (e == LONG_MIN || e == 0) continue;
    Int pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e > 0 ? e : -e));
    c = e > 0 ? Q(c * pe) : Q(c / pe);
  }
  c.canonicalize();
  return c;
}

std::string TransformStep::str() const {
  switch (kind) {
    case Kind::Inflate:
      return "inflate(" + c.str() + ")";
    case Kind::Shift:
      return "shift(" + std::to_string(s) + ")";
    case Kind::Fold:
      return "fold(" + std::to_string(k) + ")";
  }
  return "?";
}

std::string TransformTrace::str() const {
  std::string s;
  for (const auto& st : steps) s += (s.empty() ? "" : " ; ") + st.str();
  return s.empty() ? "identity" : s;
}

RationalPCF to_rational_pcf(const Recurrence& rec) {
  if (rec.order() != 2) throw MathError("expected an order-2 recurrence");
  return {RF(rec.coeffs[0], rec.denom), RF(rec.coeffs[1], rec.denom)};
}

RationalPCF to_rational_pcf(const PCF& pcf) { return {RF(pcf.a), RF(pcf.b)}; }

MatRF fold(const MatRF& m, int k) {
  if (k < 1) throw InputError("fold factor must be >= 1");
  MatRF acc = MatRF::identity(m.rows());
  for (int j = 1; j <= k; ++j) acc = acc * compose_affine(m, Q(k), Q(j - k));
  return acc;
}

Recurrence inflate(const Recurrence& rec, const RF& c) {
  if (c.is_zero()) throw MathError("cannot inflate by zero");
  std::vector<RF> co = rf_coeffs(rec);
  for (std::size_t i = 0; i < co.size(); ++i) co[i] = co[i] * falling_product(c, static_cast<int>(i) + 1);
  return from_rf_coeffs(co);
}

RationalPCF inflate(const RationalPCF& p, const RF& c) {
  if (c.is_zero()) throw MathError("cannot inflate by zero");
  return {p.a * c, p.b * c * rf_shift(c, -1)};
}

PCF inflate(const PCF& p, const RF& c) {
  RationalPCF r = inflate(to_rational_pcf(p), c);
  if (!r.a.is_polynomial() || !r.b.is_polynomial()) throw MathError("inflation does not yield polynomial coefficients");
  return {r.a.as_poly(), r.b.as_poly()};
}

MatQ inflation_coboundary(const RF& c, int order, long n) {
  if (n < order) throw InputError("inflation coboundary needs n >= order");
  auto P = [&](long k) {
    Q acc(1);
    for (long j = 1; j <= k; ++j) acc *= c.eval(Q(j));
    return acc;
  };
  std::size_t m = static_cast<std::size_t>(order);
  MatQ u(m, m);
  for (std::size_t i = 0; i < m; ++i) u(i, i) = P(n - 1 - static_cast<long>(m - 1 - i));
  return u;
}

Recurrence index_shift(const Recurrence& rec, long s) {
  Recurrence r;
  for (const auto& c : rec.coeffs) r.coeffs.push_back(c.shift(Q(s)));
  r.denom = rec.denom.shift(Q(s));
  return r;
}

RationalPCF index_shift(const RationalPCF& p, long s) { return {rf_shift(p.a, s), rf_shift(p.b, s)}; }

PCF index_shift(const PCF& p, long s) { return {p.a.shift(Q(s)), p.b.shift(Q(s))}; }

RationalPCF matrix_to_rational_pcf(const MatRF& t) {
  if (t.rows() != 2 || t.cols() != 2) throw MathError("expected a 2x2 matrix");
  const RF &alpha = t(0, 0), &gamma = t(1, 0), &delta = t(1, 1);
  if (gamma.is_zero()) throw MathError("lower-left entry vanishes identically; no PCF form");
  RF ratio = rf_shift(gamma, 1) / gamma;
  RF d = det(t);
  return {rf_shift(alpha, 1) + delta * ratio, RF(0L) - d * ratio};
}

namespace {

struct Deflation {
  Poly f;
  Poly a, b;
};

bool deflatable(const Poly& f, const Poly& a, const Poly& b) {
  return divides(f, a) && divides(f * f.shift(Q(-1)), b);
}

// Best polynomial f dividing gcd(a, b, b(n+1)) with f | a and f(n) f(n-1) | b.
std::optional<Deflation> best_deflation(const Poly& a, const Poly& b) {
  Poly g = gcd(a, gcd(b, b.shift(Q(1))));
  if (g.degree() < 1) return std::nullopt;
  auto make = [&](const Poly& f) {
    return Deflation{f, exact_div(a, f), exact_div(b, f * f.shift(Q(-1)))};
  };
  if (deflatable(g, a, b)) return make(g);

  std::vector<Q> roots = rational_roots(g);
  Poly cofactor = g;
  std::map<Q, int> mult;
  for (const auto& r : roots) {
    Poly lin = Poly::from_coeffs({-r, Q(1)}).primitive();
    cofactor = exact_div(cofactor, lin);
    ++mult[r];
  }
  std::vector<std::pair<Poly, int>> factors;
  for (const auto& [r, m] : mult) factors.emplace_back(Poly::from_coeffs({-r, Q(1)}).primitive(), m);
  if (cofactor.degree() >= 1) factors.emplace_back(cofactor.primitive(), 1);

  std::optional<Deflation> best;
  std::vector<int> pick(factors.size(), 0);
  std::function<void(std::size_t, Poly)> walk = [&](std::size_t i, Poly f) {
    if (i == factors.size()) {
      if (f.degree() < 1 || !deflatable(f, a, b)) return;
      if (best && f.degree() < best->f.degree()) return;
      Deflation d = make(f);
      if (!best || f.degree() > best->f.degree() || d.a < best->a) best = d;
      return;
    }
    Poly cur = f;
    for (int e = 0; e <= factors[i].second; ++e) {
      walk(i + 1, cur);
      cur = cur * factors[i].first;
    }
  };
  walk(0, Poly(1L));
  return best;
}

}  // namespace

CanonicalResult to_pcf_canonical(const RationalPCF& p) {
  if (p.b.is_zero()) throw MathError("degenerate continued fraction: b is identically zero");
  CanonicalResult out;
  RationalPCF cur = p;

  Poly g = lcm(cur.a.den(), cur.b.den());
  if (g.degree() >= 1) {
    cur = inflate(cur, RF(g));
    record_inflate(out.trace, RF(g));
  }
  Poly a = cur.a.as_poly(), b = cur.b.as_poly();

  for (;;) {
    auto d = best_deflation(a, b);
    if (!d) break;
    a = d->a;
    b = d->b;
    record_inflate(out.trace, RF(Poly(1L), d->f));
  }

  Q c = content_scale(a.is_zero() ? Q(0) : a.content(), b.content());
  if (!a.is_zero() && (a * c).lead() < 0) c = -c;
  if (c != 1) {
    a = a * c;
    b = b * (c * c);
    record_inflate(out.trace, RF(c));
  }
  out.pcf = PCF{a, b};
  return out;
}

CanonicalResult to_pcf_canonical(const Recurrence& rec) { return to_pcf_canonical(to_rational_pcf(rec)); }

CanonicalResult to_pcf_canonical(const PCF& p) { return to_pcf_canonical(to_rational_pcf(p)); }

namespace {

CanonicalResult convert_matrix(const MatRF& t, TransformTrace trace, int k) {
  RationalPCF r = matrix_to_rational_pcf(t);
  TransformStep st;
  st.kind = TransformStep::Kind::Fold;
  st.k = k;
  trace.steps.push_back(st);
  // Limit of the matrix product is (alpha(1) + K') / gamma(1).
  auto a1 = try_eval(t(0, 0), 1);
  auto g1 = try_eval(t(1, 0), 1);
  if (a1 && g1 && *g1 != 0)
    compose_value(trace, MatQ::of2(*g1, -*a1, 0, 1));
  else
    compose_value(trace, std::nullopt);
  CanonicalResult c = to_pcf_canonical(r);
  for (const auto& s : c.trace.steps) trace.steps.push_back(s);
  if (c.trace.value_map_valid)
    compose_value(trace, c.trace.value_map);
  else
    compose_value(trace, std::nullopt);
  return {c.pcf, trace};
}

}  // namespace

CanonicalResult fold_pcf(const PCF& p, int k) {
  if (k == 1) return to_pcf_canonical(p);
  return convert_matrix(fold(companion(p), k), TransformTrace{}, k);
}

CanonicalResult matrix_to_pcf(const MatRF& t) { return convert_matrix(t, TransformTrace{}, 1); }

RationalPCF replay(const RationalPCF& source, const TransformTrace& trace) {
  RationalPCF cur = source;
  for (const auto& st : trace.steps) {
    switch (st.kind) {
      case TransformStep::Kind::Inflate:
        cur = inflate(cur, st.c);
        break;
      case TransformStep::Kind::Shift:
        cur = index_shift(cur, st.s);
        break;
      case TransformStep::Kind::Fold:
        cur = matrix_to_rational_pcf(fold(rational_companion(cur), st.k));
        break;
    }
  }
  return cur;
}

}  // namespace pcf
