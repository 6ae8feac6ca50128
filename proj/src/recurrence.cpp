#include "pcf/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pcf/expr.hpp"

namespace pcf {

std::string PCF::str() const { return "PCF(" + a.str() + "; " + b.str() + ")"; }

PCF parse_pcf(const std::string& text) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (text.compare(i, 3, "PCF") != 0) throw ParseError(i, "expected 'PCF('");
  i += 3;
  skip();
  if (i >= text.size() || text[i] != '(') throw ParseError(i, "expected '(' after PCF");
  std::size_t open = i++;
  int depth = 0;
  std::size_t sep = std::string::npos, close = std::string::npos;
  for (std::size_t j = i; j < text.size(); ++j) {
    char c = text[j];
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (depth == 0) {
        close = j;
        break;
      }
      --depth;
    } else if ((c == ';' || c == ',') && depth == 0) {
      if (sep != std::string::npos) throw ParseError(j, "too many arguments to PCF");
      sep = j;
    }
  }
  if (close == std::string::npos) throw ParseError(text.size(), "unterminated PCF(");
  if (sep == std::string::npos) throw ParseError(close, "PCF needs two arguments separated by ';'");
  for (std::size_t j = close + 1; j < text.size(); ++j)
    if (!std::isspace(static_cast<unsigned char>(text[j]))) throw ParseError(j, "trailing characters after PCF(...)");

  auto sub = [&](std::size_t lo, std::size_t hi) {
    try {
      return parse_poly(text.substr(lo, hi - lo));
    } catch (const ParseError& e) {
      throw ParseError(lo + e.offset(), e.message());
    }
  };
  PCF p{sub(open + 1, sep), sub(sep + 1, close)};
  if (p.b.is_zero()) throw InputError("PCF partial numerator b(n) must not be identically zero");
  return p;
}

std::string Recurrence::str() const {
  std::string s = denom == Poly(1L) ? "u(n) = " : "(" + denom.str() + ")*u(n) = ";
  for (int i = 0; i < order(); ++i) {
    if (i) s += " + ";
    s += "(" + coeffs[static_cast<std::size_t>(i)].str() + ")*u(n-" + std::to_string(i + 1) + ")";
  }
  return s;
}

Recurrence to_recurrence(const PCF& pcf) {
  Recurrence r;
  r.coeffs = {pcf.a, pcf.b};
  return r;
}

PCF to_pcf(const Recurrence& rec) {
  if (rec.order() != 2) throw MathError("only order-2 recurrences correspond to a PCF");
  if (!rec.denom.is_constant()) throw MathError("recurrence has a non-constant denominator; inflate first");
  Q c = rec.denom.coeff(0);
  return PCF{rec.coeffs[0] * (Q(1) / c), rec.coeffs[1] * (Q(1) / c)};
}

MatRF companion(const Recurrence& rec) {
  std::size_t m = static_cast<std::size_t>(rec.order());
  if (m == 0) throw MathError("recurrence of order zero");
  MatRF cm(m, m);
  for (std::size_t i = 1; i < m; ++i) cm(i, i - 1) = RF(1L);
  for (std::size_t i = 0; i < m; ++i) cm(i, m - 1) = RF(rec.coeffs[m - 1 - i], rec.denom);
  return cm;
}

MatRF companion(const PCF& pcf) { return companion(to_recurrence(pcf)); }

namespace {

// Integer companion factor at index n, together with the scalar it was multiplied by.
class IntStepper {
 public:
  explicit IntStepper(const Recurrence& rec) : rec_(rec), m_(static_cast<std::size_t>(rec.order())) {
    fast_ = rec.denom == Poly(1L);
    for (const auto& c : rec.coeffs) fast_ = fast_ && c.has_integer_coeffs();
  }

  std::size_t order() const { return m_; }

  MatInt factor(long n, Int& scale) const {
    MatInt f(m_, m_);
    if (fast_) {
      scale = 1;
      for (std::size_t i = 1; i < m_; ++i) f(i, i - 1) = 1;
      for (std::size_t i = 0; i < m_; ++i) f(i, m_ - 1) = rec_.coeffs[m_ - 1 - i].eval_int(n);
      return f;
    }
    Q c = rec_.denom.eval(n);
    if (c == 0) throw PoleError(n, "recurrence denominator vanishes");
    std::vector<Q> v(m_);
    Int d = 1;
    for (std::size_t i = 0; i < m_; ++i) {
      v[i] = rec_.coeffs[m_ - 1 - i].eval(n) / c;
      d = int_lcm(d, v[i].get_den());
    }
    scale = d;
    for (std::size_t i = 1; i < m_; ++i) f(i, i - 1) = d;
    for (std::size_t i = 0; i < m_; ++i) f(i, m_ - 1) = Q(v[i] * d).get_num();
    return f;
  }

  IntStep product(long lo, long hi) const {
    if (lo > hi) return {MatInt::identity(m_), Int(1)};
    if (hi - lo < 16) {
      IntStep acc{MatInt::identity(m_), Int(1)};
      for (long n = lo; n <= hi; ++n) {
        Int s;
        MatInt f = factor(n, s);
        acc.m = acc.m * f;
        acc.den *= s;
      }
      return acc;
    }
    long mid = lo + (hi - lo) / 2;
    IntStep left = product(lo, mid);
    IntStep right = product(mid + 1, hi);
    return {left.m * right.m, left.den * right.den};
  }

 private:
  const Recurrence& rec_;
  std::size_t m_;
  bool fast_ = false;
};

MatQ to_matq(const IntStep& s) {
  return s.m.map([&](const Int& x) { return make_q(x, s.den); });
}

MatInt integer_init(const std::optional<InitialConditions>& init) {
  if (!init) return MatInt::identity(2);
  if (init->matrix.rows() != 2 || init->matrix.cols() != 2) throw InputError("initial conditions must be 2x2");
  if (init->matrix.is_zero()) throw InputError("initial condition matrix is zero");
  return primitive_int(init->matrix);
}

PCF index_shift_poly(const PCF& p, long s) { return {p.a.shift(Q(s)), p.b.shift(Q(s))}; }

long init_start(const std::optional<InitialConditions>& init) { return init ? init->from_index : 1; }

}  // namespace

IntStep int_step_product(const Recurrence& rec, long lo, long hi) { return IntStepper(rec).product(lo, hi); }

StepMatrix step_product(const Recurrence& rec, long lo, long hi) {
  return {to_matq(int_step_product(rec, lo, hi)), lo, hi};
}

StepMatrix step_product(const PCF& pcf, long lo, long hi) { return step_product(to_recurrence(pcf), lo, hi); }

StepMatrix step_product_naive(const Recurrence& rec, long lo, long hi) {
  MatRF cm = companion(rec);
  MatQ acc = MatQ::identity(static_cast<std::size_t>(rec.order()));
  for (long n = lo; n <= hi; ++n) {
    if (rec.denom.eval(n) == 0) throw PoleError(n, "recurrence denominator vanishes");
    acc = acc * eval(cm, Q(n));
  }
  return {acc, lo, hi};
}

Q convergent(const PCF& pcf, long N, const std::optional<InitialConditions>& init) {
  Recurrence rec = to_recurrence(pcf);
  IntStep s = int_step_product(rec, init_start(init), N);
  MatInt x = integer_init(init) * s.m;
  if (x(1, 1) == 0) throw ZeroDenominator(N);
  return make_q(x(0, 1), x(1, 1));
}

std::optional<Q> mobius_apply(const MatQ& m, const std::optional<Q>& x) {
  if (!x) {
    if (m(1, 0) == 0) return std::nullopt;
    return Q(m(0, 0) / m(1, 0));
  }
  Q den = m(1, 0) * *x + m(1, 1);
  if (den == 0) return std::nullopt;
  return Q((m(0, 0) * *x + m(0, 1)) / den);
}

Real mobius_apply(const MatQ& m, const Real& x) {
  long p = x.prec();
  auto r = [&](const Q& q) { return Real::from_q(q, p); };
  if (x.is_inf()) {
    if (m(1, 0) == 0) return Real::inf(p);
    return r(m(0, 0)) / r(m(1, 0));
  }
  Real den = r(m(1, 0)) * x + r(m(1, 1));
  if (den.is_zero()) return Real::inf(p);
  return (r(m(0, 0)) * x + r(m(0, 1))) / den;
}

Real mobius_apply(const MatInt& m, const Real& x) {
  return mobius_apply(m.map([](const Int& z) { return Q(z); }), x);
}

long ApproxValue::reliable_digits() const {
  long cap = bits_to_digits(precision_bits);
  if (error_bound.is_zero()) return cap;
  if (!error_bound.is_finite() || !value.is_finite()) return 0;
  double scale = std::max(0.0, log_abs(value));
  double d = -(log_abs(error_bound) - scale) / std::log(10.0);
  if (d <= 0) return 0;
  return std::min(cap, static_cast<long>(std::floor(d)));
}

namespace {

// Numerator/denominator pairs of the Mobius image of the last column, for a run of depths.
struct Window {
  long first = 0;               // depth of nums[0]
  std::vector<Int> nums, dens;  // (init * P_n)(0) as nums[k]/dens[k] for n = first + k
};

Window convergent_window(const PCF& pcf, const std::optional<InitialConditions>& init, long lo, long hi) {
  Recurrence rec = to_recurrence(pcf);
  IntStepper st(rec);
  long start = init_start(init);
  MatInt P = integer_init(init) * st.product(start, lo).m;
  Window w;
  w.first = lo;
  auto record = [&] {
    w.nums.push_back(P(0, 1));
    w.dens.push_back(P(1, 1));
  };
  record();
  for (long n = lo + 1; n <= hi; ++n) {
    Int s;
    MatInt f = st.factor(n, s);
    P = P * f;
    // The two columns are consecutive solutions; drop their common factor to keep sizes in check.
    Int g = 0;
    for (const auto& e : P.data()) g = int_gcd(g, e);
    if (g > 1)
      for (auto& e : P.data()) e /= g;
    record();
  }
  return w;
}

Real window_value(const Window& w, long n, long prec) {
  std::size_t k = static_cast<std::size_t>(n - w.first);
  if (w.dens[k] == 0) throw ZeroDenominator(n);
  return Real::from_int(w.nums[k], prec) / Real::from_int(w.dens[k], prec);
}

// Polynomial extrapolation to h = 0 using nodes n_j = top - 2j, with h = 1/n, or
// h = 1/sqrt(n) when the error expands in half-integer powers of 1/n.
long span_start(long depth, long start) { return std::max(depth / 4, start + 1); }

Real extrapolate(const Window& w, const std::vector<Real>& vals, long top, int nodes, long prec, bool half_powers) {
  std::vector<Real> s;
  s.reserve(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    Real nj = Real::from_long(top - 2L * j, prec);
    s.push_back(half_powers ? sqrt(nj) : nj);
  }
  Real acc(prec);
  for (int j = 0; j < nodes; ++j) {
    Real wj = Real::from_long(1, prec);
    for (int i = 0; i < nodes; ++i) {
      if (i == j) continue;
      wj = wj * s[static_cast<std::size_t>(j)] / (s[static_cast<std::size_t>(j)] - s[static_cast<std::size_t>(i)]);
    }
    acc += wj * vals[static_cast<std::size_t>(top - 2L * j - w.first)];
  }
  return acc;
}

double log2_max_weight(long top, int nodes, bool half_powers) {
  auto node = [&](int j) {
    double n = static_cast<double>(top - 2L * j);
    return half_powers ? std::sqrt(n) : n;
  };
  double best = 0;
  for (int j = 0; j < nodes; ++j) {
    double s = 0;
    for (int i = 0; i < nodes; ++i)
      if (i != j) s += std::log2(node(j) / std::fabs(node(j) - node(i)));
    best = std::max(best, s);
  }
  return best;
}

// Solves A x = y by Gaussian elimination with partial pivoting and returns x[0].
Real solve_first(std::vector<std::vector<Real>> A, std::vector<Real> y) {
  std::size_t K = y.size();
  for (std::size_t c = 0; c < K; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < K; ++r)
      if (abs(A[r][c]) > abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    std::swap(y[c], y[piv]);
    if (A[c][c].is_zero()) return Real::nan(y[0].prec());
    for (std::size_t r = c + 1; r < K; ++r) {
      Real f = A[r][c] / A[c][c];
      if (f.is_zero()) continue;
      for (std::size_t k = c; k < K; ++k) A[r][k] -= f * A[c][k];
      y[r] -= f * y[c];
    }
  }
  std::vector<Real> x(K, Real(y[0].prec()));
  for (std::size_t c = K; c-- > 0;) {
    Real acc = y[c];
    for (std::size_t k = c + 1; k < K; ++k) acc -= A[c][k] * x[k];
    x[c] = acc / A[c][c];
  }
  return x[0];
}

// Nodes spread evenly over [top - span, top].
std::vector<long> spread_nodes(long top, long span, int count) {
  std::vector<long> out;
  for (int j = 0; j < count; ++j) out.push_back(top - (span * j) / (count - 1));
  return out;
}

// Least-structure fit of x(n) = L + sum_{k<=m, l<=logs} c_kl (lo/n)^k (log n)^l through
// exactly 1 + m (logs + 1) nodes. Handles recurrences whose characteristic exponents
// differ by an integer, where the error expansion picks up powers of log n.
Real log_extrapolate(const std::map<long, Real>& vals, const std::vector<long>& nodes, int m, int logs, long prec) {
  std::size_t K = nodes.size();
  Real lo = Real::from_long(nodes.back(), prec);
  std::vector<std::vector<Real>> A;
  std::vector<Real> y;
  for (long n : nodes) {
    Real x = lo / Real::from_long(n, prec);
    Real ln = log(Real::from_long(n, prec)) / log(lo);
    std::vector<Real> row{Real::from_long(1, prec)};
    Real lp = Real::from_long(1, prec);
    for (int l = 0; l <= logs; ++l) {
      Real xp = lp;
      for (int k = 1; k <= m; ++k) {
        xp = xp * x;
        row.push_back(xp);
      }
      lp = lp * ln;
    }
    A.push_back(std::move(row));
    y.push_back(vals.at(n).with_prec(prec));
  }
  (void)K;
  return solve_first(std::move(A), std::move(y));
}

}  // namespace

ApproxValue evaluate_limit(const PCF& pcf, const std::optional<InitialConditions>& init, long depth,
                           long precision_bits, const LimitOptions& opts) {
  if (depth < 2) throw InputError("evaluate_limit requires depth >= 2");
  precision_bits = std::max(64L, precision_bits);
  if (!init) {
    if (long r = last_positive_root(pcf.b); r > 0) {
      ApproxValue tail = evaluate_limit(index_shift_poly(pcf, r), std::nullopt, depth, precision_bits, opts);
      tail.start_index = r + 1;
      return tail;
    }
  }
  long start = init_start(init);
  if (depth <= start) throw InputError("depth must exceed the first product index");
  long prec = precision_bits + 64;

  int max_nodes = opts.max_nodes > 0 ? opts.max_nodes : 300;
  long span = depth - std::max(depth / 2, start);
  max_nodes = static_cast<int>(std::min<long>(max_nodes, span / 2 - 1));
  bool can_extrapolate = opts.extrapolate && max_nodes >= 4;

  long half = std::max(depth / 2, start);
  long lo = can_extrapolate ? depth - 2L * max_nodes - 1 : std::max(depth - 1, start);
  Window w = convergent_window(pcf, init, lo, depth);

  Recurrence rec = to_recurrence(pcf);
  MatInt Phalf = integer_init(init) * int_step_product(rec, start, half).m;

  ApproxValue out;
  out.precision_bits = precision_bits;
  out.depth = depth;
  out.value = window_value(w, depth, prec);
  Real at_half = Phalf(1, 1) == 0 ? Real::inf(prec)
                                  : Real::from_int(Phalf(0, 1), prec) / Real::from_int(Phalf(1, 1), prec);
  out.error_bound = abs(out.value - at_half);
  out.method = "direct";

  // Consecutive difference: tiny for geometric convergence, where extrapolation in 1/n only hurts.
  Real tail = depth > w.first ? abs(out.value - window_value(w, depth - 1, prec)) : out.error_bound;
  Real target = pow2(-precision_bits, prec) * std::max(1.0, std::fabs(out.value.to_double()));
  if (can_extrapolate && !(out.error_bound <= target) && !(tail <= target)) {
    std::vector<int> sizes;
    for (int k = 4; k < max_nodes; k *= 2) sizes.push_back(k);
    sizes.push_back(max_nodes);
    Real best_val(prec), best_err = Real::inf(prec);
    // Half-integer powers are only tried when integer powers reach under half the target digits.
    Real good_enough = pow2(-precision_bits / 2, prec) * std::max(1.0, std::fabs(out.value.to_double()));
    for (bool half_powers : {false, true}) {
      if (half_powers && best_err < good_enough) break;
      long wprec = prec + 64 + static_cast<long>(std::ceil(log2_max_weight(depth, max_nodes, half_powers)));
      std::vector<Real> vals;
      vals.reserve(w.nums.size());
      for (long n = w.first; n <= depth; ++n) vals.push_back(window_value(w, n, wprec));
      for (int k : sizes) {
        Real even = extrapolate(w, vals, depth, k, wprec, half_powers);
        Real odd = extrapolate(w, vals, depth - 1, k, wprec, half_powers);
        Real err = abs(even - odd);
        if (err < best_err) {
          best_err = err.with_prec(prec);
          best_val = even.with_prec(prec);
        }
      }
    }
    // Resonant cases: powers of log n in the error expansion defeat both passes above.
    if (!(best_err < good_enough) && depth - span_start(depth, start) >= 200) {
      long lo_n = span_start(depth, start);
      struct Shape {
        int m, logs;
      };
      const Shape shapes[] = {{12, 1}, {16, 2}, {20, 3}, {25, 3}, {24, 4}};
      std::map<long, Real> vals;
      std::vector<std::pair<std::vector<long>, std::vector<long>>> plans;
      for (const auto& sh : shapes) {
        int count = 1 + sh.m * (sh.logs + 1);
        auto even = spread_nodes(depth, depth - lo_n, count);
        auto odd = spread_nodes(depth - 1, depth - 1 - lo_n, count);
        for (long n : even) vals.emplace(n, Real(0));
        for (long n : odd) vals.emplace(n, Real(0));
        plans.emplace_back(even, odd);
      }
      long lprec = prec + 64 + 12L * (1 + 25 * 4);
      // Exact convergents at the node indices by chained products between them.
      MatInt P = integer_init(init);
      long at = start - 1;
      for (auto& [n, v] : vals) {
        P = P * int_step_product(rec, at + 1, n).m;
        at = n;
        if (P(1, 1) == 0) throw ZeroDenominator(n);
        v = Real::from_int(P(0, 1), lprec) / Real::from_int(P(1, 1), lprec);
      }
      for (std::size_t i = 0; i < plans.size(); ++i) {
        Real e = log_extrapolate(vals, plans[i].first, shapes[i].m, shapes[i].logs, lprec);
        Real o = log_extrapolate(vals, plans[i].second, shapes[i].m, shapes[i].logs, lprec);
        Real err = abs(e - o);
        if (err < best_err) {
          best_err = err.with_prec(prec);
          best_val = e.with_prec(prec);
        }
      }
    }
    if (best_err < out.error_bound && best_err < tail) {
      out.value = best_val;
      out.error_bound = best_err;
      out.method = "extrapolated";
    }
  }
  Real rel = out.error_bound / Real::from_double(std::max(1.0, std::fabs(out.value.to_double())), prec);
  out.converged = out.value.is_finite() && rel < pow2(-20, prec);
  out.value = out.value.with_prec(precision_bits);
  out.error_bound = out.error_bound.with_prec(64);
  return out;
}

Real cf_value(const PCF& pcf, const Real& k_value) {
  return k_value + Real::from_q(pcf.a.coeff(0), k_value.prec());
}

ApproxValue cf_value(const PCF& pcf, const ApproxValue& k_value) {
  ApproxValue out = k_value;
  out.value = cf_value(pcf, k_value.value);
  return out;
}

ExactConvergent exact_convergent(const PCF& pcf, long N) {
  IntStep s = int_step_product(to_recurrence(pcf), 1, N);
  Int p = s.m(0, 1), q = s.m(1, 1);
  if (q == 0) throw ZeroDenominator(N);
  Int g = int_gcd(p, q);
  if (q < 0) g = -g;
  return {p / g, q / g};
}

std::vector<Q> extend_sequence(const Recurrence& rec, const std::vector<Q>& initial, long start, long count) {
  std::size_t m = static_cast<std::size_t>(rec.order());
  if (initial.size() < m) throw InputError("not enough initial terms for the recurrence order");
  std::vector<Q> u(initial.begin(), initial.end());
  u.reserve(static_cast<std::size_t>(std::max<long>(count, 0)));
  for (long n = start + static_cast<long>(u.size()); n < start + count; ++n) {
    Q c = rec.denom.eval(n);
    if (c == 0) throw PoleError(n, "recurrence leading coefficient vanishes");
    Q acc = 0;
    std::size_t k = static_cast<std::size_t>(n - start);
    for (std::size_t i = 1; i <= m; ++i) acc += rec.coeffs[i - 1].eval(n) * u[k - i];
    u.push_back(acc / c);
  }
  if (static_cast<long>(u.size()) > count) u.resize(static_cast<std::size_t>(std::max<long>(count, 0)));
  return u;
}

long last_positive_root(const Poly& p) {
  if (p.is_zero()) return 0;
  auto r = positive_integer_roots(p);
  return r.empty() ? 0 : r.back();
}

}  // namespace pcf
