#include "pcf/coboundary.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pcf/hash.hpp"
#include "pcf/identify.hpp"
#include "pcf/linalg.hpp"

namespace pcf {

std::string to_string(MatchStatus s) {
  switch (s) {
    case MatchStatus::Matched: return "matched";
    case MatchStatus::MetricsMismatch: return "metrics-mismatch";
    case MatchStatus::MobiusNotFound: return "mobius-not-found";
    case MatchStatus::FitFailed: return "fit-failed";
    case MatchStatus::VerifyFailed: return "verify-failed";
  }
  return "unknown";
}

MatInt solve_initial_u(const MatInt& m_a, const MatInt& m_b) {
  MatInt u = m_a * adjugate(m_b);
  if (det(u) == 0) throw MathError("initial coboundary is singular");
  return primitive_int(u.map([](const Int& z) { return Q(z); }));
}

namespace {

MatQ companion_at(const PCF& p, long n) { return MatQ::of2(Q(0), p.b.eval(n), Q(1), p.a.eval(n)); }

MatQ companion_adj_at(const PCF& p, long n) { return MatQ::of2(p.a.eval(n), -p.b.eval(n), Q(-1), Q(0)); }

MatQ to_q(const MatInt& m) { return m.map([](const Int& z) { return Q(z); }); }

}  // namespace

std::vector<MatInt> propagate_u(const PCF& a, const PCF& b, const MatInt& u1, long count) {
  std::vector<MatInt> out;
  if (count <= 0) return out;
  out.push_back(u1);
  MatQ cur = to_q(u1);
  for (long n = 1; n < count; ++n) {
    if (a.b.eval(n) == 0) throw PoleError(n, "left companion is singular");
    cur = companion_adj_at(a, n) * cur * companion_at(b, n);
    MatInt next = primitive_int(cur);
    if (next.is_zero()) throw PoleError(n, "coboundary collapsed to zero");
    out.push_back(next);
    cur = to_q(next);
  }
  return out;
}

std::optional<RF> fit_rational(const std::vector<std::pair<long, Q>>& samples, int cap) {
  bool all_zero = true;
  for (const auto& s : samples) all_zero = all_zero && s.second == 0;
  if (all_zero && !samples.empty()) return RF(0L);

  for (int total = 0; total <= cap; ++total) {
    for (int dd = 0; dd <= total; ++dd) {
      int dn = total - dd;
      std::size_t cols = static_cast<std::size_t>(dn + dd + 2);
      if (samples.size() < 2 * cols) continue;
      std::vector<std::vector<Q>> rows;
      rows.reserve(samples.size());
      for (const auto& [n, v] : samples) {
        std::vector<Q> row;
        row.reserve(cols);
        Q p(1);
        for (int i = 0; i <= dn; ++i, p *= n) row.push_back(p);
        p = 1;
        for (int i = 0; i <= dd; ++i, p *= n) row.push_back(-v * p);
        rows.push_back(std::move(row));
      }
      try {
        if (nullity_mod_p(rows, cols) == 0) continue;
      } catch (const MathError&) {
        // a denominator divisible by the prime: fall through to the exact test
      }
      std::vector<std::vector<Q>> head(rows.begin(), rows.begin() + static_cast<long>(std::min(rows.size(), cols + 8)));
      auto basis = nullspace(head, cols);
      if (basis.empty()) basis = nullspace(rows, cols);
      for (const auto& vec : basis) {
        std::vector<Q> num(vec.begin(), vec.begin() + dn + 1), den(vec.begin() + dn + 1, vec.end());
        Poly P = Poly::from_coeffs(num), D = Poly::from_coeffs(den);
        if (D.is_zero()) continue;
        bool ok = true;
        for (const auto& [n, v] : samples) {
          Q dv = D.eval(n);
          if (dv == 0 || P.eval(n) != v * dv) {
            ok = false;
            break;
          }
        }
        if (ok) return rf_reduce(P, D);
      }
    }
  }
  return std::nullopt;
}

FitOutcome fit_rational_matrix(const std::vector<MatInt>& samples, long first_index, int cap) {
  FitOutcome out;
  if (samples.empty()) {
    out.detail = "no samples";
    return out;
  }
  std::size_t rows = samples[0].rows(), cols = samples[0].cols(), cells = rows * cols;
  // Normalization entry: never identically zero, last zero as early as possible.
  std::size_t norm = cells;
  long best_last = std::numeric_limits<long>::max();
  for (std::size_t e = 0; e < cells; ++e) {
    long last = -1;
    bool any = false;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].data()[e] == 0)
        last = static_cast<long>(i);
      else
        any = true;
    }
    if (any && last < best_last) {
      best_last = last;
      norm = e;
    }
  }
  if (norm == cells) {
    out.detail = "all samples vanish";
    return out;
  }
  std::size_t start = static_cast<std::size_t>(best_last + 1);
  std::vector<RF> fitted(cells);
  for (std::size_t e = 0; e < cells; ++e) {
    if (e == norm) {
      fitted[e] = RF(1L);
      continue;
    }
    std::vector<std::pair<long, Q>> pts;
    for (std::size_t i = start; i < samples.size(); ++i)
      pts.emplace_back(first_index + static_cast<long>(i), make_q(samples[i].data()[e], samples[i].data()[norm]));
    std::size_t usable = pts.size();
    auto f = fit_rational(pts, cap);
    if (!f) {
      out.underdetermined = usable < 2 * static_cast<std::size_t>(cap + 2);
      out.detail = "entry (" + std::to_string(e / cols) + "," + std::to_string(e % cols) + ") has no rational fit of degree <= " +
                   std::to_string(cap) + " over " + std::to_string(usable) + " samples";
      return out;
    }
    fitted[e] = *f;
  }
  Poly L(1L);
  for (const auto& f : fitted) L = lcm(L, f.den());
  MatPoly U(rows, cols);
  for (std::size_t e = 0; e < cells; ++e) U.data()[e] = exact_div(fitted[e].num() * L, fitted[e].den());
  Poly g;
  for (const auto& p : U.data()) g = gcd(g, p);
  if (!g.is_zero() && !g.is_constant())
    for (auto& p : U.data()) p = exact_div(p, g);
  out.U = primitive_poly(U);
  return out;
}

namespace {

MatPoly poly_companion(const PCF& p) { return MatPoly::of2(Poly(0L), p.b, Poly(1L), p.a); }

MatPoly shift_poly(const MatPoly& m, long s) { return m.map([&](const Poly& p) { return p.shift(Q(s)); }); }

std::string mat_poly_str(const MatPoly& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).str();
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string identity_text(const PCF& a, const PCF& b, const MatPoly& U, const Poly& pa, const Poly& pb,
                          const MatPoly& lhs) {
  return "A=" + a.str() + "\nB=" + b.str() + "\nU=" + mat_poly_str(U) + "\npA=" + pa.str() + "\npB=" + pb.str() +
         "\npA*A(n)*U(n+1)=pB*U(n)*B(n)=" + mat_poly_str(lhs) + "\n";
}

}  // namespace

bool verify_matrix_coboundary(const MatRF& a, const MatRF& b, const MatRF& U) {
  if (det(U).is_zero()) return false;
  return projectively_equal(a * shift(U, Q(1)), U * b);
}

VerifyOutcome verify_coboundary(const PCF& a, const PCF& b, const MatPoly& U) {
  VerifyOutcome out;
  if (U.rows() != 2 || U.cols() != 2) {
    out.detail = "U must be 2x2";
    return out;
  }
  if (det(U).is_zero()) {
    out.detail = "U is singular";
    return out;
  }
  MatPoly X = poly_companion(a) * shift_poly(U, 1);
  MatPoly Y = U * poly_companion(b);
  std::size_t pivot = 4;
  for (std::size_t e = 0; e < 4; ++e)
    if (!Y.data()[e].is_zero()) {
      pivot = e;
      break;
    }
  if (pivot == 4) {
    out.detail = "U(n) B(n) vanishes";
    return out;
  }
  for (std::size_t e = 0; e < 4; ++e) {
    if (X.data()[e] * Y.data()[pivot] != X.data()[pivot] * Y.data()[e]) {
      out.detail = "A U(n+1) and U(n) B are not proportional (entry " + std::to_string(e) + ")";
      return out;
    }
  }
  RF lambda = RF(X.data()[pivot], Y.data()[pivot]);
  if (lambda.is_zero()) {
    out.detail = "proportionality factor vanishes";
    return out;
  }
  // lambda = pB / pA with jointly primitive integer polynomials, pA leading positive.
  Poly pa = lambda.den(), pb = lambda.num();
  Int den = int_lcm(pa.denominator_lcm(), pb.denominator_lcm());
  Int g(0);
  for (const Poly* p : {&pa, &pb})
    for (const auto& c : p->coeffs()) g = int_gcd(g, Int(c.get_num() * (den / c.get_den())));
  Q scale = make_q(den, g);
  if (pa.lead() < 0) scale = -scale;
  pa *= scale;
  pb *= scale;
  MatPoly lhs = X.map([&](const Poly& p) { return pa * p; });
  MatPoly rhs = Y.map([&](const Poly& p) { return pb * p; });
  if (lhs != rhs) {
    out.detail = "scaled sides differ";
    return out;
  }
  out.ok = true;
  out.p_a = pa;
  out.p_b = pb;
  out.hash = sha256_hex(identity_text(a, b, U, pa, pb, lhs));
  return out;
}

bool recheck_pointwise(const PCF& a, const PCF& b, const MatPoly& U, const Poly& p_a, const Poly& p_b, long points) {
  auto at = [&](long n) { return U.map([&](const Poly& p) { return p.eval(n); }); };
  for (long n = -points / 4; n <= points; ++n) {
    MatQ lhs = companion_at(a, n) * at(n + 1);
    MatQ rhs = at(n) * companion_at(b, n);
    Q pa = p_a.eval(n), pb = p_b.eval(n);
    for (std::size_t e = 0; e < 4; ++e)
      if (pa * lhs.data()[e] != pb * rhs.data()[e]) return false;
  }
  // A few large arguments catch identities that only hold on a short range.
  for (long n : {1000L, 123457L, 99999989L}) {
    MatQ lhs = companion_at(a, n) * at(n + 1);
    MatQ rhs = at(n) * companion_at(b, n);
    for (std::size_t e = 0; e < 4; ++e)
      if (p_a.eval(n) * lhs.data()[e] != p_b.eval(n) * rhs.data()[e]) return false;
  }
  return true;
}

KIdentifier default_identifier(const std::string& constant, long depth, long digits) {
  return [constant, depth, digits](const PCF& p) -> std::optional<MatInt> {
    try {
      ApproxValue L = evaluate_limit(p, std::nullopt, depth, digits_to_bits(digits) + 64);
      IdentifyOptions io;
      io.max_digits = digits;
      auto id = identify_mobius(L, constant, io);
      if (!id) return std::nullopt;
      return id->matrix;
    } catch (const PrecisionError&) {
      return std::nullopt;
    } catch (const MathError&) {
      return std::nullopt;
    }
  };
}

namespace {

PCF folded(const PCF& p, int k) { return k == 1 ? p : fold_pcf(p, k).pcf; }

// U(1) with L_A = U(1)(L_B) from gamma L_A L_B + delta L_A - alpha L_B - beta = 0.
std::optional<MatInt> direct_initial_u(const PCF& a, const PCF& b, long depth, std::string& detail) {
  long bits = digits_to_bits(250) + 64;
  ApproxValue la = evaluate_limit(a, std::nullopt, depth, bits);
  ApproxValue lb = evaluate_limit(b, std::nullopt, depth, bits);
  long digits = std::min(la.reliable_digits(), lb.reliable_digits());
  if (digits < 20) {
    detail = "limits carry only " + std::to_string(digits) + " digits";
    return std::nullopt;
  }
  PslqOptions po;
  po.working_digits = digits;
  po.max_coeff_digits = std::min<long>(30, (digits - 10) / 4);
  auto rel = pslq({la.value * lb.value, la.value, lb.value, Real::from_long(1, la.value.prec())}, po);
  if (!rel) {
    detail = "no relation between the limits at " + std::to_string(digits) + " digits";
    return std::nullopt;
  }
  const auto& r = rel->coefficients;
  MatInt u = MatInt::of2(-r[2], -r[3], r[0], r[1]);
  if (u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0) == 0) {
    detail = "degenerate relation between the limits";
    return std::nullopt;
  }
  detail = "U(1) from a direct relation at " + std::to_string(digits) + " digits";
  return primitive_int(u.map([](const Int& z) { return Q(z); }));
}

std::vector<std::pair<int, int>> fold_options(const MatchInputs& in, const MatchOptions& opts, MatchResult& res,
                                              bool& mismatch) {
  std::vector<std::pair<int, int>> base = {{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  if (!in.metrics_a || !in.metrics_b) return base;
  double ra = in.metrics_a->rate.rate, rb = in.metrics_b->rate.rate;
  if (ra == 0 && rb == 0) {
    res.diagnostics.push_back("both rates vanish; trying small folds");
    return base;
  }
  if (ra == 0 || rb == 0) {
    res.diagnostics.push_back("only one rate vanishes");
    mismatch = true;
    return {};
  }
  auto r = rate_ratio(in.metrics_a->rate, in.metrics_b->rate, 12, opts.rate_tol);
  if (!r) {
    res.diagnostics.push_back("rate ratio is not a small rational");
    mismatch = true;
    return {};
  }
  int ka = static_cast<int>(r->get_den().get_si()), kb = static_cast<int>(r->get_num().get_si());
  res.diagnostics.push_back("rate ratio " + q_str(*r) + ": folds (" + std::to_string(ka) + "," + std::to_string(kb) + ")");
  if (ka > opts.fold_cap || kb > opts.fold_cap) {
    res.diagnostics.push_back("fold exceeds cap " + std::to_string(opts.fold_cap));
    mismatch = true;
    return {};
  }
  return {{ka, kb}};
}

}  // namespace

MatchResult match_pair(const MatchInputs& in, const KIdentifier& identify, const MatchOptions& opts) {
  MatchResult res;
  if (in.metrics_a && in.metrics_b) {
    double d = std::fabs(in.metrics_a->delta.delta - in.metrics_b->delta.delta);
    if (!(d < opts.delta_tol)) {
      res.status = MatchStatus::MetricsMismatch;
      res.diagnostics.push_back("delta gap " + std::to_string(d) + " exceeds tolerance");
      return res;
    }
  }
  bool mismatch = false;
  auto options = fold_options(in, opts, res, mismatch);
  if (mismatch) {
    res.status = MatchStatus::MetricsMismatch;
    return res;
  }
  MatchStatus worst = MatchStatus::MobiusNotFound;
  auto note = [&](MatchStatus s) {
    if (static_cast<int>(s) > static_cast<int>(worst)) worst = s;
  };
  for (auto [ka, kb] : options) {
    std::string tag = "folds (" + std::to_string(ka) + "," + std::to_string(kb) + "): ";
    PCF fa, fb;
    try {
      fa = folded(in.a, ka);
      fb = folded(in.b, kb);
    } catch (const MathError& e) {
      res.diagnostics.push_back(tag + "fold failed: " + e.what());
      continue;
    }
    long s = std::max(last_positive_root(fa.b), last_positive_root(fb.b));
    PCF ua = index_shift(fa, s), ub = index_shift(fb, s);
    auto ma = identify(ua), mb = identify(ub);
    MatInt u1;
    if (ma && mb) {
      try {
        u1 = solve_initial_u(*ma, *mb);
      } catch (const MathError& e) {
        res.diagnostics.push_back(tag + e.what());
        note(MatchStatus::MobiusNotFound);
        continue;
      }
    } else {
      res.diagnostics.push_back(tag + "no Mobius identification");
      std::optional<MatInt> direct;
      if (opts.direct_relation) {
        std::string detail;
        try {
          direct = direct_initial_u(ua, ub, opts.depth, detail);
        } catch (const std::runtime_error& e) {
          detail = e.what();
        }
        res.diagnostics.push_back(tag + detail);
      }
      if (!direct) {
        note(MatchStatus::MobiusNotFound);
        continue;
      }
      u1 = *direct;
    }
    FitOutcome fit;
    try {
      long count = opts.samples;
      auto samples = propagate_u(ua, ub, u1, count);
      fit = fit_rational_matrix(samples, 1, opts.degree_cap);
      if (!fit.U && fit.underdetermined) {
        count = std::max(count, 2L * opts.degree_cap + 8) + count / 2;
        samples = propagate_u(ua, ub, u1, count);
        fit = fit_rational_matrix(samples, 1, opts.degree_cap);
      }
    } catch (const MathError& e) {
      res.diagnostics.push_back(tag + "propagation failed: " + e.what());
      note(MatchStatus::FitFailed);
      continue;
    }
    if (!fit.U) {
      res.diagnostics.push_back(tag + "fit failed: " + fit.detail);
      note(MatchStatus::FitFailed);
      continue;
    }
    auto v = verify_coboundary(ua, ub, *fit.U);
    if (!v.ok || !recheck_pointwise(ua, ub, *fit.U, v.p_a, v.p_b)) {
      res.diagnostics.push_back(tag + "verification failed: " + v.detail);
      note(MatchStatus::VerifyFailed);
      continue;
    }
    CoboundaryCertificate c;
    c.source_a = in.a;
    c.source_b = in.b;
    c.fold_a = ka;
    c.fold_b = kb;
    c.shift_a = c.shift_b = s;
    c.pcf_a = ua;
    c.pcf_b = ub;
    c.U = *fit.U;
    c.p_a = v.p_a;
    c.p_b = v.p_b;
    c.verified = true;
    c.hash = v.hash;
    res.diagnostics.push_back(tag + "matched, shift " + std::to_string(s));
    res.status = MatchStatus::Matched;
    res.certificate = std::move(c);
    return res;
  }
  res.status = worst;
  return res;
}

std::optional<CoboundaryCertificate> reverse_certificate(const CoboundaryCertificate& c) {
  CoboundaryCertificate r = c;
  std::swap(r.source_a, r.source_b);
  std::swap(r.fold_a, r.fold_b);
  std::swap(r.shift_a, r.shift_b);
  std::swap(r.pcf_a, r.pcf_b);
  MatPoly adj = adjugate(c.U);
  Poly g;
  for (const auto& p : adj.data()) g = gcd(g, p);
  if (!g.is_zero() && !g.is_constant())
    for (auto& p : adj.data()) p = exact_div(p, g);
  r.U = primitive_poly(adj);
  auto v = verify_coboundary(r.pcf_a, r.pcf_b, r.U);
  if (!v.ok) return std::nullopt;
  r.p_a = v.p_a;
  r.p_b = v.p_b;
  r.hash = v.hash;
  r.verified = true;
  return r;
}

bool check_certificate(const CoboundaryCertificate& c, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  try {
    if (c.fold_a < 1 || c.fold_b < 1) return fail("fold factors must be positive");
    PCF ua = index_shift(folded(c.source_a, c.fold_a), c.shift_a);
    PCF ub = index_shift(folded(c.source_b, c.fold_b), c.shift_b);
    if (ua != c.pcf_a) return fail("recorded A does not follow from its source: expected " + ua.str());
    if (ub != c.pcf_b) return fail("recorded B does not follow from its source: expected " + ub.str());
    auto v = verify_coboundary(ua, ub, c.U);
    if (!v.ok) return fail("identity does not hold: " + v.detail);
    if (v.p_a != c.p_a || v.p_b != c.p_b) return fail("recorded external factors differ from " + v.p_a.str() + ", " + v.p_b.str());
    if (!c.hash.empty() && v.hash != c.hash) return fail("hash mismatch");
    if (!recheck_pointwise(ua, ub, c.U, c.p_a, c.p_b)) return fail("pointwise check failed");
  } catch (const MathError& e) {
    return fail(e.what());
  }
  return true;
}

}  // namespace pcf
