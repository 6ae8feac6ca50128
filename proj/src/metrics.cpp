#include "pcf/metrics.hpp"

#include <cmath>

namespace pcf {

namespace {

long bit_size(const Int& z) { return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2)); }

// log2 of |p1/q1 - p2/q2|, exactly from the integers; -inf when they coincide.
double log2_gap(const ExactConvergent& a, const ExactConvergent& b) {
  Int cross = a.p * b.q - b.p * a.q;
  if (cross == 0) return -INFINITY;
  return (log_abs(cross) - log_abs(a.q) - log_abs(b.q)) / std::log(2.0);
}

PCF index_shift_pcf(const PCF& p, long s) { return {p.a.shift(Q(s)), p.b.shift(Q(s))}; }

}  // namespace

Metrics compute_metrics(const PCF& pcf, long depth) {
  if (depth < 2) throw InputError("metric depth must be at least 2");
  // Both metrics are shift invariant; start past any positive root of b so the
  // convergents do not freeze at a rational value.
  if (long r = last_positive_root(pcf.b); r > 0) return compute_metrics(index_shift_pcf(pcf, r), depth);
  ExactConvergent xn = exact_convergent(pcf, depth);
  ExactConvergent x2n = exact_convergent(pcf, 2 * depth);
  // The working precision only has to resolve |L - x_n|, which the gap to x_2n estimates.
  double gap_bits = log2_gap(xn, x2n);
  long cap = 2 * bit_size(xn.q) + 128;
  long prec = std::isfinite(gap_bits) ? std::min(cap, static_cast<long>(-gap_bits) + 256) : 256;
  prec = std::max(prec, 128L);

  Metrics m;
  m.delta.depth = m.rate.depth = depth;
  ApproxValue L = evaluate_limit(pcf, std::nullopt, 2 * depth, prec);
  m.delta.limit_used = L;

  long wp = L.value.prec() + 64;
  Real xr = Real::from_int(xn.p, wp) / Real::from_int(xn.q, wp);
  Real diff = abs(L.value.with_prec(wp) - xr);
  if (diff.is_zero() || !std::isfinite(gap_bits)) {
    m.delta.defined = false;
    m.delta.note = "convergent equals the limit to working precision";
    m.delta.delta = 0;
    m.rate.raw = 0;
    m.rate.rate = 0;
    return m;
  }
  double log_diff = log_abs(diff);
  double log_q = log_abs(xn.q);
  if (log_q <= 0) {
    m.delta.defined = false;
    m.delta.note = "|q_n| <= 1";
    m.delta.delta = 0;
  } else {
    m.delta.delta = -1.0 - log_diff / log_q;
  }
  m.rate.raw = log_diff / static_cast<double>(depth);
  m.rate.rate = std::fabs(m.rate.raw) < kRateThreshold ? 0.0 : std::fabs(m.rate.raw);
  return m;
}

DeltaEstimate irrationality_delta(const PCF& pcf, long depth) { return compute_metrics(pcf, depth).delta; }

RateEstimate convergence_rate(const PCF& pcf, long depth) { return compute_metrics(pcf, depth).rate; }

std::optional<Q> rate_ratio(double ra, double rb, long den_cap, double tol) {
  ra = std::fabs(ra);
  rb = std::fabs(rb);
  if (ra == 0 || rb == 0) return Q(0);
  if (!std::isfinite(ra) || !std::isfinite(rb)) return std::nullopt;
  double x = ra / rb;
  for (long q = 1; q <= den_cap; ++q) {
    long p = std::lround(x * static_cast<double>(q));
    if (p <= 0) continue;
    double approx = static_cast<double>(p) / static_cast<double>(q);
    if (std::fabs(x / approx - 1.0) < tol) return Q(p, q);
  }
  return std::nullopt;
}

std::optional<Q> rate_ratio(const RateEstimate& a, const RateEstimate& b, long den_cap, double tol) {
  return rate_ratio(a.rate, b.rate, den_cap, tol);
}

}  // namespace pcf
