#pragma once

#include <string>
#include <vector>

#include "pcf/recurrence.hpp"

namespace pcf {

// PCF whose partial numerators/denominators are rational functions. Intermediate
// form between a rational recurrence (or a folded matrix) and a canonical PCF.
struct RationalPCF {
  RF a;
  RF b;
};

RationalPCF to_rational_pcf(const Recurrence& rec);  // order 2 only
RationalPCF to_rational_pcf(const PCF& pcf);

struct TransformStep {
  enum class Kind { Inflate, Shift, Fold };
  Kind kind = Kind::Inflate;
  RF c = RF(1L);  // Inflate
  long s = 0;     // Shift
  int k = 1;      // Fold (product of k consecutive companions, then reduction to a PCF)

  std::string str() const;
};

// Ordered list of transforms. value_map is the Mobius map sending the source
// limit K to the target limit K; it is only meaningful when value_map_valid.
struct TransformTrace {
  std::vector<TransformStep> steps;
  MatQ value_map = MatQ::identity(2);
  bool value_map_valid = true;

  std::string str() const;
};

// A_fold(n) = prod_{j=1..k} M(k n - k + j).
MatRF fold(const MatRF& m, int k);

// a_i(n) -> a_i(n) c(n) c(n-1) ... c(n-i+1). Rational c is allowed; the result then
// carries a denominator.
Recurrence inflate(const Recurrence& rec, const RF& c);
RationalPCF inflate(const RationalPCF& p, const RF& c);
// Polynomial result required; throws MathError otherwise.
PCF inflate(const PCF& p, const RF& c);

// Diagonal matrix U(n) relating companion(rec) and companion(inflate(rec, c)):
// CM(n) U(n+1) = U(n) CM'(n). Entries are products of c, so it is only
// available at concrete indices n >= order.
MatQ inflation_coboundary(const RF& c, int order, long n);

// Coefficients evaluated at n + s.
Recurrence index_shift(const Recurrence& rec, long s);
RationalPCF index_shift(const RationalPCF& p, long s);
PCF index_shift(const PCF& p, long s);

// Reduce a 2x2 step matrix T = [[alpha, beta], [gamma, delta]] to the PCF satisfied by
// its first column: a(n) = alpha(n+1) + delta(n) gamma(n+1)/gamma(n),
// b(n) = -det T(n) gamma(n+1)/gamma(n). Requires gamma not identically zero.
RationalPCF matrix_to_rational_pcf(const MatRF& t);

struct CanonicalResult {
  PCF pcf;
  TransformTrace trace;
};

// Inflate away denominators, deflate maximally, normalize content and the sign of a.
CanonicalResult to_pcf_canonical(const RationalPCF& p);
CanonicalResult to_pcf_canonical(const Recurrence& rec);
CanonicalResult to_pcf_canonical(const PCF& p);

// k-fold followed by reduction and canonicalization.
CanonicalResult fold_pcf(const PCF& p, int k);
// Companion-like 2x2 matrix to a canonical PCF.
CanonicalResult matrix_to_pcf(const MatRF& t);

// Re-run a trace on its source. Returns the rational PCF reached.
RationalPCF replay(const RationalPCF& source, const TransformTrace& trace);

// Minimal positive rational c such that c*alpha and c^2*beta are integers (either may be 0).
Q content_scale(const Q& alpha, const Q& beta);

}  // namespace pcf
