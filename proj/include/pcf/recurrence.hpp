#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcf/algebra.hpp"
#include "pcf/matrix.hpp"
#include "pcf/real.hpp"

namespace pcf {

// Polynomial continued fraction b1/(a1 + b2/(a2 + ...)), i.e. the order-2 recurrence
// u_n = a(n) u_{n-1} + b(n) u_{n-2}.
struct PCF {
  Poly a;
  Poly b;

  bool operator==(const PCF& o) const { return a == o.a && b == o.b; }
  bool operator!=(const PCF& o) const { return !(*this == o); }
  bool operator<(const PCF& o) const { return a < o.a || (a == o.a && b < o.b); }
  std::string str() const;  // "PCF(a; b)"
  bool has_integer_coeffs() const { return a.has_integer_coeffs() && b.has_integer_coeffs(); }
};

// Accepts "PCF(a; b)" and "PCF(a, b)" (a comma at nesting depth zero).
PCF parse_pcf(const std::string& text);

// Order-m recurrence c(n) u_n = sum_{i=1..m} coeffs[i-1](n) u_{n-i}.
struct Recurrence {
  std::vector<Poly> coeffs;
  Poly denom = Poly(1L);

  int order() const { return static_cast<int>(coeffs.size()); }
  bool polynomial() const { return denom.is_constant(); }
  bool operator==(const Recurrence& o) const { return coeffs == o.coeffs && denom == o.denom; }
  std::string str() const;
};

Recurrence to_recurrence(const PCF& pcf);
// Valid only for order 2 recurrences with constant denominator.
PCF to_pcf(const Recurrence& rec);

// Companion matrix: ones on the subdiagonal, last column holds a_m ... a_1 top to bottom.
MatRF companion(const Recurrence& rec);
MatRF companion(const PCF& pcf);

struct StepMatrix {
  MatQ matrix;
  long from_index = 1;
  long to_index = 0;
};

// Exact product CM(lo) * ... * CM(hi) by binary splitting; identity when lo > hi.
// Throws PoleError when the recurrence denominator vanishes at an index in range.
StepMatrix step_product(const Recurrence& rec, long lo, long hi);
StepMatrix step_product(const PCF& pcf, long lo, long hi);
// Reference left-to-right product used by property tests.
StepMatrix step_product_naive(const Recurrence& rec, long lo, long hi);

// Integer form of a step product: matrix / den. Projective users can ignore den.
struct IntStep {
  MatInt m;
  Int den;
};
IntStep int_step_product(const Recurrence& rec, long lo, long hi);

struct InitialConditions {
  MatQ matrix = MatQ::identity(2);
  long from_index = 1;  // index of the first companion factor the matrix multiplies
};

// (init * CM(from) * ... * CM(N))(0) as a Mobius map; with the identity this is p_N/q_N.
// Throws ZeroDenominator when the denominator vanishes.
Q convergent(const PCF& pcf, long N, const std::optional<InitialConditions>& init = std::nullopt);

// Mobius action; std::nullopt stands for infinity.
std::optional<Q> mobius_apply(const MatQ& m, const std::optional<Q>& x);
Real mobius_apply(const MatQ& m, const Real& x);
Real mobius_apply(const MatInt& m, const Real& x);

struct ApproxValue {
  Real value;
  long precision_bits = 64;
  Real error_bound;
  long depth = 0;
  bool converged = true;
  std::string method = "direct";  // "direct" or "extrapolated"
  // First companion index in the product. Without initial conditions, evaluation starts
  // after the last positive integer root of b, where the convergents would otherwise freeze.
  long start_index = 1;

  // Decimal digits trusted after accounting for the error bound (capped by precision).
  long reliable_digits() const;
};

struct LimitOptions {
  bool extrapolate = true;
  // Largest node count tried by the 1/n extrapolation (0 = automatic).
  int max_nodes = 0;
};

// High-precision approximation of the limit of convergent(N, init) as N grows.
ApproxValue evaluate_limit(const PCF& pcf, const std::optional<InitialConditions>& init, long depth,
                           long precision_bits, const LimitOptions& opts = {});

// a(0) + K: the value conventionally attached to PCF(a, b) in formula tables.
Real cf_value(const PCF& pcf, const Real& k_value);
ApproxValue cf_value(const PCF& pcf, const ApproxValue& k_value);

// Exact reduced convergent p_N/q_N (identity init) plus the reduced denominator.
struct ExactConvergent {
  Int p;
  Int q;
};
ExactConvergent exact_convergent(const PCF& pcf, long N);

// Extend an exact sequence using a recurrence: given u_{start..start+m-1}, returns
// u_{start..start+count-1}. Index n in the recurrence is the sequence index.
std::vector<Q> extend_sequence(const Recurrence& rec, const std::vector<Q>& initial, long start, long count);

// Largest positive integer root of b (0 if none); the index shift needed before
// companion matrices are invertible at every n >= 1.
long last_positive_root(const Poly& p);

}  // namespace pcf
