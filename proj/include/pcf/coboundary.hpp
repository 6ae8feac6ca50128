#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcf/identify.hpp"
#include "pcf/metrics.hpp"
#include "pcf/recurrence.hpp"
#include "pcf/transforms.hpp"

namespace pcf {

// p_A(n) A(n) U(n+1) = p_B(n) U(n) B(n), where A and B are the companions of pcf_a and
// pcf_b: the inputs after folding by fold_a / fold_b and a common index shift.
struct CoboundaryCertificate {
  PCF source_a, source_b;
  int fold_a = 1, fold_b = 1;
  long shift_a = 0, shift_b = 0;
  PCF pcf_a, pcf_b;
  MatPoly U;
  Poly p_a, p_b;
  bool verified = false;
  std::string hash;  // SHA-256 of the expanded identity
};

enum class MatchStatus { Matched, MetricsMismatch, MobiusNotFound, FitFailed, VerifyFailed };
std::string to_string(MatchStatus s);

struct MatchResult {
  MatchStatus status = MatchStatus::FitFailed;
  std::optional<CoboundaryCertificate> certificate;
  std::vector<std::string> diagnostics;
};

// U(1) = M_A adj(M_B) for L_A = M_A(c), L_B = M_B(c); integer, gcd 1, first nonzero entry positive.
MatInt solve_initial_u(const MatInt& m_a, const MatInt& m_b);

// U(1..N) with U(n+1) proportional to adj(A(n)) U(n) B(n), each made primitive.
// Throws PoleError when A(n) is singular at some n < N.
std::vector<MatInt> propagate_u(const PCF& a, const PCF& b, const MatInt& u1, long count);

// Exact rational function through (n, value) pairs with numerator+denominator degree <= cap.
std::optional<RF> fit_rational(const std::vector<std::pair<long, Q>>& samples, int cap);

// Fit each entry of the projective samples after dividing by the normalization entry
// (the one whose last zero comes first); returns a primitive polynomial matrix.
struct FitOutcome {
  std::optional<MatPoly> U;
  bool underdetermined = false;  // some degree pair was skipped for lack of samples
  std::string detail;
};
FitOutcome fit_rational_matrix(const std::vector<MatInt>& samples, long first_index, int cap);

struct VerifyOutcome {
  bool ok = false;
  Poly p_a, p_b;
  std::string hash;
  std::string detail;
};
VerifyOutcome verify_coboundary(const PCF& a, const PCF& b, const MatPoly& U);
// Rational-matrix form: A(n) U(n+1) and U(n) B(n) are scalar multiples of each other
// over Q(n), with U invertible.
bool verify_matrix_coboundary(const MatRF& a, const MatRF& b, const MatRF& U);
// Independent re-check by exact evaluation at integer points.
bool recheck_pointwise(const PCF& a, const PCF& b, const MatPoly& U, const Poly& p_a, const Poly& p_b, long points = 60);

struct MatchOptions {
  double delta_tol = 0.05;
  int fold_cap = 3;
  int degree_cap = 24;
  long samples = 40;
  // Relative tolerance when reading the fold pair off the rate ratio. Finite-depth rates
  // carry a polynomial-prefactor bias of a few percent.
  double rate_tol = 0.05;
  // When either limit cannot be identified against the constant (typically too few digits
  // for a slowly converging pair), U(1) is read off an integer relation between the two
  // limits themselves. A wrong relation cannot survive the exact verification.
  bool direct_relation = true;
  long depth = 4000;
};

// Returns the Mobius matrix M with K(pcf) = M(constant), or nullopt.
using KIdentifier = std::function<std::optional<MatInt>(const PCF&)>;
KIdentifier default_identifier(const std::string& constant, long depth = 4000, long digits = 250);

struct MatchInputs {
  PCF a, b;
  std::optional<Metrics> metrics_a, metrics_b;
};

MatchResult match_pair(const MatchInputs& in, const KIdentifier& identify, const MatchOptions& opts = {});

// Build the certificate for (B, A) from one for (A, B) and re-verify it.
std::optional<CoboundaryCertificate> reverse_certificate(const CoboundaryCertificate& c);

// Re-derive the used PCFs from the sources and re-verify the identity; true when
// every recorded field is consistent.
bool check_certificate(const CoboundaryCertificate& c, std::string* why = nullptr);

}  // namespace pcf
