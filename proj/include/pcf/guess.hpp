#pragma once

#include <optional>

#include "pcf/recurrence.hpp"
#include "pcf/terms.hpp"

namespace pcf {

struct GuessOptions {
  int max_order = 3;
  int max_degree = 16;
  int surplus = 20;  // equations held out beyond the unknown count
};

struct GuessResult {
  // Indexed by the sequence index: c(n) s_n = sum_i a_i(n) s_{n-i}.
  Recurrence recurrence;
  int order = 0;
  int degree = 0;
  long surplus_verified = 0;
};

// Smallest (order, degree) polynomial recurrence annihilating every term, searching
// order first and then degree. std::nullopt when none exists within the bounds.
std::optional<GuessResult> guess_recurrence(const RationalSequence& seq, const GuessOptions& opts = {});

// Does rec annihilate every term of seq (indices as in the sequence)?
bool annihilates(const Recurrence& rec, const RationalSequence& seq);

struct SeriesInit {
  Q x;
  InitialConditions init;
};

// Initial conditions making convergent(N, init) of PCF(a, b) equal the partial sum S_N.
// The raw construction [[S0, x S1], [1, x]] multiplies the products from index 2; when
// b(1) != 0 it is moved to index 1 through the adjugate of CM(1).
SeriesInit series_initial_conditions(const Q& s0, const Q& s1, const Q& s2, const Poly& a, const Poly& b);

}  // namespace pcf
