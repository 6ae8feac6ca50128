#include "doctest.h"
#include "pcf/expr.hpp"
#include "pcf/guess.hpp"
#include "pcf/linalg.hpp"
#include "pcf/transforms.hpp"

using namespace pcf;

namespace {
PCF pcf_of(const std::string& a, const std::string& b) { return PCF{parse_poly(a), parse_poly(b)}; }

// Independent partial sums of sum_{n>=0} n!/prod_{i=0..n}(2i+1).
std::vector<Q> row1_sums(int count) {
  std::vector<Q> out;
  Q acc = 0, term = 1;
  for (int n = 0; n < count; ++n) {
    if (n > 0) term = term * Q(n, 2 * n + 1);
    acc += term;
    out.push_back(acc);
  }
  return out;
}

void check_round_trip(const RationalSequence& s, const PCF& p, int count) {
  SeriesInit si = series_initial_conditions(s.terms[0], s.terms[1], s.terms[2], p.a, p.b);
  long first = si.init.from_index == 1 ? 0 : 1;
  for (long N = first; N < count; ++N) CHECK(convergent(p, N, si.init) == s.terms[static_cast<std::size_t>(N)]);
}
}  // namespace

TEST_CASE("series term evaluation") {
  auto s = eval_series_terms("(-1)^n/(2n+1)", 0, 3);
  CHECK(s.terms == std::vector<Q>{1, Q(2, 3), Q(13, 15)});
  auto r1 = eval_series_terms("n!/(2^(n+1) rising_factorial(1/2, n+1))", 0, 3);
  CHECK(r1.terms == std::vector<Q>{1, Q(4, 3), Q(22, 15)});
  auto r2 = eval_series_terms("2^n/(n binom(2n, n))", 1, 2);
  CHECK(r2.terms == std::vector<Q>{1, Q(4, 3)});
  CHECK(eval_series_terms("sum(k, 0, n, binom(n, k))", 0, 4).terms == std::vector<Q>{1, 3, 7, 15});
  CHECK(eval_series_terms("prod(k, 1, n, k) - n!", 0, 4).terms == std::vector<Q>{0, 0, 0, 0});
  CHECK(TermExpression("harmonic(n)").eval(3) == Q(11, 6));
  CHECK(TermExpression("pochhammer(n, 2)").eval(3) == 12);
  CHECK_THROWS_AS(TermExpression("k + n"), ParseError);
  CHECK_THROWS_AS(TermExpression("binom(n)"), ParseError);
  CHECK_THROWS_AS(eval_series_terms("1/(n-2)", 0, 5), PoleError);
  try {
    eval_series_terms("1/(n-2)", 0, 5);
  } catch (const PoleError& e) {
    CHECK(e.index() == 2);
  }
}

TEST_CASE("exact nullspace") {
  std::vector<std::vector<Q>> rows{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  auto ns = nullspace(rows, 3);
  REQUIRE(ns.size() == 1);
  for (const auto& r : rows) CHECK(r[0] * ns[0][0] + r[1] * ns[0][1] + r[2] * ns[0][2] == 0);
  CHECK(nullity_mod_p(rows, 3) == 1);
  CHECK(nullity_mod_p({{1, 0}, {0, Q(1, 3)}}, 2) == 0);
}

TEST_CASE("guessing simple sequences") {
  RationalSequence pow2{0, {}};
  for (int i = 0; i < 40; ++i) pow2.terms.emplace_back(Int(1) << i);
  auto g = guess_recurrence(pow2);
  REQUIRE(g);
  CHECK(g->order == 1);
  CHECK(g->degree == 0);
  CHECK(g->recurrence.coeffs[0] == Poly(2L));
  CHECK(g->recurrence.denom == Poly(1L));

  RationalSequence fib{0, {1, 1}};
  for (int i = 0; i < 40; ++i) fib.terms.push_back(fib.terms[fib.terms.size() - 1] + fib.terms[fib.terms.size() - 2]);
  auto f = guess_recurrence(fib);
  REQUIRE(f);
  CHECK(f->order == 2);
  CHECK(f->degree == 0);
  CHECK(f->recurrence.coeffs == std::vector<Poly>{Poly(1L), Poly(1L)});

  RationalSequence few{0, {1, 2, 3}};
  CHECK(!guess_recurrence(few));
}

TEST_CASE("guessed series recurrences canonicalize to the expected PCFs") {
  auto leibniz = eval_series_terms("(-1)^n/(2n+1)", 0, 200);
  auto g = guess_recurrence(leibniz);
  REQUIRE(g);
  CHECK(g->order == 2);
  PCF canon = to_pcf_canonical(g->recurrence).pcf;
  CHECK(canon == pcf_of("2", "(2n-1)^2"));
  check_round_trip(leibniz, canon, 50);

  RationalSequence r1{0, row1_sums(200)};
  auto g1 = guess_recurrence(r1);
  REQUIRE(g1);
  PCF c1 = to_pcf_canonical(g1->recurrence).pcf;
  CHECK(c1 == pcf_of("3n+1", "n(1-2n)"));
  check_round_trip(r1, c1, 50);
  SeriesInit si = series_initial_conditions(r1.terms[0], r1.terms[1], r1.terms[2], c1.a, c1.b);
  CHECK(projectively_equal(si.init.matrix, MatQ::of2(0, 1, 1, 1)));
}

TEST_CASE("property: minimality of the guessed order and degree") {
  for (const char* term : {"(-1)^n/(2n+1)", "n!/(2^(n+1) rising_factorial(1/2, n+1))", "1/n^2"}) {
    auto s = eval_series_terms(term, term[0] == '1' ? 1 : 0, 200);
    auto g = guess_recurrence(s);
    REQUIRE(g);
    GuessOptions lower_order;
    lower_order.max_order = g->order - 1;
    CHECK(!guess_recurrence(s, lower_order));
    if (g->degree > 0) {
      GuessOptions lower_degree;
      lower_degree.max_order = g->order;
      lower_degree.max_degree = g->degree - 1;
      CHECK(!guess_recurrence(s, lower_degree));
    }
  }
}

TEST_CASE("series initial conditions") {
  PCF p = pcf_of("2", "(2n-1)^2");
  SeriesInit si = series_initial_conditions(1, Q(2, 3), Q(13, 15), p.a, p.b);
  CHECK(si.x == 3);
  CHECK_THROWS_AS(series_initial_conditions(1, 2, 2, p.a, p.b), MathError);
}
