#include <random>

#include "doctest.h"
#include "pcf/algebra.hpp"
#include "pcf/expr.hpp"
#include "pcf/matrix.hpp"
#include "pcf/mvpoly.hpp"

using namespace pcf;

namespace {
Poly P(const std::string& s) { return parse_poly(s); }

Poly random_poly(std::mt19937& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg), coef(-9, 9);
  std::vector<Q> c(static_cast<std::size_t>(deg(rng) + 1));
  for (auto& x : c) x = coef(rng);
  return Poly::from_coeffs(c);
}
}  // namespace

TEST_CASE("polynomial parsing and printing") {
  CHECK(P("3n+1") == Poly::from_coeffs({1, 3}));
  CHECK(P("n(1-2n)") == Poly::from_coeffs({0, 1, -2}));
  CHECK(P("(2n-1)^2") == Poly::from_coeffs({1, -4, 4}));
  CHECK(P("2*n**3 + 9 n^2") == Poly::from_coeffs({0, 0, 9, 2}));
  CHECK(P("n/2 + 1/3") == Poly::from_coeffs({Q(1, 3), Q(1, 2)}));
  CHECK(P("3n^2 - n + 1").str() == "3*n^2 - n + 1");
  CHECK(Poly().str() == "0");
}

TEST_CASE("parse errors carry byte offsets") {
  try {
    parse_poly("3n + $");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 5);
  }
  CHECK_THROWS_AS(parse_poly("3n + m"), ParseError);
  CHECK_THROWS_AS(parse_poly("1/n"), ParseError);
  CHECK_THROWS_AS(parse_poly("(n+1"), ParseError);
  CHECK_THROWS_AS(parse_poly("1.5n"), ParseError);
}

TEST_CASE("products, division and gcd") {
  CHECK(P("n^2+n+1") * P("n^2-n+1") == P("n^4+n^2+1"));
  auto [q, r] = divrem(P("n^3+2n+5"), P("n+1"));
  CHECK(q * P("n+1") + r == P("n^3+2n+5"));
  CHECK(r.degree() < 1);
  CHECK(gcd(P("(n+1)(n+2)"), P("(n+2)(n+3)")) == P("n+2"));
  CHECK(gcd(P("2n+2"), P("4n+4")) == P("n+1"));
  CHECK(gcd(P("n"), Poly()) == P("n"));
  CHECK_THROWS_AS(divrem(P("n"), Poly()), MathError);
  CHECK_THROWS_AS(exact_div(P("n+1"), P("n+2")), MathError);
}

TEST_CASE("content, roots and composition") {
  CHECK(P("6n^2+4").content() == 2);
  CHECK(P("-6n^2-4").primitive() == P("3n^2+2"));
  CHECK(P("n^2/2+n/3").primitive() == P("3n^2+2n"));
  CHECK(P("(n-3)(2n+1)(n-3)").eval(3) == 0);
  auto roots = rational_roots(P("(n-3)(2n+1)(n-3)"));
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == Q(-1, 2));
  CHECK(roots[1] == 3);
  CHECK(positive_integer_roots(P("n(n-5)(n+2)(n-1)")) == std::vector<long>{1, 5});
  CHECK(P("n^2").compose_affine(2, 1) == P("(2n+1)^2"));
  CHECK(P("n^2+n").shift(-1) == P("n^2-n"));
  CHECK(P("n^2").compose(P("n+1")) == P("(n+1)^2"));
}

TEST_CASE("property: division identity and gcd divides both") {
  std::mt19937 rng(7);
  for (int it = 0; it < 200; ++it) {
    Poly a = random_poly(rng, 6), b = random_poly(rng, 4);
    if (b.is_zero()) continue;
    auto [q, r] = divrem(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
    Poly c = random_poly(rng, 3);
    if (c.is_zero()) continue;
    Poly g = gcd(a * c, b * c);
    CHECK(divides(g, a * c));
    CHECK(divides(g, b * c));
    CHECK(divides(c.primitive(), g));
  }
}

TEST_CASE("rational functions stay reduced") {
  RF f(P("n^2-1"), P("n-1"));
  CHECK(f.is_polynomial());
  CHECK(f.as_poly() == P("n+1"));
  RF g = RF(P("1"), P("n")) + RF(P("1"), P("n+1"));
  CHECK(g == RF(P("2n+1"), P("n^2+n")));
  CHECK_THROWS_AS(RF(P("1"), P("n")).eval(0), PoleError);
  CHECK(parse_rf("(n+1)/(2n)").eval(1) == 1);
}

TEST_CASE("matrices") {
  MatQ a = MatQ::of2(1, 2, 3, 4);
  CHECK(det(a) == -2);
  CHECK(adjugate(a) * a == MatQ::identity(2).scaled(det(a)));
  MatQ m3(3, 3, {2, 0, 1, 1, 3, 2, 1, 1, 1});
  CHECK(adjugate(m3) * m3 == MatQ::identity(3).scaled(det(m3)));
  CHECK(projectively_equal(a, a.scaled(Q(-3, 7))));
  CHECK(!projectively_equal(a, MatQ::of2(1, 2, 3, 5)));
  CHECK(primitive_int(MatQ::of2(Q(-1, 2), 1, 0, Q(3, 2))) == MatInt::of2(1, -2, 0, -3));
}

TEST_CASE("multivariate rational functions") {
  std::vector<std::string> v{"x", "y"};
  MvRF f = parse_mvrf("(x+y)/(x-y)", v);
  MvRF g = parse_mvrf("x^2+2x y+y^2", v) / parse_mvrf("x^2-y^2", v);
  CHECK(f.equals(g));
  RF line = mv_substitute_affine(f, {Q(1), Q(0)}, {1, 1});  // x = n, y = n - 1
  CHECK(line == RF(P("2n-1")));
}
