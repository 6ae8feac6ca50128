#include <random>

#include "doctest.h"
#include "pcf/expr.hpp"
#include "pcf/recurrence.hpp"

using namespace pcf;

namespace {
PCF pcf_of(const std::string& a, const std::string& b) { return PCF{parse_poly(a), parse_poly(b)}; }

PCF random_pcf(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-5, 5), deg(0, 3);
  auto poly = [&] {
    std::vector<Q> c(static_cast<std::size_t>(deg(rng) + 1));
    for (auto& x : c) x = coef(rng);
    c.back() = c.back() == 0 ? Q(1) : c.back();
    return Poly::from_coeffs(c);
  };
  return PCF{poly(), poly()};
}

// Pi to 60 digits, typed in independently of the constants module.
const char* kPi = "3.14159265358979323846264338327950288419716939937510582097494";
}  // namespace

TEST_CASE("PCF text form") {
  PCF p = parse_pcf("PCF(3n+1; n(1-2n))");
  CHECK(p.a == parse_poly("3n+1"));
  CHECK(p.b == parse_poly("n-2n^2"));
  CHECK(parse_pcf("PCF(2, (2n-1)^2)") == pcf_of("2", "(2n-1)^2"));
  CHECK(parse_pcf(p.str()) == p);
  CHECK_THROWS_AS(parse_pcf("PCF(1)"), ParseError);
  CHECK_THROWS_AS(parse_pcf("PCF(1; 0)"), InputError);
  try {
    parse_pcf("PCF(1; n+?)");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 9);
  }
}

TEST_CASE("companion layout") {
  MatRF cm = companion(pcf_of("1", "1"));
  CHECK(eval(cm, 5) == MatQ::of2(0, 1, 1, 1));
  MatRF c2 = companion(pcf_of("3n+1", "n(1-2n)"));
  CHECK(c2(0, 1) == RF(parse_poly("n(1-2n)")));
  CHECK(c2(1, 1) == RF(parse_poly("3n+1")));
  CHECK(c2(0, 0) == RF(0L));
  CHECK(c2(1, 0) == RF(1L));
  Recurrence r3;
  r3.coeffs = {parse_poly("n"), parse_poly("n+1"), parse_poly("n+2")};
  MatQ c3 = eval(companion(r3), 1);
  CHECK(c3 == MatQ(3, 3, {0, 0, 3, 1, 0, 2, 0, 1, 1}));
}

TEST_CASE("step products") {
  PCF fib = pcf_of("1", "1");
  CHECK(step_product(fib, 1, 3).matrix == MatQ::of2(1, 2, 2, 3));
  CHECK(step_product(fib, 5, 4).matrix == MatQ::identity(2));
  PCF w = pcf_of("2", "(2n-1)^2");
  MatQ expect = MatQ::of2(0, 1, 1, 2) * MatQ::of2(0, 9, 1, 2);
  CHECK(step_product(w, 1, 2).matrix == expect);
  Recurrence rational;
  rational.coeffs = {parse_poly("n+1"), parse_poly("1")};
  rational.denom = parse_poly("n-3");
  CHECK_THROWS_AS(step_product(rational, 1, 5), PoleError);
  CHECK_NOTHROW(step_product(rational, 4, 30));
  CHECK(step_product(rational, 4, 30).matrix == step_product_naive(rational, 4, 30).matrix);
}

TEST_CASE("convergents") {
  PCF fib = pcf_of("1", "1");
  CHECK(convergent(fib, 1) == 1);
  CHECK(convergent(fib, 2) == Q(1, 2));
  CHECK(convergent(fib, 3) == Q(2, 3));
  CHECK(convergent(fib, 4) == Q(3, 5));
  // Partial sums of sum n!/prod(2i+1): 1, 4/3, 22/15.
  PCF s = pcf_of("3n+1", "n(1-2n)");
  InitialConditions ic{MatQ::of2(0, 1, 1, 1), 1};
  CHECK(convergent(s, 0, ic) == 1);
  CHECK(convergent(s, 1, ic) == Q(4, 3));
  CHECK(convergent(s, 2, ic) == Q(22, 15));
  CHECK_THROWS_AS(convergent(pcf_of("0", "1"), 1), ZeroDenominator);
}

TEST_CASE("mobius") {
  MatQ id = MatQ::identity(2);
  CHECK(*mobius_apply(id, Q(7, 3)) == Q(7, 3));
  MatQ m = MatQ::of2(2, 3, 5, 7);
  CHECK(*mobius_apply(m, Q(0)) == Q(3, 7));
  CHECK(*mobius_apply(m, std::nullopt) == Q(2, 5));
  CHECK(!mobius_apply(MatQ::of2(1, 0, 1, -1), Q(1)).has_value());
  Real pi = Real::from_string(kPi, 200);
  Real v = mobius_apply(MatQ::of2(0, 2, 1, 0), pi);
  CHECK(abs(v - Real::from_long(2, 200) / pi) < pow2(-180, 200));
}

TEST_CASE("limits") {
  Real pi = Real::from_string(kPi, 220);
  SUBCASE("Euler 2/(pi-2) as a(0) + K") {
    PCF p = pcf_of("1", "n(n+1)");
    ApproxValue v = cf_value(p, evaluate_limit(p, std::nullopt, 4000, 128));
    Real target = Real::from_long(2, 220) / (pi - Real::from_long(2, 220));
    CHECK(abs(v.value - target) < pow2(-100, 220));
  }
  SUBCASE("golden ratio") {
    ApproxValue v = evaluate_limit(pcf_of("1", "1"), std::nullopt, 100, 160);
    Real phi = (Real::from_long(1, 200) + sqrt(Real::from_long(5, 200))) / 2L;
    CHECK(abs(v.value - (phi - Real::from_long(1, 200))) < pow10(-40, 200));
    CHECK(v.converged);
  }
  SUBCASE("init matrix gives pi-3") {
    InitialConditions ic{MatQ::of2(0, 1, 1, 6), 1};
    ApproxValue v = evaluate_limit(pcf_of("6", "(2n+1)^2"), ic, 4000, 128);
    CHECK(abs(v.value - (pi - Real::from_long(3, 220))) < pow10(-30, 220));
  }
  SUBCASE("cf value of PCF(2,(2n-1)^2) is 1+4/pi") {
    PCF p = pcf_of("2", "(2n-1)^2");
    ApproxValue v = cf_value(p, evaluate_limit(p, std::nullopt, 4000, 128));
    Real target = Real::from_long(1, 220) + Real::from_long(4, 220) / pi;
    CHECK(abs(v.value - target) < pow10(-30, 220));
    CHECK(v.reliable_digits() >= 30);
  }
  SUBCASE("two precisions agree") {
    PCF p = pcf_of("3n+1", "n(1-2n)");
    ApproxValue lo = evaluate_limit(p, std::nullopt, 600, 128);
    ApproxValue hi = evaluate_limit(p, std::nullopt, 600, 256);
    CHECK(abs(lo.value - hi.value) < pow2(-120, 256));
  }
  CHECK_THROWS_AS(evaluate_limit(pcf_of("1", "1"), std::nullopt, 1, 64), InputError);
}

TEST_CASE("property: step matrix columns solve the recurrence") {
  std::mt19937 rng(11);
  for (int it = 0; it < 30; ++it) {
    PCF p = random_pcf(rng);
    // u_n = a(n) u_{n-1} + b(n) u_{n-2} from the two basis initial conditions.
    std::vector<Q> u0{1, 0}, u1{0, 1};
    for (long n = 1; n <= 20; ++n) {
      u0.push_back(p.a.eval(n) * u0.back() + p.b.eval(n) * u0[u0.size() - 2]);
      u1.push_back(p.a.eval(n) * u1.back() + p.b.eval(n) * u1[u1.size() - 2]);
      MatQ s = step_product(p, 1, n).matrix;
      CHECK(s(0, 1) == u0.back());
      CHECK(s(1, 1) == u1.back());
      CHECK(s(0, 0) == u0[u0.size() - 2]);
      CHECK(s(1, 0) == u1[u1.size() - 2]);
    }
  }
}

TEST_CASE("property: binary splitting equals naive product") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> len(0, 200);
  for (int it = 0; it < 15; ++it) {
    PCF p = random_pcf(rng);
    long hi = len(rng);
    Recurrence r = to_recurrence(p);
    CHECK(step_product(r, 1, hi).matrix == step_product_naive(r, 1, hi).matrix);
  }
}

TEST_CASE("property: convergent equals last-column ratio") {
  std::mt19937 rng(5);
  for (int it = 0; it < 20; ++it) {
    PCF p = random_pcf(rng);
    MatQ s = step_product(p, 1, 25).matrix;
    if (s(1, 1) == 0) continue;
    CHECK(convergent(p, 25) == s(0, 1) / s(1, 1));
    ExactConvergent e = exact_convergent(p, 25);
    CHECK(make_q(e.p, e.q) == s(0, 1) / s(1, 1));
    CHECK(e.q > 0);
  }
}

TEST_CASE("sequence extension") {
  Recurrence fib;
  fib.coeffs = {Poly(1L), Poly(1L)};
  auto u = extend_sequence(fib, {0, 1}, 0, 10);
  CHECK(u.back() == 34);
  CHECK(last_positive_root(parse_poly("(n-4)(n-2)(n+7)")) == 4);
  CHECK(last_positive_root(parse_poly("n^2+1")) == 0);
}
