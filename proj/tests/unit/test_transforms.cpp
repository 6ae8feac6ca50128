#include <random>

#include "doctest.h"
#include "pcf/expr.hpp"
#include "pcf/transforms.hpp"

using namespace pcf;

namespace {
PCF pcf_of(const std::string& a, const std::string& b) { return PCF{parse_poly(a), parse_poly(b)}; }
RF R(const std::string& s) { return parse_rf(s); }

PCF random_pcf(std::mt19937& rng, int max_deg) {
  std::uniform_int_distribution<int> coef(-4, 4), deg(0, max_deg);
  auto poly = [&] {
    std::vector<Q> c(static_cast<std::size_t>(deg(rng) + 1));
    for (auto& x : c) x = coef(rng);
    if (c.back() == 0) c.back() = 1;
    return Poly::from_coeffs(c);
  };
  return PCF{poly(), poly()};
}

// Companion products evaluated directly, as an oracle for folding.
MatQ direct_product(const PCF& p, long lo, long hi) {
  MatQ acc = MatQ::identity(2);
  for (long i = lo; i <= hi; ++i) acc = acc * MatQ::of2(0, p.b.eval(i), 1, p.a.eval(i));
  return acc;
}
}  // namespace

TEST_CASE("fold") {
  MatRF cm = companion(pcf_of("3n+1", "n(1-2n)"));
  CHECK(fold(cm, 1) == cm);
  CanonicalResult f = fold_pcf(pcf_of("3n+1", "n(1-2n)"), 2);
  CHECK(f.pcf == pcf_of("60n^3+34n^2-11n-3", "2n(-288n^5+624n^4-230n^3-225n^2+158n-24)"));
}

TEST_CASE("property: fold product identity") {
  std::mt19937 rng(1);
  for (int it = 0; it < 20; ++it) {
    PCF p = random_pcf(rng, 2);
    for (int k = 1; k <= 3; ++k) {
      MatRF fk = fold(companion(p), k);
      for (long n = 1; n <= 10; n += 3) {
        MatQ lhs = direct_product(p, 1, n * k);
        MatQ rhs = MatQ::identity(2);
        for (long i = 1; i <= n; ++i) rhs = rhs * eval(fk, i);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("inflation and deflation") {
  CHECK(inflate(pcf_of("3n+1", "n^2"), RF(1L)) == pcf_of("3n+1", "n^2"));
  CHECK(to_pcf_canonical(pcf_of("n^2+n+1", "n^4+n^2+1")).pcf == pcf_of("1", "1"));
  // Companion form of a trajectory matrix, inflated by n^2+3n+2 and reduced.
  RationalPCF e{R("(n+3/2)/(n^2+3n+2)"), R("(n^2+2n+3/4)/(n^2+3n+2)")};
  CHECK(to_pcf_canonical(e).pcf == pcf_of("1", "n(n+1)"));
  // Rational recurrence c(n) u_n = a u_{n-1} + b u_{n-2} becomes PCF(a, b c(n-1)).
  Recurrence r;
  r.coeffs = {parse_poly("n^2+5"), parse_poly("n+7")};
  r.denom = parse_poly("2n+3");
  CHECK(to_pcf_canonical(r).pcf == pcf_of("n^2+5", "(n+7)(2n+1)"));
  CHECK(to_pcf_canonical(pcf_of("-3n-1", "n(1-2n)")).pcf == pcf_of("3n+1", "n(1-2n)"));
  CHECK(to_pcf_canonical(pcf_of("2", "4")).pcf == pcf_of("1", "1"));
  CHECK(to_pcf_canonical(pcf_of("n/2", "n^2/4+1")).pcf == pcf_of("n", "n^2+4"));
  CHECK_THROWS_AS(to_pcf_canonical(RationalPCF{R("1"), R("0")}), MathError);
}

TEST_CASE("matrix to PCF: trajectory matrix reduces to Euler's fraction") {
  MatRF t = MatRF::of2(R("(2n+1)^2/(4n(n+1))"), R("(-2n-1)/(8n(n+1))"), R("(2n+1)/(2n(n+1))"),
                       R("-(2n+1)^2/(4n(n+1))"));
  CanonicalResult c = matrix_to_pcf(t);
  CHECK(c.pcf == pcf_of("1", "n(n+1)"));
}

TEST_CASE("content scale") {
  CHECK(content_scale(Q(2), Q(4)) == Q(1, 2));
  CHECK(content_scale(Q(2), Q(3)) == 1);
  CHECK(content_scale(Q(1, 2), Q(1, 4)) == 2);
  CHECK(content_scale(Q(0), Q(1, 9)) == 3);
  CHECK(content_scale(Q(0), Q(18)) == Q(1, 3));
  Int big = Int("1000000007") * Int("998244353");
  CHECK(content_scale(Q(big * big), Q(big * big * big * big)) == Q(1, big * big));
}

TEST_CASE("inflation coboundary is diagonal and intertwines companions") {
  std::mt19937 rng(2);
  for (int it = 0; it < 10; ++it) {
    PCF p = random_pcf(rng, 2);
    RF c = R("n^2+3n+2");
    Recurrence r = to_recurrence(p);
    Recurrence ri = inflate(r, c);
    for (long n = 2; n <= 8; ++n) {
      MatQ lhs = eval(companion(r), n) * inflation_coboundary(c, 2, n + 1);
      MatQ rhs = inflation_coboundary(c, 2, n) * eval(companion(ri), n);
      CHECK(lhs == rhs);
    }
  }
  Recurrence r3;
  r3.coeffs = {parse_poly("n+1"), parse_poly("2"), parse_poly("n^2")};
  RF c = R("2n+1");
  Recurrence ri = inflate(r3, c);
  for (long n = 3; n <= 7; ++n)
    CHECK(eval(companion(r3), n) * inflation_coboundary(c, 3, n + 1) ==
          inflation_coboundary(c, 3, n) * eval(companion(ri), n));
}

TEST_CASE("index shift") {
  PCF p = pcf_of("3n+1", "n(1-2n)");
  CHECK(index_shift(p, 0) == p);
  CHECK(index_shift(p, 1) == pcf_of("3n+4", "(n+1)(-1-2n)"));
  CHECK(index_shift(index_shift(p, 3), -3) == p);
}

TEST_CASE("property: canonicalization is idempotent and replayable") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> small(1, 3);
  for (int it = 0; it < 40; ++it) {
    PCF p = random_pcf(rng, 2);
    // Hide a random polynomial factor, then recover a canonical form.
    RF c = RF(Poly::from_coeffs({Q(small(rng)), Q(1)}));
    RationalPCF src = inflate(to_rational_pcf(p), c);
    CanonicalResult r = to_pcf_canonical(src);
    CHECK(to_pcf_canonical(r.pcf).pcf == r.pcf);
    RationalPCF back = replay(src, r.trace);
    CHECK(back.a == RF(r.pcf.a));
    CHECK(back.b == RF(r.pcf.b));
  }
}

TEST_CASE("property: fold trace value map relates limits") {
  PCF p = pcf_of("3n+1", "n(1-2n)");
  CanonicalResult f = fold_pcf(p, 2);
  REQUIRE(f.trace.value_map_valid);
  ApproxValue k0 = evaluate_limit(p, std::nullopt, 2000, 128);
  ApproxValue k1 = evaluate_limit(f.pcf, std::nullopt, 1000, 128);
  Real mapped = mobius_apply(f.trace.value_map, k0.value);
  CHECK(abs(mapped - k1.value) < pow10(-20, 128));
}
