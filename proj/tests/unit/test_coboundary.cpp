#include "doctest.h"

#include "pcf/coboundary.hpp"
#include "pcf/expr.hpp"

using namespace pcf;

namespace {

MatPoly mp(const char* a, const char* b, const char* c, const char* d) {
  return MatPoly::of2(parse_poly(a), parse_poly(b), parse_poly(c), parse_poly(d));
}

}  // namespace

TEST_CASE("printed certificates satisfy the coboundary identity") {
  SUBCASE("slow pi pair with trivial externals") {
    PCF a = parse_pcf("PCF(2; (2n-1)^2)"), b = parse_pcf("PCF(6; (2n+1)^2)");
    auto v = verify_coboundary(a, b, mp("4n^2-4n+1", "8n^3+4n^2-10n+3", "2n+1", "4n^2+8n+7"));
    REQUIRE(v.ok);
    CHECK(v.p_a == Poly(1L));
    CHECK(v.p_b == Poly(1L));
    CHECK(v.hash.size() == 64);
  }
  SUBCASE("zeta(3) pair with linear externals") {
    PCF a = parse_pcf("PCF(2n^3+9n^2+15n+9; -(n+1)^6)");
    PCF b = parse_pcf("PCF(2n^3+9n^2+17n+12; -n(n+1)^4(n+2))");
    MatPoly U = mp("n^3+n^2+n+1", "n^6+5n^5+10n^4+10n^3+5n^2+n", "-1", "-n^3-4n^2-5n");
    auto v = verify_coboundary(a, b, U);
    REQUIRE(v.ok);
    CHECK(v.p_a == parse_poly("n"));
    CHECK(v.p_b == parse_poly("n+1"));
    CHECK(recheck_pointwise(a, b, U, v.p_a, v.p_b));
  }
  SUBCASE("Catalan pair") {
    PCF a = parse_pcf("PCF(8n^2+8n+7; -16n^4)"), b = parse_pcf("PCF(8n^2+12n+5; -16n^3(n+1))");
    auto v = verify_coboundary(a, b, mp("4n^2+2n", "16n^4", "-1", "-4n^2+2n-1"));
    REQUIRE(v.ok);
    CHECK(v.p_a == Poly(1L));
  }
  SUBCASE("perturbed matrix is rejected") {
    PCF a = parse_pcf("PCF(2n^3+9n^2+15n+9; -(n+1)^6)");
    PCF b = parse_pcf("PCF(2n^3+9n^2+17n+12; -n(n+1)^4(n+2))");
    CHECK_FALSE(verify_coboundary(a, b, mp("n^3+n^2+n+2", "n^6+5n^5+10n^4+10n^3+5n^2+n", "-1", "-n^3-4n^2-5n")).ok);
    CHECK_FALSE(recheck_pointwise(a, b, mp("n^3+n^2+n+2", "n^6+5n^5+10n^4+10n^3+5n^2+n", "-1", "-n^3-4n^2-5n"),
                                  parse_poly("n"), parse_poly("n+1")));
  }
}

TEST_CASE("rational fitting recovers exact rational functions") {
  std::vector<std::pair<long, Q>> pts;
  RF target(parse_poly("n^2+1"), parse_poly("2n-3"));
  for (long n = 1; n <= 20; ++n) pts.emplace_back(n, target.eval(Q(n)));
  auto f = fit_rational(pts, 6);
  REQUIRE(f);
  CHECK(*f == target);

  std::vector<std::pair<long, Q>> fact;
  Q acc(1);
  for (long n = 1; n <= 30; ++n) {
    acc *= n;
    fact.emplace_back(n, acc);
  }
  CHECK_FALSE(fit_rational(fact, 10));
}

TEST_CASE("propagation from the printed initial value reproduces the printed matrix") {
  PCF a = parse_pcf("PCF(2; n^2)"), b = parse_pcf("PCF(1; n(n+1))");
  MatPoly U = mp("n", "-n^2", "-1", "n-1");
  MatInt u1 = primitive_int(U.map([](const Poly& p) { return p.eval(1L); }));
  auto samples = propagate_u(a, b, u1, 40);
  for (long n = 1; n <= 40; ++n) {
    MatQ expect = U.map([&](const Poly& p) { return p.eval(n); });
    CHECK(projectively_equal(expect, samples[static_cast<std::size_t>(n - 1)].map([](const Int& z) { return Q(z); })));
  }
  auto fit = fit_rational_matrix(samples, 1, 24);
  REQUIRE(fit.U);
  CHECK(projectively_equal(to_rf(*fit.U), to_rf(U)));
  CHECK(verify_coboundary(a, b, *fit.U).ok);
}

TEST_CASE("initial matrix from Mobius identifications") {
  MatInt ma = MatInt::of2(2, 0, 0, 1), mb = MatInt::of2(1, 0, 0, 1);
  CHECK(solve_initial_u(ma, mb) == MatInt::of2(2, 0, 0, 1));
  MatInt m = MatInt::of2(-42, -196, 3, 4);
  CHECK(solve_initial_u(m, m) == MatInt::identity(2));
  CHECK_THROWS_AS(solve_initial_u(MatInt::of2(1, 1, 1, 1), m), MathError);
}

TEST_CASE("reversed certificate verifies") {
  CoboundaryCertificate c;
  c.source_a = c.pcf_a = parse_pcf("PCF(2n^3+9n^2+15n+9; -(n+1)^6)");
  c.source_b = c.pcf_b = parse_pcf("PCF(2n^3+9n^2+17n+12; -n(n+1)^4(n+2))");
  c.U = mp("n^3+n^2+n+1", "n^6+5n^5+10n^4+10n^3+5n^2+n", "-1", "-n^3-4n^2-5n");
  auto v = verify_coboundary(c.pcf_a, c.pcf_b, c.U);
  REQUIRE(v.ok);
  c.p_a = v.p_a;
  c.p_b = v.p_b;
  c.hash = v.hash;
  c.verified = true;
  std::string why;
  CHECK(check_certificate(c, &why));
  auto r = reverse_certificate(c);
  REQUIRE(r);
  CHECK(r->pcf_a == c.pcf_b);
  CHECK(check_certificate(*r, &why));
  auto rr = reverse_certificate(*r);
  REQUIRE(rr);
  CHECK(projectively_equal(to_rf(rr->U), to_rf(c.U)));

  CoboundaryCertificate bad = c;
  bad.p_b = parse_poly("n+2");
  CHECK_FALSE(check_certificate(bad, &why));
}

TEST_CASE("match_pair finds the slow pi pair and a self match") {
  auto id = default_identifier("pi");
  MatchInputs in{parse_pcf("PCF(2; (2n-1)^2)"), parse_pcf("PCF(6; (2n+1)^2)"), std::nullopt, std::nullopt};
  auto r = match_pair(in, id);
  REQUIRE(r.status == MatchStatus::Matched);
  REQUIRE(r.certificate);
  CHECK(check_certificate(*r.certificate));
  // The limits are related by U(1) as a Mobius map.
  const auto& c = *r.certificate;
  long prec = 400;
  Real ka = evaluate_limit(c.pcf_a, std::nullopt, 4000, prec).value;
  Real kb = evaluate_limit(c.pcf_b, std::nullopt, 4000, prec).value;
  MatInt u1 = primitive_int(c.U.map([](const Poly& p) { return p.eval(1L); }));
  CHECK(abs(mobius_apply(u1, kb) - ka) < pow10(-40, prec));

  MatchInputs self{parse_pcf("PCF(3n+1; n(1-2n))"), parse_pcf("PCF(3n+1; n(1-2n))"), std::nullopt, std::nullopt};
  auto s = match_pair(self, id);
  REQUIRE(s.status == MatchStatus::Matched);
  CHECK(projectively_equal(to_rf(s.certificate->U), to_rf(MatPoly::identity(2))));
}

TEST_CASE("match_pair gates on metrics") {
  Metrics ma, mb;
  ma.delta.delta = -0.65;
  mb.delta.delta = -1.0;
  MatchInputs in{parse_pcf("PCF(3n+1; n(1-2n))"), parse_pcf("PCF(2; (2n-1)^2)"), ma, mb};
  auto r = match_pair(in, default_identifier("pi"));
  CHECK(r.status == MatchStatus::MetricsMismatch);
}
