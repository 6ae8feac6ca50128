#include <random>

#include "doctest.h"
#include "pcf/expr.hpp"
#include "pcf/hash.hpp"
#include "pcf/identify.hpp"

using namespace pcf;

namespace {
PCF pcf_of(const std::string& a, const std::string& b) { return PCF{parse_poly(a), parse_poly(b)}; }
}  // namespace

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("constants") {
  CHECK(constant_value("pi", 64).value.str(15) == "3.14159265358979e+00");
  CHECK(constant_value("zeta3", 128).value.str(15) == "1.20205690315959e+00");
  CHECK(constant_value("e", 128).value.str(15) == "2.71828182845905e+00");
  CHECK(constant_value("catalan", 128).value.str(15) == "9.15965594177219e-01");
  CHECK(constant_ref("pi").digits_available >= 10000);
  CHECK_THROWS_AS(constant_value("pi", digits_to_bits(1000000)), PrecisionError);
  CHECK_THROWS_AS(constant_value("tau", 64), InputError);
}

TEST_CASE("pslq") {
  long p = 400;
  auto rel = pslq({Real::from_long(1, p), Real::from_q(Q(1, 2), p)}, {10, 0, 100000});
  REQUIRE(rel);
  bool ok = (rel->coefficients == std::vector<Int>{1, -2}) || (rel->coefficients == std::vector<Int>{-1, 2});
  CHECK(ok);

  Real pi = constant_value("pi", p).value;
  Real e = constant_value("e", p).value;
  CHECK(!pslq({pi, e}, {6, 0, 100000}));
  CHECK_THROWS_AS(pslq({pi, e}, {60, 20, 100000}), PrecisionError);

  PCF w = pcf_of("2", "(2n-1)^2");
  ApproxValue L = cf_value(w, evaluate_limit(w, std::nullopt, 4000, 700));
  REQUIRE(L.reliable_digits() >= 100);
  long wd = std::min(200L, L.reliable_digits());
  Real l = L.value;
  auto r = pslq({l * pi, pi, l, Real::from_long(1, p)}, {20, wd, 100000});
  REQUIRE(r);
  Int s = r->coefficients[0] < 0 ? Int(-1) : Int(1);
  CHECK(r->coefficients[0] * s == 1);
  CHECK(r->coefficients[1] * s == -1);
  CHECK(r->coefficients[2] * s == 0);
  CHECK(r->coefficients[3] * s == -4);
}

TEST_CASE("property: pslq is invariant under a common rational scale") {
  long p = 500;
  Real pi = constant_value("pi", p).value;
  Real x0 = pi * 3L + Real::from_long(1, p), x1 = pi, x2 = Real::from_long(1, p);
  auto a = pslq({x0, x1, x2}, {10, 120, 100000});
  Real k = Real::from_q(Q(7, 3), p);
  auto b = pslq({x0 * k, x1 * k, x2 * k}, {10, 120, 100000});
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->coefficients == b->coefficients);
}

TEST_CASE("mobius identification") {
  long bits = 900;
  Real pi = constant_value("pi", bits).value;
  auto approx = [&](const Real& v) {
    ApproxValue a;
    a.value = v;
    a.precision_bits = bits;
    a.error_bound = Real(64);
    return a;
  };
  auto id = identify_mobius(approx(Real::from_long(2, bits) / pi), "pi");
  REQUIRE(id);
  CHECK(id->matrix == MatInt::of2(0, 2, 1, 0));
  auto same = identify_mobius(approx(pi), "pi");
  REQUIRE(same);
  CHECK(same->matrix == MatInt::identity(2));
  Real v = (pi * -42L - Real::from_long(196, bits)) / (pi * 3L + Real::from_long(4, bits));
  auto r5 = identify_mobius(approx(v), "pi");
  REQUIRE(r5);
  CHECK(r5->matrix == MatInt::of2(-42, -196, 3, 4));
  CHECK(!identify_mobius(approx(Real::from_q(Q(22, 7), bits)), "pi"));
  ApproxValue coarse = approx(pi);
  coarse.error_bound = pow10(-20, 64);
  CHECK_THROWS_AS(identify_mobius(coarse, "pi"), PrecisionError);
}

TEST_CASE("property: identify_mobius inverts mobius_apply") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> d(-30, 30);
  long bits = 900;
  Real pi = constant_value("pi", bits).value;
  int tried = 0;
  while (tried < 25) {
    MatInt m = MatInt::of2(d(rng), d(rng), d(rng), d(rng));
    if (det(m) == 0) continue;
    ++tried;
    ApproxValue a;
    a.value = mobius_apply(m, pi);
    a.precision_bits = bits;
    a.error_bound = Real(64);
    auto id = identify_mobius(a, "pi");
    REQUIRE(id);
    CHECK(id->matrix == normalize_mobius(m));
  }
}
