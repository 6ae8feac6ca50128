#include "doctest.h"

#include "pcf/metrics.hpp"
#include "pcf/transforms.hpp"

using namespace pcf;

TEST_CASE("irrationality measure fixtures at depth 2000") {
  CHECK(irrationality_delta(parse_pcf("PCF(3n+1; n(1-2n))")).delta == doctest::Approx(-0.65).epsilon(0.03));
  CHECK(irrationality_delta(parse_pcf("PCF(2; (2n-1)^2)")).delta == doctest::Approx(-1.0).epsilon(0.02));
  CHECK(irrationality_delta(parse_pcf("PCF(2n+1; n^2)")).delta == doctest::Approx(-0.2).epsilon(0.25));
}

TEST_CASE("convergence rate and folding") {
  PCF p = parse_pcf("PCF(3n+1; n(1-2n))");
  Metrics m = compute_metrics(p);
  CHECK(m.rate.rate == doctest::Approx(0.69).epsilon(0.03));
  CHECK(m.rate.depth == kMetricDepth);
  Metrics folded = compute_metrics(fold_pcf(p, 2).pcf);
  CHECK(folded.rate.rate == doctest::Approx(1.38).epsilon(0.03));
  auto r = rate_ratio(m.rate, folded.rate);
  REQUIRE(r);
  CHECK(*r == Q(1, 2));
  // Polynomial convergence sits below the threshold.
  CHECK(compute_metrics(parse_pcf("PCF(2; (2n-1)^2)")).rate.rate == 0.0);
}

TEST_CASE("rate ratios") {
  CHECK(rate_ratio(0.69, 1.38) == Q(1, 2));
  CHECK(rate_ratio(2.07, 0.69) == Q(3));
  CHECK(rate_ratio(0.0, 0.7) == Q(0));
  CHECK_FALSE(rate_ratio(1.0, 3.14159, 3));
  // Within a few percent the smallest denominator wins.
  CHECK(rate_ratio(0.7193, 0.6956, 12, 0.05) == Q(1));
  CHECK_FALSE(rate_ratio(0.7193, 0.6956, 12, 0.02));
}
