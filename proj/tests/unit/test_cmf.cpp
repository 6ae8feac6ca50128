#include "doctest.h"

#include <random>

#include "pcf/cmf.hpp"
#include "pcf/coboundary.hpp"
#include "pcf/expr.hpp"

using namespace pcf;

namespace {

LatticePoint half_point(long a, long b, long c) {
  return {Q(2 * a + 1, 2), Q(2 * b + 1, 2), Q(2 * c + 1, 2)};
}

std::vector<Q> slope_of(const Direction& v) {
  std::vector<Q> s;
  for (long x : v) s.emplace_back(x);
  return s;
}

// T_{x,v}(n) = M_v(x + (n-1) v) with no singularity shift.
MatRF raw_trajectory(const CMF& cmf, const LatticePoint& x, const Direction& v) {
  std::vector<Q> off = x;
  for (std::size_t i = 0; i < x.size(); ++i) off[i] -= Q(v[i]);
  return displacement_rf(cmf, off, slope_of(v), v);
}

// U(n) = M_w(x + (n-1) v).
MatRF transverse(const CMF& cmf, const LatticePoint& x, const Direction& v, const Direction& w) {
  std::vector<Q> off = x;
  for (std::size_t i = 0; i < x.size(); ++i) off[i] -= Q(v[i]);
  return displacement_rf(cmf, off, slope_of(v), w);
}

}  // namespace

TEST_CASE("bundled pi field is conserving") {
  const CMF& c = pi_cmf();
  CHECK(c.dim() == 3);
  CHECK(check_conserving(c).empty());

  CMF bad = c;
  bad.matrices[0][0][1] = parse_mvrf("y + 1", c.variables);
  auto v = check_conserving(bad);
  REQUIRE_FALSE(v.empty());
  bool saw_xy = false;
  for (const auto& e : v) saw_xy = saw_xy || (e.i == 0 && e.j == 1);
  CHECK(saw_xy);

  CMF diag = parse_cmf_json(R"({"schema_version":1,"variables":["x","y"],"rank":2,
    "matrices":{"x":[["2","0"],["0","3"]],"y":[["5","0"],["0","7"]]}})");
  CHECK(check_conserving(diag).empty());
}

TEST_CASE("CMF file errors are input errors") {
  CHECK_THROWS_AS(parse_cmf_json("{"), InputError);
  CHECK_THROWS_AS(parse_cmf_json(R"({"schema_version":1,"variables":["x"],"matrices":{}})"), InputError);
  CHECK_THROWS_AS(parse_cmf_json(R"({"variables":["x"],"matrices":{"x":[["1","0"],["0","1"]]}})"), InputError);
}

TEST_CASE("displacement basics") {
  const CMF& c = pi_cmf();
  LatticePoint x = half_point(0, 0, 0);
  CHECK(displacement(c, x, {0, 0, 0}) == MatQ::identity(2));
  MatQ mx = displacement(c, x, {1, 0, 0});
  CHECK(mx(0, 1) == Q(1, 2));
  CHECK(mx(1, 0) == Q(2));
  // Both axis orders agree for (1,1,0).
  std::vector<Q> zero(3, Q(0));
  MatRF fwd = displacement_rf(c, x, zero, {1, 1, 0}, false);
  MatRF rev = displacement_rf(c, x, zero, {1, 1, 0}, true);
  CHECK(fwd == rev);
}

TEST_CASE("path independence on random displacements") {
  const CMF& c = pi_cmf();
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<long> coord(-3, 3), step(-2, 2);
  int done = 0, tries = 0;
  while (done < 20 && tries < 400) {
    ++tries;
    LatticePoint x = half_point(coord(rng), coord(rng), coord(rng));
    // Keep x - z off the integers so the z matrix has no pole on the path.
    x[2] += Q(1, 3);
    Direction v{step(rng), step(rng), step(rng)}, w{step(rng), step(rng), step(rng)};
    Direction vw{v[0] + w[0], v[1] + w[1], v[2] + w[2]};
    LatticePoint xv = x;
    for (int i = 0; i < 3; ++i) xv[i] += Q(v[i]);
    try {
      MatQ lhs = displacement(c, x, vw);
      MatQ rhs = displacement(c, x, v) * displacement(c, xv, w);
      CHECK(lhs == rhs);
      ++done;
    } catch (const MathError&) {
    }
  }
  CHECK(done == 20);
}

TEST_CASE("Euler trajectory worked example") {
  const CMF& c = pi_cmf();
  auto tm = trajectory_matrix(c, parse_point("1/2,-1/2,3/2"), {0, 0, 1});
  CHECK(tm.shift == 0);
  MatRF expect = MatRF::of2(parse_rf("(2n+1)^2/(4n(n+1))"), parse_rf("-(2n+1)/(8n(n+1))"),
                            parse_rf("(2n+1)/(2n(n+1))"), parse_rf("-(2n+1)^2/(4n(n+1))"));
  CHECK(tm.matrix == expect);
  auto cf = to_companion(tm.matrix);
  CHECK(cf.gamma_branch);
  CHECK(cf.canonical.pcf == parse_pcf("PCF(1; n(n+1))"));
  CHECK(cf.canonical.trace.str().find("inflate(n^2 + 3*n + 2)") != std::string::npos);
}

TEST_CASE("axis and diagonal trajectories give the known canonical forms") {
  const CMF& c = pi_cmf();
  LatticePoint p0 = half_point(0, 0, 0);
  CHECK(to_companion(trajectory_matrix(c, p0, {1, 0, 0}).matrix).canonical.pcf == parse_pcf("PCF(3n+1; n(1-2n))"));
  CHECK(to_companion(trajectory_matrix(c, p0, {1, 1, 1}).matrix).canonical.pcf == parse_pcf("PCF(2; (2n-1)^2)"));
  // A single axis step substitutes x0 + (n-1) into M_x.
  MatRF t = raw_trajectory(c, p0, {1, 0, 0});
  CHECK(t(0, 1) == parse_rf("1/2"));
  CHECK(t(1, 0) == parse_rf("2/(2n-1)"));
}

TEST_CASE("parallel trajectories are coboundary through the transverse step") {
  const CMF& c = pi_cmf();
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> coord(-2, 2), step(-1, 1);
  int done = 0, tries = 0;
  while (done < 20 && tries < 300) {
    ++tries;
    LatticePoint x = half_point(coord(rng), coord(rng), coord(rng));
    Direction v{step(rng), step(rng), step(rng)}, w{step(rng), step(rng), step(rng)};
    if (v == Direction{0, 0, 0} || w == Direction{0, 0, 0}) continue;
    LatticePoint xw = x;
    for (int i = 0; i < 3; ++i) xw[i] += Q(w[i]);
    try {
      MatRF a = raw_trajectory(c, x, v), b = raw_trajectory(c, xw, v), u = transverse(c, x, v, w);
      if (det(u).is_zero()) continue;  // the transverse step collapses; not a gauge
      CHECK(verify_matrix_coboundary(a, b, u));
      ++done;
    } catch (const MathError&) {
    }
  }
  CHECK(done == 20);
}

TEST_CASE("doubled direction is the two-step fold") {
  const CMF& c = pi_cmf();
  LatticePoint p0 = half_point(0, 0, 0);
  for (const Direction& v : {Direction{1, 0, 0}, Direction{1, 1, 1}, Direction{0, 1, 2}}) {
    MatRF single = raw_trajectory(c, p0, v);
    MatRF dbl = raw_trajectory(c, p0, {2 * v[0], 2 * v[1], 2 * v[2]});
    CHECK(projectively_equal(dbl, fold(single, 2)));
  }
}

TEST_CASE("companion conversion branches") {
  PCF p = parse_pcf("PCF(3n+1; n(1-2n))");
  auto cf = to_companion(companion(p));
  CHECK(cf.gamma_branch);
  CHECK(projectively_equal(cf.gauge, MatRF::identity(2)));
  CHECK(cf.canonical.pcf == p);

  // Upper triangular input takes the second gauge.
  MatRF tri = MatRF::of2(RF(1L), parse_rf("n"), RF(0L), parse_rf("n+1"));
  auto cf2 = to_companion(tri);
  CHECK_FALSE(cf2.gamma_branch);
  MatRF g = cf2.gauge;
  auto [adj, d] = mat_adjugate_inverse(shift(g, Q(1)));
  MatRF e = g * tri * adj;
  CHECK(e(0, 0).is_zero());
  CHECK_FALSE(e(1, 0).is_zero());

  CHECK_THROWS_AS(to_companion(MatRF::of2(RF(1L), RF(0L), RF(0L), RF(2L))), MathError);
}

TEST_CASE("companion limit matches the trajectory product") {
  const CMF& c = pi_cmf();
  long prec = 400;
  for (const Direction& v : {Direction{1, 0, 0}, Direction{1, 1, 2}}) {
    auto tm = trajectory_matrix(c, half_point(0, 0, 0), v);
    auto cf = to_companion(tm.matrix);
    MatQ prod = MatQ::identity(2);
    for (long n = 1; n <= 300; ++n) prod = prod * eval(tm.matrix, Q(n));
    Real lt = Real::from_q(prod(0, 0) / prod(1, 0), prec);

    Real k_can = evaluate_limit(cf.canonical.pcf, std::nullopt, 2000, prec).value;
    REQUIRE(cf.canonical.trace.value_map_valid);
    Real k_raw = mobius_apply(adjugate(cf.canonical.trace.value_map), k_can);
    Real from_companion = mobius_apply(adjugate(eval(cf.gauge, Q(1))), k_raw);
    CHECK(abs(from_companion - lt) < pow10(-30, prec));
  }
}

TEST_CASE("direction enumeration") {
  auto d2 = scan_directions(2, 2, false);
  // max |v_i| <= 1, nonzero, one of each +-pair: (3^2 - 1) / 2.
  CHECK(d2.size() == 4);
  CHECK(d2.front() == Direction{0, 1});
  auto d3 = scan_directions(3, 3, true);
  for (const auto& v : d3) {
    long first = 0;
    for (long x : v)
      if (x != 0) {
        first = x;
        break;
      }
    CHECK(first > 0);
    for (const auto& w : d3) CHECK_FALSE(w == Direction{-v[0], -v[1], -v[2]});
  }
  CHECK(d3.size() == 49);
  CHECK(std::is_sorted(d3.begin(), d3.end()));
  CHECK_THROWS_AS(scan_directions(3, 0, true), InputError);
}

TEST_CASE("small scan is ordered and records singular directions") {
  ScanOptions opts;
  opts.radius = 2;
  opts.depth = 300;
  opts.jobs = 2;
  auto scan = scan_trajectories(pi_cmf(), half_point(0, 0, 0), opts);
  REQUIRE(scan.size() == 13);
  bool saw_axis = false;
  int errors = 0;
  for (const auto& e : scan) {
    if (!e.error.empty()) {
      ++errors;
      continue;
    }
    REQUIRE(e.pcf);
    if (e.direction == Direction{1, 0, 0}) {
      saw_axis = true;
      CHECK(*e.pcf == parse_pcf("PCF(3n+1; n(1-2n))"));
      REQUIRE(e.metrics);
      CHECK(e.metrics->delta.delta == doctest::Approx(-0.65).epsilon(0.05));
    }
  }
  CHECK(saw_axis);
  CHECK(errors < 13);
  opts.jobs = 1;
  auto again = scan_trajectories(pi_cmf(), half_point(0, 0, 0), opts);
  REQUIRE(again.size() == scan.size());
  for (std::size_t i = 0; i < scan.size(); ++i) {
    CHECK(again[i].direction == scan[i].direction);
    CHECK(again[i].pcf == scan[i].pcf);
  }
}

TEST_CASE("direction and point parsing") {
  CHECK(parse_direction("(1,-2,3)") == Direction{1, -2, 3});
  CHECK(parse_direction("1, 0, 0") == Direction{1, 0, 0});
  CHECK_THROWS_AS(parse_direction("1,x,0"), InputError);
  CHECK(point_str(parse_point("1/2,-1/2,3/2")) == "(1/2,-1/2,3/2)");
  CHECK(direction_str({0, 0, 1}) == "(0,0,1)");
}
