#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcf/metrics.hpp"
#include "pcf/mvpoly.hpp"
#include "pcf/transforms.hpp"

namespace pcf {

// d matrices of rank m over Q(x_1..x_d), one per axis.
struct CMF {
  std::string name;
  std::string constant;  // empty when not tied to a constant
  std::vector<std::string> variables;
  std::size_t rank = 2;
  std::vector<MatMvRF> matrices;
  std::vector<Q> default_start;

  std::size_t dim() const { return variables.size(); }
};

using LatticePoint = std::vector<Q>;
using Direction = std::vector<long>;

CMF parse_cmf_json(const std::string& text);
CMF load_cmf(const std::string& path);
// Bundled definition under data/cmf.
const CMF& pi_cmf();

struct ConservingViolation {
  std::size_t i = 0, j = 0;
  std::size_t row = 0, col = 0;
};
// Empty when every pair i < j satisfies M_i(x) M_j(x + e_i) = M_j(x) M_i(x + e_j).
std::vector<ConservingViolation> check_conserving(const CMF& cmf);

// M_v at the affine point offset + slope*n, as a matrix over Q(n). Path: positive steps
// in ascending axis order, then negative steps (through M_{-e}(p) = M_e(p - e)^{-1}).
// reversed_order walks the axes in descending order instead.
MatRF displacement_rf(const CMF& cmf, const std::vector<Q>& offset, const std::vector<Q>& slope, const Direction& v,
                      bool reversed_order = false);
// Concrete M_v(x). Throws MathError on a singular factor along the path.
MatQ displacement(const CMF& cmf, const LatticePoint& x, const Direction& v);

struct TrajectoryMatrix {
  MatRF matrix;            // T(n) = M_v(origin + (n-1) v)
  LatticePoint origin;     // start after any singularity shift
  Direction direction;
  long shift = 0;          // origin = requested start + shift * v
};

// Positive integer n where T(n) has a pole or a vanishing determinant; 0 if none.
long last_singular_index(const MatRF& t);
TrajectoryMatrix trajectory_matrix(const CMF& cmf, const LatticePoint& start, const Direction& v);

struct CompanionForm {
  RationalPCF raw;        // companion recurrence read off the gauged matrix
  MatRF gauge;            // U(n) with U(n) T(n) U(n+1)^{-1} projectively companion
  bool gamma_branch = true;
  CanonicalResult canonical;
};
// Throws MathError when both off-diagonal entries vanish identically.
CompanionForm to_companion(const MatRF& t);

struct ScanEntry {
  Direction direction;
  std::optional<PCF> pcf;
  long shift = 0;
  std::optional<Metrics> metrics;
  std::string error;
};

struct ScanOptions {
  long radius = 10;
  bool primitive_only = true;
  long depth = kMetricDepth;
  bool with_metrics = true;
  int jobs = 1;
};

// Nonzero directions with max |v_i| < radius, one of each pair {v, -v} (first nonzero
// component positive), in lexicographic order.
std::vector<Direction> scan_directions(std::size_t dim, long radius, bool primitive_only);
std::vector<ScanEntry> scan_trajectories(const CMF& cmf, const LatticePoint& start, const ScanOptions& opts = {});

std::string direction_str(const Direction& v);
Direction parse_direction(const std::string& text);      // "1,0,0" or "(1,0,0)"
LatticePoint parse_point(const std::string& text);       // "1/2,1/2,1/2"
std::string point_str(const LatticePoint& p);

}  // namespace pcf
