#include "pcf/cmf.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pcf/expr.hpp"
#include "pcf/identify.hpp"

namespace pcf {

namespace {

using json = nlohmann::json;

MatMvRF mv_mul(const MatMvRF& a, const MatMvRF& b) {
  std::size_t n = a.size(), m = b[0].size(), k = b.size();
  std::size_t nv = a[0][0].nvars();
  MatMvRF out(n, std::vector<MvRF>(m, MvRF(nv, Q(0))));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      MvRF acc(nv, Q(0));
      for (std::size_t t = 0; t < k; ++t) acc += a[i][t] * b[t][j];
      out[i][j] = acc;
    }
  return out;
}

MatMvRF mv_shift(const MatMvRF& a, std::size_t var, const Q& delta) {
  MatMvRF out = a;
  for (auto& row : out)
    for (auto& e : row) e = e.shift_var(var, delta);
  return out;
}

MatRF substitute(const MatMvRF& m, const std::vector<Q>& offset, const std::vector<Q>& slope) {
  std::size_t r = m.size(), c = m[0].size();
  MatRF out(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out(i, j) = m[i][j].substitute_affine(offset, slope);
  return out;
}

MatRF inverse(const MatRF& m) {
  auto [adj, d] = mat_adjugate_inverse(m);
  RF inv = RF(1L) / d;
  return adj.map([&](const RF& f) { return f * inv; });
}

std::vector<std::string> split_list(std::string text) {
  for (char& ch : text)
    if (ch == '(' || ch == ')' || ch == '[' || ch == ']') ch = ' ';
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw InputError("empty component in '" + text + "'");
    parts.push_back(item.substr(b, e - b + 1));
  }
  if (parts.empty()) throw InputError("empty list");
  return parts;
}

}  // namespace

CMF parse_cmf_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("CMF file is not valid JSON: ") + e.what());
  }
  if (!j.contains("schema_version") || j["schema_version"] != 1) throw InputError("CMF file needs schema_version 1");
  CMF c;
  c.name = j.value("name", "");
  c.constant = j.value("constant", "");
  c.rank = j.value("rank", 2);
  c.variables = j.at("variables").get<std::vector<std::string>>();
  if (c.variables.empty()) throw InputError("CMF needs at least one variable");
  const auto& mats = j.at("matrices");
  for (const auto& v : c.variables) {
    if (!mats.contains(v)) throw InputError("CMF has no matrix for variable '" + v + "'");
    const auto& rows = mats[v];
    if (rows.size() != c.rank) throw InputError("matrix for '" + v + "' has wrong row count");
    MatMvRF m;
    for (const auto& row : rows) {
      if (row.size() != c.rank) throw InputError("matrix for '" + v + "' has wrong column count");
      std::vector<MvRF> r;
      for (const auto& entry : row) r.push_back(parse_mvrf(entry.get<std::string>(), c.variables));
      m.push_back(std::move(r));
    }
    c.matrices.push_back(std::move(m));
  }
  if (j.contains("default_start")) {
    for (const auto& s : j["default_start"]) c.default_start.push_back(parse_q(s.get<std::string>()));
    if (c.default_start.size() != c.dim()) throw InputError("default_start has wrong length");
  }
  return c;
}

CMF load_cmf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read CMF file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_cmf_json(ss.str());
}

const CMF& pi_cmf() {
  static const CMF c = load_cmf(data_dir() + "/cmf/pi_cmf.json");
  return c;
}

std::vector<ConservingViolation> check_conserving(const CMF& cmf) {
  std::vector<ConservingViolation> out;
  Q one(1);
  for (std::size_t i = 0; i < cmf.dim(); ++i)
    for (std::size_t j = i + 1; j < cmf.dim(); ++j) {
      MatMvRF lhs = mv_mul(cmf.matrices[i], mv_shift(cmf.matrices[j], i, one));
      MatMvRF rhs = mv_mul(cmf.matrices[j], mv_shift(cmf.matrices[i], j, one));
      for (std::size_t r = 0; r < cmf.rank; ++r)
        for (std::size_t c = 0; c < cmf.rank; ++c)
          if (!lhs[r][c].equals(rhs[r][c])) out.push_back({i, j, r, c});
    }
  return out;
}

MatRF displacement_rf(const CMF& cmf, const std::vector<Q>& offset, const std::vector<Q>& slope, const Direction& v,
                      bool reversed_order) {
  if (v.size() != cmf.dim() || offset.size() != cmf.dim() || slope.size() != cmf.dim())
    throw InputError("direction/point length does not match the CMF dimension");
  std::vector<std::size_t> axes(cmf.dim());
  std::iota(axes.begin(), axes.end(), 0);
  if (reversed_order) std::reverse(axes.begin(), axes.end());
  MatRF acc = MatRF::identity(cmf.rank);
  std::vector<Q> p = offset;
  for (std::size_t i : axes)
    for (long k = 0; k < v[i]; ++k) {
      acc = acc * substitute(cmf.matrices[i], p, slope);
      p[i] += 1;
    }
  for (std::size_t i : axes)
    for (long k = 0; k < -v[i]; ++k) {
      p[i] -= 1;
      acc = acc * inverse(substitute(cmf.matrices[i], p, slope));
    }
  return acc;
}

MatQ displacement(const CMF& cmf, const LatticePoint& x, const Direction& v) {
  std::vector<Q> zero(cmf.dim(), Q(0));
  return eval(displacement_rf(cmf, x, zero, v), Q(0));
}

long last_singular_index(const MatRF& t) {
  long last = 0;
  for (const auto& e : t.data()) last = std::max(last, last_positive_root(e.den()));
  last = std::max(last, last_positive_root(det(t).num()));
  return last;
}

TrajectoryMatrix trajectory_matrix(const CMF& cmf, const LatticePoint& start, const Direction& v) {
  if (start.size() != cmf.dim()) throw InputError("start point length does not match the CMF dimension");
  bool nonzero = false;
  for (long s : v) nonzero = nonzero || s != 0;
  if (!nonzero) throw InputError("trajectory direction must be nonzero");
  std::vector<Q> offset, slope;
  for (std::size_t i = 0; i < start.size(); ++i) {
    offset.push_back(start[i] - Q(v[i]));
    slope.emplace_back(v[i]);
  }
  TrajectoryMatrix tm;
  try {
    tm.matrix = displacement_rf(cmf, offset, slope, v, false);
  } catch (const MathError&) {
    tm.matrix = displacement_rf(cmf, offset, slope, v, true);
  }
  tm.direction = v;
  tm.shift = last_singular_index(tm.matrix);
  if (tm.shift > 0) tm.matrix = shift(tm.matrix, Q(tm.shift));
  tm.origin = start;
  for (std::size_t i = 0; i < start.size(); ++i) tm.origin[i] += Q(tm.shift * v[i]);
  return tm;
}

CompanionForm to_companion(const MatRF& t) {
  if (t.rows() != 2 || t.cols() != 2) throw MathError("companion conversion needs a 2x2 matrix");
  CompanionForm out;
  const RF &alpha = t(0, 0), &beta = t(0, 1), &gamma = t(1, 0);
  if (!gamma.is_zero()) {
    out.gauge = MatRF::of2(gamma, RF(0L) - alpha, RF(0L), RF(1L));
    out.raw = matrix_to_rational_pcf(t);
  } else if (!beta.is_zero()) {
    out.gamma_branch = false;
    MatRF u0 = MatRF::of2(RF(1L), RF(0L), alpha.shift(Q(-1)), beta.shift(Q(-1)));
    MatRF e = u0 * t * inverse(shift(u0, Q(1)));
    if (e(1, 0).is_zero()) throw MathError("gauged matrix is still triangular; no companion form");
    out.gauge = MatRF::of2(e(1, 0), RF(0L) - e(0, 0), RF(0L), RF(1L)) * u0;
    out.raw = matrix_to_rational_pcf(e);
  } else {
    throw MathError("both off-diagonal entries vanish identically");
  }
  out.canonical = to_pcf_canonical(out.raw);
  return out;
}

std::vector<Direction> scan_directions(std::size_t dim, long radius, bool primitive_only) {
  if (radius < 1) throw InputError("radius must be at least 1");
  std::vector<Direction> out;
  Direction v(dim, -(radius - 1));
  while (true) {
    long g = 0;
    std::size_t first = dim;
    for (std::size_t i = 0; i < dim; ++i) {
      g = std::gcd(g, v[i]);
      if (first == dim && v[i] != 0) first = i;
    }
    if (first != dim && v[first] > 0 && (!primitive_only || g == 1)) out.push_back(v);
    std::size_t i = dim;
    while (i > 0 && v[i - 1] == radius - 1) v[--i] = -(radius - 1);
    if (i == 0) break;
    ++v[i - 1];
  }
  return out;
}

std::vector<ScanEntry> scan_trajectories(const CMF& cmf, const LatticePoint& start, const ScanOptions& opts) {
  auto dirs = scan_directions(cmf.dim(), opts.radius, opts.primitive_only);
  std::vector<ScanEntry> out(dirs.size());
  auto work = [&](std::size_t k) {
    ScanEntry& e = out[k];
    e.direction = dirs[k];
    try {
      auto tm = trajectory_matrix(cmf, start, dirs[k]);
      e.shift = tm.shift;
      PCF p = to_companion(tm.matrix).canonical.pcf;
      e.pcf = p;
      if (opts.with_metrics) e.metrics = compute_metrics(p, opts.depth);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
  };
  int jobs = std::max(1, opts.jobs);
  if (jobs == 1) {
    for (std::size_t k = 0; k < dirs.size(); ++k) work(k);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t k; (k = next.fetch_add(1)) < dirs.size();) work(k);
    });
  for (auto& th : pool) th.join();
  return out;
}

std::string direction_str(const Direction& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string point_str(const LatticePoint& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + q_str(p[i]);
  return s + ")";
}

Direction parse_direction(const std::string& text) {
  Direction v;
  for (const auto& part : split_list(text)) {
    try {
      std::size_t used = 0;
      long x = std::stol(part, &used);
      if (used != part.size()) throw InputError("");
      v.push_back(x);
    } catch (const std::exception&) {
      throw InputError("direction component '" + part + "' is not an integer");
    }
  }
  return v;
}

LatticePoint parse_point(const std::string& text) {
  LatticePoint p;
  for (const auto& part : split_list(text)) p.push_back(parse_q(part));
  return p;
}

}  // namespace pcf
