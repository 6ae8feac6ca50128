#include "pcf/guess.hpp"

#include "pcf/linalg.hpp"

namespace pcf {

namespace {

std::vector<std::vector<Q>> build_rows(const RationalSequence& seq, int m, int d, std::size_t count) {
  std::vector<std::vector<Q>> rows;
  rows.reserve(count);
  std::size_t width = static_cast<std::size_t>((m + 1) * (d + 1));
  for (std::size_t i = 0; i < count; ++i) {
    long n = seq.start_index + static_cast<long>(i);
    std::vector<Q> row(width);
    std::size_t col = 0;
    for (int j = 0; j <= m; ++j) {
      Q v = seq.terms[i + static_cast<std::size_t>(j)];
      for (int k = 0; k <= d; ++k) {
        row[col++] = v;
        v *= n;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Coefficient vector to the polynomials c_0 .. c_m of sum_j c_j(n) s_{n+j} = 0.
std::vector<Poly> to_polys(const std::vector<Int>& v, int m, int d) {
  std::vector<Poly> c;
  for (int j = 0; j <= m; ++j) {
    std::vector<Q> co;
    for (int k = 0; k <= d; ++k) co.emplace_back(v[static_cast<std::size_t>(j * (d + 1) + k)]);
    c.push_back(Poly::from_coeffs(co));
  }
  return c;
}

Recurrence to_recurrence_form(const std::vector<Poly>& c) {
  int m = static_cast<int>(c.size()) - 1;
  Q sign = c[static_cast<std::size_t>(m)].lead() < 0 ? Q(-1) : Q(1);
  Recurrence r;
  r.denom = c[static_cast<std::size_t>(m)].shift(Q(-m)) * sign;
  for (int i = 1; i <= m; ++i) r.coeffs.push_back(c[static_cast<std::size_t>(m - i)].shift(Q(-m)) * (-sign));
  return r;
}

}  // namespace

bool annihilates(const Recurrence& rec, const RationalSequence& seq) {
  std::size_t m = static_cast<std::size_t>(rec.order());
  for (std::size_t i = m; i < seq.terms.size(); ++i) {
    long n = seq.start_index + static_cast<long>(i);
    Q acc = rec.denom.eval(n) * seq.terms[i];
    for (std::size_t k = 1; k <= m; ++k) acc -= rec.coeffs[k - 1].eval(n) * seq.terms[i - k];
    if (acc != 0) return false;
  }
  return true;
}

std::optional<GuessResult> guess_recurrence(const RationalSequence& seq, const GuessOptions& opts) {
  if (seq.terms.size() < 3) throw InputError("need at least 3 terms to guess a recurrence");
  long len = static_cast<long>(seq.terms.size());
  for (int m = 1; m <= opts.max_order; ++m) {
    for (int d = 0; d <= opts.max_degree; ++d) {
      long unknowns = static_cast<long>(m + 1) * (d + 1);
      long equations = len - m;
      if (equations < unknowns + opts.surplus) break;
      auto rows = build_rows(seq, m, d, static_cast<std::size_t>(equations));
      std::size_t cols = static_cast<std::size_t>(unknowns);
      if (nullity_mod_p(rows, cols) == 0) continue;

      auto try_basis = [&](const std::vector<std::vector<Int>>& basis) -> std::optional<GuessResult> {
        for (const auto& v : basis) {
          auto c = to_polys(v, m, d);
          if (c.front().is_zero() || c.back().is_zero()) continue;
          Recurrence rec = to_recurrence_form(c);
          if (!annihilates(rec, seq)) continue;
          return GuessResult{rec, m, d, equations - unknowns};
        }
        return std::nullopt;
      };
      std::size_t head = std::min<std::size_t>(rows.size(), cols + 8);
      std::vector<std::vector<Q>> sub(rows.begin(), rows.begin() + static_cast<long>(head));
      if (auto r = try_basis(nullspace(sub, cols))) return r;
      if (auto r = try_basis(nullspace(rows, cols))) return r;
    }
  }
  return std::nullopt;
}

SeriesInit series_initial_conditions(const Q& s0, const Q& s1, const Q& s2, const Poly& a, const Poly& b) {
  if (s2 == s1) throw MathError("degenerate partial sums: S2 == S1");
  Q a2 = a.eval(2), b2 = b.eval(2);
  if (a2 == 0) throw MathError("degenerate initial conditions: a(2) == 0");
  Q x = (-b2 / a2) * ((s2 - s0) / (s2 - s1));
  MatQ raw = MatQ::of2(s0, x * s1, 1, x);
  Q a1 = a.eval(1), b1 = b.eval(1);
  if (b1 == 0) return {x, InitialConditions{raw, 2}};
  MatQ moved = raw * MatQ::of2(a1, -b1, -1, 0);
  return {x, InitialConditions{moved, 1}};
}

}  // namespace pcf
