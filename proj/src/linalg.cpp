#include "pcf/linalg.hpp"

namespace pcf {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1U) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1U;
  }
  return r;
}

u64 mod_int(const Int& z, u64 p) {
  u64 r = mpz_fdiv_ui(z.get_mpz_t(), p);
  return r;
}

}  // namespace

std::uint64_t mod_q(const Q& x, std::uint64_t p) {
  u64 d = mod_int(x.get_den(), p);
  if (d == 0) throw MathError("denominator divisible by the modulus");
  return mulmod(mod_int(x.get_num(), p), powmod(d, p - 2, p), p);
}

std::size_t nullity_mod_p(const std::vector<std::vector<Q>>& rows, std::size_t cols, std::uint64_t p) {
  std::vector<std::vector<u64>> m;
  m.reserve(rows.size());
  for (const auto& r : rows) {
    std::vector<u64> v(cols);
    for (std::size_t j = 0; j < cols; ++j) v[j] = mod_q(r[j], p);
    m.push_back(std::move(v));
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    u64 inv = powmod(m[rank][c], p - 2, p);
    for (std::size_t j = c; j < cols; ++j) m[rank][j] = mulmod(m[rank][j], inv, p);
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      u64 f = m[i][c];
      if (!f) continue;
      for (std::size_t j = c; j < cols; ++j) m[i][j] = (m[i][j] + p - mulmod(f, m[rank][j], p)) % p;
    }
    ++rank;
  }
  return cols - rank;
}

std::vector<std::vector<Int>> nullspace(const std::vector<std::vector<Q>>& rows, std::size_t cols) {
  // Integer-scale each row.
  std::vector<std::vector<Int>> a;
  a.reserve(rows.size());
  for (const auto& r : rows) {
    Int l = 1;
    for (std::size_t j = 0; j < cols; ++j) l = int_lcm(l, r[j].get_den());
    std::vector<Int> v(cols);
    bool nz = false;
    for (std::size_t j = 0; j < cols; ++j) {
      v[j] = Q(r[j] * l).get_num();
      nz = nz || v[j] != 0;
    }
    if (nz) a.push_back(std::move(v));
  }

  // Bareiss elimination to row echelon form.
  std::vector<std::size_t> pivots;
  Int prev = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Int t = a[rank][c] * a[i][j] - a[i][c] * a[rank][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = std::move(t);
      }
      a[i][c] = 0;
    }
    prev = a[rank][c];
    pivots.push_back(c);
    ++rank;
  }

  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Int>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Q> x(cols, Q(0));
    x[f] = 1;
    for (std::size_t r = rank; r-- > 0;) {
      std::size_t c = pivots[r];
      Q s = 0;
      for (std::size_t j = c + 1; j < cols; ++j)
        if (x[j] != 0 && a[r][j] != 0) s += Q(a[r][j]) * x[j];
      x[c] = -s / Q(a[r][c]);
    }
    Int l = 1;
    for (const auto& v : x) l = int_lcm(l, v.get_den());
    std::vector<Int> iv(cols);
    Int g = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      iv[j] = Q(x[j] * l).get_num();
      g = int_gcd(g, iv[j]);
    }
    if (g > 1)
      for (auto& v : iv) v /= g;
    basis.push_back(std::move(iv));
  }
  return basis;
}

}  // namespace pcf
