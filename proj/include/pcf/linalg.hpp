#pragma once

#include <cstdint>
#include <vector>

#include "pcf/algebra.hpp"

namespace pcf {

// 2^61 - 1
inline constexpr std::uint64_t kModPrime = (std::uint64_t{1} << 61) - 1;

// Residue of a rational modulo p; throws MathError when p divides the denominator.
std::uint64_t mod_q(const Q& x, std::uint64_t p = kModPrime);

// Nullity of the matrix (rows x cols) reduced mod p. Never smaller than the nullity over Q
// (barring a denominator divisible by p, reported as MathError), so zero rules out solutions.
std::size_t nullity_mod_p(const std::vector<std::vector<Q>>& rows, std::size_t cols,
                          std::uint64_t p = kModPrime);

// Basis of the right nullspace over Q, each vector scaled to coprime integers.
// Uses fraction-free elimination on integer-scaled rows.
std::vector<std::vector<Int>> nullspace(const std::vector<std::vector<Q>>& rows, std::size_t cols);

}  // namespace pcf
