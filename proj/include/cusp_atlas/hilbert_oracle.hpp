#pragma once

// Brute-force Hilbert symbol: searches for a primitive solution of
// z^2 = a x^2 + b y^2 modulo a prime power deep enough for Hensel lifting.
// Shares nothing with the closed forms in qform.hpp beyond factoring.

#include <cstdint>
#include <vector>

#include "cusp_atlas/arith.hpp"
#include "cusp_atlas/qform.hpp"

namespace cusp_atlas::oracle {

inline constexpr std::uint64_t kMaxModulus = 10'000'000;

struct OracleResult {
  int value = 1;
  int depth = 0;               // exponent e of the modulus p^e searched
  bool reduced_depth = false;  // true when p^e exceeded kMaxModulus
};

namespace detail {

inline std::uint64_t ipow(std::uint64_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

inline std::uint64_t residue(const Integer& x, std::uint64_t n) {
  return mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(n));
}

// True when z^2 = a x^2 + b y^2 has a solution mod n with one of x, y, z
// equal to 1. Every primitive solution scales to one of these.
inline bool primitive_solution_exists(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  std::vector<bool> is_square(n, false);
  std::vector<std::uint64_t> square(n);
  for (std::uint64_t t = 0; t < n; ++t) {
    square[t] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(t) * t) % n);
    is_square[square[t]] = true;
  }
  auto mul = [n](std::uint64_t u, std::uint64_t v) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(u) * v) % n);
  };

  // y = 1: z^2 = a x^2 + b
  for (std::uint64_t x = 0; x < n; ++x)
    if (is_square[(mul(a, square[x]) + b) % n]) return true;
  // x = 1: z^2 = a + b y^2
  for (std::uint64_t y = 0; y < n; ++y)
    if (is_square[(a + mul(b, square[y])) % n]) return true;
  // z = 1: 1 - a x^2 = b y^2
  std::vector<bool> b_times_square(n, false);
  for (std::uint64_t s = 0; s < n; ++s)
    if (is_square[s]) b_times_square[mul(b, s)] = true;
  for (std::uint64_t x = 0; x < n; ++x)
    if (b_times_square[(1 + n - mul(a, square[x])) % n]) return true;
  return false;
}

}  // namespace detail

inline OracleResult hilbert_oracle_detailed(const Integer& a_in, const Integer& b_in, Place v) {
  if (a_in == 0 || b_in == 0) throw std::invalid_argument("hilbert_oracle: arguments must be nonzero");
  if (v.is_infinite()) return {(a_in < 0 && b_in < 0) ? -1 : 1, 0, false};

  const Integer a = arith::squarefree_part(Rational(a_in));
  const Integer b = arith::squarefree_part(Rational(b_in));
  const Prime p = v.prime();
  const auto up = static_cast<std::uint64_t>(p);

  OracleResult result;
  result.depth = 2 * (1 + arith::valuation(Integer(4) * a * b, p)) + 1;
  // p^depth <= kMaxModulus, computed without overflow.
  auto fits = [up](int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
      if (r > kMaxModulus / up) return false;
      r *= up;
    }
    return true;
  };
  if (!fits(result.depth)) {
    // Squarefree a, b: a primitive solution mod p^3 (p odd) or 2^5 already
    // lifts, so a shallower search is still exact.
    result.depth = p == 2 ? 5 : 3;
    result.reduced_depth = true;
  }
  const std::uint64_t n = detail::ipow(up, result.depth);
  result.value = detail::primitive_solution_exists(detail::residue(a, n), detail::residue(b, n), n) ? 1 : -1;
  return result;
}

/// Hilbert symbol by exhaustive search; ground truth for the closed form.
inline int hilbert_oracle(const Integer& a, const Integer& b, Place v) {
  return hilbert_oracle_detailed(a, b, v).value;
}

}  // namespace cusp_atlas::oracle
