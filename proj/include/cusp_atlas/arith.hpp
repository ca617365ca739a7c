#pragma once

// Exact integer and rational primitives: factoring by trial division with
// a Pollard-Brent fallback, p-adic valuations, squarefree parts and Legendre symbols.

#include <gmpxx.h>

#include <cstdint>
#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cusp_atlas/errors.hpp"

namespace cusp_atlas {

using Integer = mpz_class;
using Rational = mpq_class;
using Prime = std::int64_t;

namespace arith {

inline constexpr std::uint64_t kDefaultFactorBound = 1'000'000;
inline constexpr std::uint64_t kMaxFactorBound = std::uint64_t{1} << 31;

/// Parses a trial-division bound. Returns 0 when the text is not a
/// positive integer in [2, 2^31].
inline std::uint64_t parse_factor_bound(const char* text) {
  if (text == nullptr || *text == '\0') return 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text, &end, 10);
  if (*end != '\0' || value < 2 || value > kMaxFactorBound) return 0;
  return value;
}

/// Trial-division bound; CUSP_ATLAS_FACTOR_BOUND overrides the default.
/// Read once per process.
inline std::uint64_t default_factor_bound() {
  static const std::uint64_t bound = [] {
    const std::uint64_t from_env = parse_factor_bound(std::getenv("CUSP_ATLAS_FACTOR_BOUND"));
    return from_env != 0 ? from_env : kDefaultFactorBound;
  }();
  return bound;
}

struct Factorization {
  int sign = 1;
  std::map<Prime, int> factors;

  Integer value() const {
    Integer n = sign;
    for (const auto& [p, e] : factors) {
      Integer pe;
      mpz_pow_ui(pe.get_mpz_t(), Integer(static_cast<long>(p)).get_mpz_t(), static_cast<unsigned long>(e));
      n *= pe;
    }
    return n;
  }

  std::set<Prime> primes() const {
    std::set<Prime> out;
    for (const auto& entry : factors) out.insert(entry.first);
    return out;
  }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

namespace detail {

inline int strip_factor(Integer& n, unsigned long p) {
  int e = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    ++e;
  }
  return e;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

}  // namespace detail

namespace detail {

inline constexpr unsigned long kRhoSteps = 1UL << 20;

// Primality of a cofactor that fits in 63 bits; GMP's test is
// deterministic below 2^64.
inline bool is_small_prime(const Integer& n) {
  return n.fits_slong_p() && mpz_probab_prime_p(n.get_mpz_t(), 25) != 0;
}

// Pollard-Brent rho with x -> x^2 + c. Returns a nontrivial factor of the
// composite m, or 0 after kRhoSteps iterations.
inline Integer rho_split(const Integer& m, unsigned long c) {
  Integer x = 2, y = 2, ys, q = 1, g = 1;
  auto step = [&](Integer& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  };
  unsigned long r = 1, done = 0;
  constexpr unsigned long kBatch = 64;
  while (g == 1 && done < kRhoSteps) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) step(y);
    for (unsigned long k = 0; k < r && g == 1; k += kBatch) {
      ys = y;
      for (unsigned long i = 0; i < std::min(kBatch, r - k); ++i) {
        step(y);
        q = q * abs(x - y) % m;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), m.get_mpz_t());
    }
    done += r;
    r *= 2;
  }
  if (g == m) {
    do {
      step(ys);
      const Integer diff = abs(x - ys);
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), m.get_mpz_t());
    } while (g == 1);
  }
  return (g == 1 || g == m) ? Integer(0) : g;
}

}  // namespace detail

/// Factors a nonzero integer by trial division up to `bound`. A cofactor
/// left over is split with Pollard-Brent rho; UnfactoredCofactor is raised
/// when rho gives up or a prime factor does not fit in 63 bits.
inline Factorization factor(const Integer& n, std::uint64_t bound = default_factor_bound()) {
  if (n == 0) throw std::invalid_argument("factor: zero has no factorization");
  if (bound > kMaxFactorBound) bound = kMaxFactorBound;

  Factorization f;
  f.sign = sgn(n) < 0 ? -1 : 1;
  Integer rem = abs(n);

  if (const int e = detail::strip_factor(rem, 2); e > 0) f.factors[2] = e;
  std::uint64_t d = 3;
  for (; d <= bound; d += 2) {
    if (mpz_cmp_ui(rem.get_mpz_t(), static_cast<unsigned long>(d * d)) < 0) break;
    if (const int e = detail::strip_factor(rem, static_cast<unsigned long>(d)); e > 0) {
      f.factors[static_cast<Prime>(d)] = e;
    }
  }
  auto unfactored = [&](const Integer& c) {
    return UnfactoredCofactor("cofactor " + c.get_str() + " of " + n.get_str() + " survives trial division up to " +
                              std::to_string(bound) + " and Pollard rho");
  };
  std::vector<Integer> pending;
  if (rem > 1) pending.push_back(rem);
  while (!pending.empty()) {
    const Integer c = pending.back();
    pending.pop_back();
    const bool below_square = mpz_cmp_ui(c.get_mpz_t(), static_cast<unsigned long>(d * d)) < 0;
    if (below_square || detail::is_small_prime(c)) {
      if (!c.fits_slong_p()) throw unfactored(c);
      f.factors[static_cast<Prime>(c.get_si())] += 1;
      continue;
    }
    if (mpz_probab_prime_p(c.get_mpz_t(), 25) != 0) throw unfactored(c);
    Integer split = 0;
    for (unsigned long shift = 1; shift <= 3 && split == 0; ++shift) split = detail::rho_split(c, shift);
    if (split == 0) throw unfactored(c);
    pending.push_back(split);
    pending.push_back(c / split);
  }
  return f;
}

/// Largest e with p^e | n.
inline int valuation(const Integer& n, Prime p) {
  if (n == 0) throw std::invalid_argument("valuation: n must be nonzero");
  Integer m = n;
  return detail::strip_factor(m, static_cast<unsigned long>(p));
}

/// Splits n = p^e * u with p not dividing u; returns e and writes u.
inline int split_valuation(const Integer& n, Prime p, Integer& unit) {
  unit = n;
  return detail::strip_factor(unit, static_cast<unsigned long>(p));
}

/// Integer in the same square class as a nonzero rational: num * den.
inline Integer square_class_integer(const Rational& x) {
  return x.get_num() * x.get_den();
}

/// Signed squarefree s with x / s a rational square.
inline Integer squarefree_part(const Rational& x) {
  if (x == 0) throw std::invalid_argument("squarefree_part: x must be nonzero");
  const Factorization f = factor(square_class_integer(x));
  Integer s = f.sign;
  for (const auto& [p, e] : f.factors) {
    if (e % 2 != 0) s *= static_cast<long>(p);
  }
  return s;
}

/// Primes dividing the numerator or denominator of x.
inline std::set<Prime> prime_support(const Rational& x) {
  if (x == 0) return {};
  return factor(square_class_integer(x)).primes();
}

/// Legendre symbol (u/p) for an odd prime p, by Euler's criterion.
inline int legendre(const Integer& u, Prime p) {
  const auto modulus = static_cast<std::uint64_t>(p);
  const std::uint64_t r = mpz_fdiv_ui(u.get_mpz_t(), static_cast<unsigned long>(modulus));
  if (r == 0) return 0;
  return detail::powmod(r, (modulus - 1) / 2, modulus) == 1 ? 1 : -1;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<Prime> primes_up_to(std::int64_t limit) {
  std::vector<Prime> out;
  if (limit < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

/// Residue of n modulo m in [0, m).
inline unsigned long mod(const Integer& n, unsigned long m) {
  return mpz_fdiv_ui(n.get_mpz_t(), m);
}

inline bool is_squarefree(std::int64_t n) {
  if (n == 0) return false;
  if (n < 0) n = -n;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % (d * d) == 0) return false;
  }
  return true;
}

/// True when x is a square in Q_p (p a finite prime).
inline bool is_padic_square(const Rational& x, Prime p) {
  if (x == 0) return true;
  Integer unit;
  const int e = split_valuation(square_class_integer(x), p, unit);
  if (e % 2 != 0) return false;
  if (p == 2) return mod(unit, 8) == 1;
  return legendre(unit, p) == 1;
}

}  // namespace arith
}  // namespace cusp_atlas
