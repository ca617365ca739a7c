#pragma once

#include <vector>

#include "cusp_atlas/arith.hpp"
#include "cusp_atlas/errors.hpp"
#include "cusp_atlas/matrix.hpp"

namespace cusp_atlas {

/// Polynomial with coefficients in ascending degree.
using Polynomial = std::vector<Rational>;

namespace unipotent {

inline Rational evaluate(const Polynomial& f, const Rational& x) {
  Rational acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

/// Alternating sum g(x) = sum_{a=0}^{n} (-1)^a C(n, a) f(x + a y).
inline Rational binomial_g(const Polynomial& f, unsigned n, const Rational& y, const Rational& x) {
  Rational total = 0;
  for (unsigned a = 0; a <= n; ++a) {
    const Rational term = Rational(binomial(n, a)) * evaluate(f, x + Rational(a) * y);
    if (a % 2 == 0) total += term;
    else total -= term;
  }
  return total;
}

/// Least l with (M - I)^l = 0.
inline int nilpotency_index(const RationalMatrix& m) {
  if (!m.is_square()) throw NotUnipotent("nilpotency_index: matrix must be square");
  const std::size_t n = m.rows();
  const RationalMatrix t = m - RationalMatrix::identity(n);
  RationalMatrix power = t;
  for (std::size_t l = 1; l <= n; ++l) {
    if (power.is_zero()) return static_cast<int>(l);
    power = power * t;
  }
  throw NotUnipotent("nilpotency_index: M - I is not nilpotent");
}

/// sum_a c_a M^(a k) for a = 0 .. size - 1.
inline RationalMatrix reassemble(const RationalMatrix& m, unsigned k, const std::vector<Rational>& coefficients) {
  const RationalMatrix step = power(m, k);
  RationalMatrix current = RationalMatrix::identity(m.rows());
  RationalMatrix total(m.rows(), m.cols());
  for (const auto& c : coefficients) {
    total += current * c;
    current = current * step;
  }
  return total;
}

/// Coefficients c_0 .. c_{l-1} with sum_a c_a M^(a k) = M, where l is the
/// nilpotency index of M - I. Solved in the basis I, T, ..., T^(l-1) of
/// T = M - I, where M^(ak) = sum_i C(ak, i) T^i.
inline std::vector<Rational> reconstruct_from_power(const RationalMatrix& m, unsigned k) {
  if (k == 0) throw PreconditionViolated("reconstruct_from_power: k must be positive");
  const auto l = static_cast<std::size_t>(nilpotency_index(m));

  RationalMatrix v(l, l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t a = 0; a < l; ++a) v(i, a) = Rational(binomial(static_cast<unsigned long>(a) * k, i));
  std::vector<Rational> rhs(l, Rational(0));
  rhs[0] = 1;
  if (l > 1) rhs[1] = 1;

  const auto inv = inverse(v);
  if (!inv) throw std::logic_error("reconstruct_from_power: binomial system is singular");
  std::vector<Rational> coefficients = *inv * rhs;
  if (reassemble(m, k, coefficients) != m) throw std::logic_error("reconstruct_from_power: reassembly check failed");
  return coefficients;
}

}  // namespace unipotent
}  // namespace cusp_atlas
