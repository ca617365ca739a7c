#pragma once

// Random generators shared by the property tests. Seeds are fixed so runs
// are reproducible.

#include <cstdint>
#include <random>
#include <vector>

#include "cusp_atlas/cusp_atlas.hpp"

namespace testing_support {

using namespace cusp_atlas;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }
  bool coin() { return uniform(0, 1) == 1; }

  long nonzero(long bound) {
    const long v = uniform(1, bound);
    return coin() ? v : -v;
  }

  Rational rational(long num_bound, long den_bound) {
    Rational r(Integer(uniform(-num_bound, num_bound)), Integer(uniform(1, den_bound)));
    r.canonicalize();
    return r;
  }

  Rational nonzero_rational(long num_bound, long den_bound) {
    Rational r(Integer(nonzero(num_bound)), Integer(uniform(1, den_bound)));
    r.canonicalize();
    return r;
  }

  DiagonalForm integer_form(int rank, long bound) {
    std::vector<Rational> c;
    for (int i = 0; i < rank; ++i) c.emplace_back(nonzero(bound));
    return DiagonalForm(std::move(c));
  }

  /// Signature (4,1) integer form, coefficients bounded by `bound`.
  DiagonalForm form41(long bound) {
    std::vector<Rational> c;
    for (int i = 0; i < 4; ++i) c.emplace_back(uniform(1, bound));
    c.emplace_back(-uniform(1, bound));
    return DiagonalForm(std::move(c));
  }

  RationalMatrix invertible(std::size_t n, long bound) {
    for (;;) {
      RationalMatrix m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rational(bound, 3);
      if (determinant(m) != 0) return m;
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Reflection x -> x - 2 B(x, v) / q(v) v in the form with Gram matrix g.
inline RationalMatrix reflection(const RationalMatrix& g, const std::vector<Rational>& v) {
  const std::size_t n = g.rows();
  const std::vector<Rational> gv = g * v;
  Rational qv = 0;
  for (std::size_t i = 0; i < n; ++i) qv += v[i] * gv[i];
  RationalMatrix r = RationalMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) -= 2 * v[i] * gv[j] / qv;
  return r;
}

/// Rotation in SO(q3, Q): product of two reflections in anisotropic vectors.
inline RationalMatrix random_rotation(Rng& rng, const DiagonalForm& q3) {
  const RationalMatrix g = q3.gram();
  auto anisotropic = [&] {
    for (;;) {
      std::vector<Rational> v{rng.rational(4, 3), rng.rational(4, 3), rng.rational(4, 3)};
      const std::vector<Rational> gv = g * v;
      if (v[0] * gv[0] + v[1] * gv[1] + v[2] * gv[2] != 0) return v;
    }
  };
  return reflection(g, anisotropic()) * reflection(g, anisotropic());
}

/// Unipotent matrix: conjugate of a strictly upper triangular perturbation
/// of the identity by a random invertible matrix.
inline RationalMatrix random_unipotent(Rng& rng, std::size_t n, long bound) {
  RationalMatrix u = RationalMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) u(i, j) = rng.uniform(-bound, bound);
  if (rng.coin()) return u;
  RationalMatrix p = RationalMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) p(i, j) = rng.uniform(-1, 1);
  return *inverse(p) * u * p;
}

/// Positive definite symmetric 3x3 matrix M^t M.
inline RationalMatrix random_positive_definite(Rng& rng) {
  for (;;) {
    RationalMatrix m(3, 3);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) m(r, c) = rng.rational(5, 3);
    RationalMatrix s = m.transpose() * m;
    if (determinant(s) != 0) return s;
  }
}

inline std::vector<long> squarefree_range(long bound) {
  std::vector<long> out;
  for (long x = -bound; x <= bound; ++x)
    if (x != 0 && arith::is_squarefree(x)) out.push_back(x);
  return out;
}

}  // namespace testing_support
