#pragma once

// Diagonal rational quadratic forms and their complete invariant system
// over Q: signature, discriminant class, Hasse-Witt invariants at every
// place, and Conway p-excesses.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cusp_atlas/arith.hpp"
#include "cusp_atlas/errors.hpp"
#include "cusp_atlas/matrix.hpp"

namespace cusp_atlas {

/// A place of Q: a finite prime or the real place.
class Place {
 public:
  static constexpr Place infinity() { return Place(0); }
  static Place prime(Prime p) {
    if (!arith::is_prime(p)) throw std::invalid_argument("Place: " + std::to_string(p) + " is not prime");
    return Place(p);
  }

  bool is_infinite() const { return p_ == 0; }
  Prime prime() const {
    if (is_infinite()) throw std::logic_error("Place: the real place has no prime");
    return p_;
  }
  std::string to_string() const { return is_infinite() ? "infinity" : std::to_string(p_); }

  friend auto operator<=>(const Place&, const Place&) = default;

 private:
  constexpr explicit Place(Prime p) : p_(p) {}
  Prime p_;
};

/// Nondegenerate diagonal form <a_1, ..., a_n> over Q.
class DiagonalForm {
 public:
  explicit DiagonalForm(std::vector<Rational> coefficients) : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) throw DegenerateForm("DiagonalForm: rank must be at least 1");
    for (const auto& a : coefficients_) {
      if (a == 0) throw DegenerateForm("DiagonalForm: coefficients must be nonzero");
    }
  }
  DiagonalForm(std::initializer_list<Rational> coefficients)
      : DiagonalForm(std::vector<Rational>(coefficients)) {}

  std::size_t rank() const { return coefficients_.size(); }
  const Rational& operator[](std::size_t i) const { return coefficients_[i]; }
  const std::vector<Rational>& coefficients() const { return coefficients_; }
  auto begin() const { return coefficients_.begin(); }
  auto end() const { return coefficients_.end(); }

  /// Coefficients moved into Z by multiplying each by its denominator
  /// squared; the form's rational class is unchanged.
  std::vector<Integer> integral_coefficients() const {
    std::vector<Integer> out;
    out.reserve(coefficients_.size());
    for (const auto& a : coefficients_) out.push_back(arith::square_class_integer(a));
    return out;
  }

  /// Each coefficient replaced by its squarefree part.
  DiagonalForm square_reduced() const {
    std::vector<Rational> out;
    out.reserve(coefficients_.size());
    for (const auto& a : coefficients_) out.emplace_back(arith::squarefree_part(a));
    return DiagonalForm(std::move(out));
  }

  RationalMatrix gram() const { return RationalMatrix::diagonal(coefficients_); }

  std::string to_string() const {
    std::string out = "<";
    for (std::size_t i = 0; i < coefficients_.size(); ++i) {
      if (i > 0) out += ", ";
      out += coefficients_[i].get_str();
    }
    return out + ">";
  }

  friend bool operator==(const DiagonalForm&, const DiagonalForm&) = default;

 private:
  std::vector<Rational> coefficients_;
};

struct Signature {
  int positive = 0;
  int negative = 0;
  friend auto operator<=>(const Signature&, const Signature&) = default;
};

/// Signature, discriminant class and Hasse-Witt invariants of a form:
/// a complete invariant for rational equivalence.
struct InvariantProfile {
  Signature signature;
  Integer discriminant_class;
  std::set<Prime> negative_places;  // finite p with epsilon_p = -1
  int epsilon_infinity = 1;

  int rank() const { return signature.positive + signature.negative; }

  int epsilon(Place v) const {
    if (v.is_infinite()) return epsilon_infinity;
    return negative_places.count(v.prime()) != 0 ? -1 : 1;
  }

  friend bool operator==(const InvariantProfile&, const InvariantProfile&) = default;
};

struct Diagonalization {
  DiagonalForm form;
  RationalMatrix change_of_basis;  // T with T^t m T = diag(form)
};

struct EquivalenceVerdict {
  bool equivalent = false;
  std::string reason;  // empty when equivalent
  explicit operator bool() const { return equivalent; }
};

namespace qform {

/// Congruence diagonalization by symmetric Gaussian elimination.
inline Diagonalization diagonalize(const RationalMatrix& m) {
  if (!m.is_symmetric()) throw std::invalid_argument("diagonalize: matrix must be symmetric");
  const std::size_t n = m.rows();
  if (n == 0) throw SingularForm("diagonalize: empty matrix");
  RationalMatrix a = m;
  RationalMatrix t = RationalMatrix::identity(n);

  // Column operation col_dst += f * col_src applied as a congruence.
  auto add_multiple = [&](std::size_t dst, std::size_t src, const Rational& f) {
    for (std::size_t r = 0; r < n; ++r) a(r, dst) += f * a(r, src);
    for (std::size_t c = 0; c < n; ++c) a(dst, c) += f * a(src, c);
    for (std::size_t r = 0; r < n; ++r) t(r, dst) += f * t(r, src);
  };
  auto swap_index = [&](std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < n; ++r) std::swap(a(r, i), a(r, j));
    for (std::size_t c = 0; c < n; ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(t(r, i), t(r, j));
  };

  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t j = k + 1;
      while (j < n && a(j, j) == 0) ++j;
      if (j < n) {
        swap_index(k, j);
      } else {
        j = k + 1;
        while (j < n && a(k, j) == 0) ++j;
        if (j == n) throw SingularForm("diagonalize: determinant is zero");
        add_multiple(k, j, Rational(1));  // new a(k,k) = 2 a(k,j)
      }
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      const Rational f = -a(i, k) / a(k, k);
      add_multiple(i, k, f);
    }
  }

  std::vector<Rational> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
  return {DiagonalForm(std::move(diag)), std::move(t)};
}

inline Signature signature(const DiagonalForm& q) {
  Signature s;
  for (const auto& a : q) (sgn(a) > 0 ? s.positive : s.negative) += 1;
  return s;
}

inline Integer discriminant_class(const DiagonalForm& q) {
  Rational product = 1;
  for (const auto& a : q) product *= a;
  return arith::squarefree_part(product);
}

namespace detail {

// (x-1)/2 and (x^2-1)/8 modulo 2, for odd x given modulo 8.
inline int tau(unsigned long x8) { return static_cast<int>(((x8 + 7) / 2) % 2); }
inline int omega(unsigned long x8) { return (x8 == 3 || x8 == 5) ? 1 : 0; }

inline int hilbert_integers(const Integer& a, const Integer& b, Prime p) {
  Integer u, v;
  const int alpha = arith::split_valuation(a, p, u);
  const int beta = arith::split_valuation(b, p, v);
  if (p == 2) {
    const unsigned long u8 = arith::mod(u, 8);
    const unsigned long v8 = arith::mod(v, 8);
    const int exponent = tau(u8) * tau(v8) + alpha * omega(v8) + beta * omega(u8);
    return exponent % 2 == 0 ? 1 : -1;
  }
  int sign = 1;
  if ((alpha * beta) % 2 != 0 && p % 4 == 3) sign = -sign;
  if (beta % 2 != 0) sign *= arith::legendre(u, p);
  if (alpha % 2 != 0) sign *= arith::legendre(v, p);
  return sign;
}

}  // namespace detail

/// Hilbert symbol (a, b)_v by the closed forms at odd p, at 2 and at the
/// real place.
inline int hilbert_symbol(const Rational& a, const Rational& b, Place v) {
  if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: arguments must be nonzero");
  if (v.is_infinite()) return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;
  return detail::hilbert_integers(arith::square_class_integer(a), arith::square_class_integer(b), v.prime());
}

/// Hasse-Witt invariant: product over i < j of (a_i, a_j)_v.
inline int hasse_witt(const DiagonalForm& q, Place v) {
  if (v.is_infinite()) {
    const long s = signature(q).negative;
    return (s * (s - 1) / 2) % 2 == 0 ? 1 : -1;
  }
  const Prime p = v.prime();
  const std::vector<Integer> a = q.integral_coefficients();
  if (p != 2) {
    const bool touches = std::any_of(a.begin(), a.end(), [p](const Integer& x) {
      return mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p)) != 0;
    });
    if (!touches) return 1;
  }
  int eps = 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) eps *= detail::hilbert_integers(a[i], a[j], p);
  return eps;
}

/// 2 together with every prime dividing a coefficient: the only places
/// where a Hasse-Witt invariant can be -1.
inline std::set<Prime> relevant_primes(const DiagonalForm& q) {
  std::set<Prime> primes{2};
  for (const auto& a : q) {
    const auto support = arith::prime_support(a);
    primes.insert(support.begin(), support.end());
  }
  return primes;
}

inline InvariantProfile invariant_profile(const DiagonalForm& q) {
  InvariantProfile profile;
  profile.signature = signature(q);
  profile.discriminant_class = discriminant_class(q);
  for (const Prime p : relevant_primes(q)) {
    if (hasse_witt(q, Place::prime(p)) == -1) profile.negative_places.insert(p);
  }
  profile.epsilon_infinity = hasse_witt(q, Place::infinity());
  return profile;
}

namespace detail {

inline int rank_one_excess(const Integer& a, Prime p) {
  Integer u;
  const int k = arith::split_valuation(a, p, u);
  int e = 0;
  if (p == 2) {
    const auto u8 = static_cast<int>(arith::mod(u, 8));
    e = 1 - u8 + ((k % 2 != 0 && (u8 == 3 || u8 == 5)) ? 4 : 0);
  } else {
    const auto pk = static_cast<int>(arith::detail::powmod(static_cast<std::uint64_t>(p) % 8, static_cast<std::uint64_t>(k), 8));
    e = pk - 1 + ((k % 2 != 0 && arith::legendre(u, p) == -1) ? 4 : 0);
  }
  return ((e % 8) + 8) % 8;
}

}  // namespace detail

/// Conway p-excess e_p(q) in [0, 8), additive over coefficients.
inline int p_excess(const DiagonalForm& q, Prime p) {
  int total = 0;
  for (const auto& a : q.integral_coefficients()) total += detail::rank_one_excess(a, p);
  return total % 8;
}

/// epsilon_p read off from p-excesses: +1 exactly when e_p(q) equals the
/// excess of <d, 1, ..., 1> of the same rank.
inline int hasse_from_excess(const DiagonalForm& q, Prime p) {
  std::vector<Rational> reference(q.rank(), Rational(1));
  reference.front() = Rational(discriminant_class(q));
  return p_excess(q, p) == p_excess(DiagonalForm(std::move(reference)), p) ? 1 : -1;
}

inline DiagonalForm scale(const DiagonalForm& q, const Rational& c) {
  if (c == 0) throw std::invalid_argument("scale: factor must be nonzero");
  std::vector<Rational> out;
  out.reserve(q.rank());
  for (const auto& a : q) out.emplace_back(a * c);
  return DiagonalForm(std::move(out));
}

inline DiagonalForm direct_sum(const DiagonalForm& q1, const DiagonalForm& q2) {
  std::vector<Rational> out = q1.coefficients();
  out.insert(out.end(), q2.begin(), q2.end());
  return DiagonalForm(std::move(out));
}

/// Compares two profiles in the fixed order signature, discriminant,
/// epsilon_p for ascending p.
inline EquivalenceVerdict compare_profiles(const InvariantProfile& lhs, const InvariantProfile& rhs) {
  if (lhs.rank() != rhs.rank()) return {false, "rank"};
  if (lhs.signature != rhs.signature) return {false, "signature"};
  if (lhs.discriminant_class != rhs.discriminant_class) return {false, "discriminant"};
  std::vector<Prime> differing;
  std::set_symmetric_difference(lhs.negative_places.begin(), lhs.negative_places.end(),
                                rhs.negative_places.begin(), rhs.negative_places.end(),
                                std::back_inserter(differing));
  if (!differing.empty()) return {false, "epsilon_" + std::to_string(differing.front())};
  return {true, ""};
}

inline EquivalenceVerdict rationally_equivalent(const DiagonalForm& q1, const DiagonalForm& q2) {
  if (q1.rank() != q2.rank()) return {false, "rank"};
  return compare_profiles(invariant_profile(q1), invariant_profile(q2));
}

/// Projective equivalence: a q1 ~ b q2 for some nonzero integers a, b.
/// Odd rank reduces to rational equivalence after scaling both forms to
/// discriminant 1. Even rank searches c = +-(squarefree product of primes
/// dividing 2 and any coefficient) for q1 ~ c q2.
inline bool projectively_equivalent(const DiagonalForm& q1, const DiagonalForm& q2) {
  if (q1.rank() != q2.rank()) return false;
  if (q1.rank() % 2 == 1) {
    const DiagonalForm n1 = scale(q1, Rational(discriminant_class(q1)));
    const DiagonalForm n2 = scale(q2, Rational(discriminant_class(q2)));
    return rationally_equivalent(n1, n2).equivalent;
  }
  if (discriminant_class(q1) != discriminant_class(q2)) return false;

  const InvariantProfile target = invariant_profile(q1);
  std::set<Prime> support = relevant_primes(q1);
  const std::set<Prime> more = relevant_primes(q2);
  support.insert(more.begin(), more.end());
  const std::vector<Prime> primes(support.begin(), support.end());
  if (primes.size() > 24) throw SearchExhausted("projectively_equivalent: too many primes in the scalar search");

  const Signature s1 = signature(q1);
  const Signature s2 = signature(q2);
  std::vector<int> signs;
  if (s1 == s2) signs.push_back(1);
  if (s1.positive == s2.negative && s1.negative == s2.positive) signs.push_back(-1);

  for (const int sign : signs) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << primes.size()); ++mask) {
      Integer c = sign;
      for (std::size_t i = 0; i < primes.size(); ++i)
        if ((mask >> i) & 1U) c *= static_cast<long>(primes[i]);
      if (compare_profiles(target, invariant_profile(scale(q2, Rational(c)))).equivalent) return true;
    }
  }
  return false;
}

}  // namespace qform
}  // namespace cusp_atlas
