#pragma once

#include <optional>
#include <set>
#include <string>

#include "cusp_atlas/arith.hpp"
#include "cusp_atlas/errors.hpp"
#include "cusp_atlas/qform.hpp"

namespace cusp_atlas {

/// Quaternion algebra (a, b / Q), stored with squarefree a and b.
class QuaternionAlgebra {
 public:
  QuaternionAlgebra(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) throw DegenerateForm("QuaternionAlgebra: a and b must be nonzero");
    a_ = arith::squarefree_part(Rational(a));
    b_ = arith::squarefree_part(Rational(b));
  }

  const Integer& a() const { return a_; }
  const Integer& b() const { return b_; }

  /// Norm form restricted to pure quaternions: <-a, -b, ab>.
  DiagonalForm pure_norm_form() const { return DiagonalForm{Rational(-a_), Rational(-b_), Rational(a_ * b_)}; }

 private:
  Integer a_;
  Integer b_;
};

struct RamificationSet {
  std::set<Place> places;

  bool contains(Place v) const { return places.count(v) != 0; }
  std::size_t size() const { return places.size(); }
  std::set<Prime> finite() const {
    std::set<Prime> out;
    for (const Place& v : places)
      if (!v.is_infinite()) out.insert(v.prime());
    return out;
  }
  friend bool operator==(const RamificationSet&, const RamificationSet&) = default;
};

namespace quat {

/// Places v with (a, b)_v = -1.
inline RamificationSet ramification_set(const QuaternionAlgebra& q) {
  RamificationSet out;
  std::set<Prime> candidates{2};
  for (const Integer& x : {q.a(), q.b()}) {
    const auto support = arith::prime_support(Rational(x));
    candidates.insert(support.begin(), support.end());
  }
  for (const Prime p : candidates) {
    if (qform::hilbert_symbol(Rational(q.a()), Rational(q.b()), Place::prime(p)) == -1) out.places.insert(Place::prime(p));
  }
  if (qform::hilbert_symbol(Rational(q.a()), Rational(q.b()), Place::infinity()) == -1) out.places.insert(Place::infinity());
  return out;
}

/// Whether the place v splits in Q(sqrt d).
inline bool splits_in_quadratic(Place v, const Integer& d) {
  if (d == 0) throw PreconditionViolated("splits_in_quadratic: d must be nonzero");
  if (v.is_infinite()) return d > 0;
  const Integer d0 = arith::squarefree_part(Rational(d));
  if (d0 == 1) throw PreconditionViolated("splits_in_quadratic: d must not be a square");
  const Prime p = v.prime();
  if (p == 2) return arith::mod(d0, 8) == 1;
  if (mpz_divisible_ui_p(d0.get_mpz_t(), static_cast<unsigned long>(p)) != 0) return false;
  return arith::legendre(d0, p) == 1;
}

/// Discriminant of Q(xi_n) as a quadratic field.
inline Integer cyclotomic_quadratic(int n) {
  switch (n) {
    case 3:
    case 6:
      return -3;
    case 4:
      return -1;
    default:
      throw PreconditionViolated("torsion order must be 3, 4 or 6, got " + std::to_string(n));
  }
}

/// True when the unit group of Q, modulo its centre, contains an element of
/// order n: no ramified place splits in Q(xi_n).
inline bool has_torsion(const QuaternionAlgebra& q, int n) {
  const Integer d = cyclotomic_quadratic(n);
  for (const Place& v : ramification_set(q).places) {
    if (splits_in_quadratic(v, d)) return false;
  }
  return true;
}

/// Ramification of (-a, -b) against epsilon_p(<a, b, ab, 1, -1>) at the odd
/// primes. At 2 the two conditions are complementary; see
/// ram_complements_hasse_at_two.
inline bool ram_matches_hasse(const Integer& a, const Integer& b) {
  if (a <= 0 || b <= 0) throw PreconditionViolated("ram_matches_hasse: a and b must be positive");
  const RamificationSet ram = ramification_set(QuaternionAlgebra(-a, -b));
  const DiagonalForm form{Rational(a), Rational(b), Rational(a * b), Rational(1), Rational(-1)};
  std::set<Prime> primes = arith::prime_support(Rational(a));
  const auto more = arith::prime_support(Rational(b));
  primes.insert(more.begin(), more.end());
  for (const Prime p : primes) {
    if (p == 2) continue;
    const bool ramified = ram.contains(Place::prime(p));
    if (ramified != (qform::hasse_witt(form, Place::prime(p)) == -1)) return false;
  }
  return true;
}

/// 2 ramifies (-a, -b) exactly when epsilon_2(<a, b, ab, 1, -1>) = +1.
inline bool ram_complements_hasse_at_two(const Integer& a, const Integer& b) {
  if (a <= 0 || b <= 0) throw PreconditionViolated("ram_complements_hasse_at_two: a and b must be positive");
  const bool ramified = ramification_set(QuaternionAlgebra(-a, -b)).contains(Place::prime(2));
  const DiagonalForm form{Rational(a), Rational(b), Rational(a * b), Rational(1), Rational(-1)};
  return ramified == (qform::hasse_witt(form, Place::prime(2)) == 1);
}

/// Residue rule for an odd p dividing exactly one of the squarefree
/// entries: with p | a and p not dividing b, p ramifies iff b is a
/// non-residue mod p. nullopt when the rule does not apply.
inline std::optional<bool> ramifies_by_residue_rule(const QuaternionAlgebra& q, Prime p) {
  if (p == 2) return std::nullopt;
  const auto divides = [p](const Integer& x) { return mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p)) != 0; };
  const bool pa = divides(q.a());
  const bool pb = divides(q.b());
  if (pa == pb) return std::nullopt;
  const Integer& other = pa ? q.b() : q.a();
  return arith::legendre(other, p) == -1;
}

}  // namespace quat
}  // namespace cusp_atlas
