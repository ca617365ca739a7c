#pragma once

// Cusp types of arithmetic hyperbolic 4-manifolds: admissibility per
// commensurability class, explicit witness forms, the parabolic embedding,
// the quaternion-algebra obstruction and the 5-dimensional criterion.

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cusp_atlas/arith.hpp"
#include "cusp_atlas/construct.hpp"
#include "cusp_atlas/errors.hpp"
#include "cusp_atlas/matrix.hpp"
#include "cusp_atlas/qform.hpp"
#include "cusp_atlas/quat.hpp"

namespace cusp_atlas {

enum class CuspType { torus, half_twist, hantzsche_wendt, third_twist, quarter_twist, sixth_twist };

inline constexpr std::array<CuspType, 6> kAllCuspTypes{CuspType::torus,        CuspType::half_twist,
                                                       CuspType::hantzsche_wendt, CuspType::third_twist,
                                                       CuspType::quarter_twist, CuspType::sixth_twist};

inline std::string_view name(CuspType t) {
  switch (t) {
    case CuspType::torus: return "torus";
    case CuspType::half_twist: return "half_twist";
    case CuspType::hantzsche_wendt: return "hantzsche_wendt";
    case CuspType::third_twist: return "third_twist";
    case CuspType::quarter_twist: return "quarter_twist";
    case CuspType::sixth_twist: return "sixth_twist";
  }
  return "";
}

inline std::optional<CuspType> parse_cusp_type(std::string_view text) {
  for (const CuspType t : kAllCuspTypes)
    if (name(t) == text) return t;
  return std::nullopt;
}

/// Order of the holonomy group (4 for the Klein four-group of
/// hantzsche_wendt).
inline int holonomy_order(CuspType t) {
  switch (t) {
    case CuspType::torus: return 1;
    case CuspType::half_twist: return 2;
    case CuspType::hantzsche_wendt: return 4;
    case CuspType::third_twist: return 3;
    case CuspType::quarter_twist: return 4;
    case CuspType::sixth_twist: return 6;
  }
  return 0;
}

/// Modulus m of the bad-prime condition p = 1 (mod m), if any.
inline std::optional<int> obstruction_modulus(CuspType t) {
  switch (t) {
    case CuspType::third_twist:
    case CuspType::sixth_twist: return 3;
    case CuspType::quarter_twist: return 4;
    default: return std::nullopt;
  }
}

/// Torsion order whose absence obstructs t (3 for third and sixth twists).
inline std::optional<int> obstruction_torsion(CuspType t) {
  switch (t) {
    case CuspType::third_twist:
    case CuspType::sixth_twist: return 3;
    case CuspType::quarter_twist: return 4;
    default: return std::nullopt;
  }
}

/// Projective class of a signature (4,1) form, normalized to discriminant
/// -1 with squarefree coefficients.
struct CommensurabilityClass {
  InvariantProfile profile;
  DiagonalForm representative;

  const std::set<Prime>& bad_primes() const { return profile.negative_places; }
};

struct HolonomyRep {
  CuspType type;
  std::vector<RationalMatrix> generators;
  std::vector<RationalMatrix> elements;  // the generated finite group

  std::size_t group_order() const { return elements.size(); }
};

struct ParabolicIsometry {
  RationalMatrix A;
  std::vector<Rational> w;
};

enum class Obstruction5D { obstructed, not_obstructed };

inline std::string_view name(Obstruction5D o) { return o == Obstruction5D::obstructed ? "obstructed" : "not_obstructed"; }

struct Witness {
  DiagonalForm form;
  RationalMatrix block;       // holonomy-invariant rank 3 Gram matrix
  bool projective_ok = false;  // form ~ class representative
  bool invariant_ok = false;   // A^t block A = block for every generator
  bool block_ok = false;       // block diagonalizes to the first three coefficients
};

struct EnumeratedClass {
  Prime prime;
  CommensurabilityClass cls;
};

namespace cusp {

inline CommensurabilityClass class_of(const DiagonalForm& q) {
  if (qform::signature(q) != Signature{4, 1}) throw PreconditionViolated("class_of: signature must be (4,1)");
  const DiagonalForm representative = qform::scale(q, Rational(-qform::discriminant_class(q))).square_reduced();
  return {qform::invariant_profile(representative), representative};
}

inline bool admits(const CommensurabilityClass& c, CuspType t) {
  const auto m = obstruction_modulus(t);
  if (!m) return true;
  return std::none_of(c.bad_primes().begin(), c.bad_primes().end(), [m](Prime p) { return p % *m == 1; });
}

inline std::vector<CuspType> classify(const DiagonalForm& q) {
  const CommensurabilityClass c = class_of(q);
  std::vector<CuspType> out;
  for (const CuspType t : kAllCuspTypes)
    if (admits(c, t)) out.push_back(t);
  return out;
}

/// Smallest n in [1, limit] with m^n = I, or 0.
inline int multiplicative_order(const RationalMatrix& m, int limit = 64) {
  const RationalMatrix identity = RationalMatrix::identity(m.rows());
  RationalMatrix power = m;
  for (int n = 1; n <= limit; ++n) {
    if (power == identity) return n;
    power = power * m;
  }
  return 0;
}

namespace detail {

inline RationalMatrix diag3(int a, int b, int c) { return RationalMatrix::diagonal({Rational(a), Rational(b), Rational(c)}); }

inline std::vector<RationalMatrix> closure(const std::vector<RationalMatrix>& generators) {
  std::vector<RationalMatrix> elements{RationalMatrix::identity(3)};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& g : generators) {
      RationalMatrix next = elements[i] * g;
      if (std::find(elements.begin(), elements.end(), next) == elements.end()) elements.push_back(std::move(next));
    }
    if (elements.size() > 48) throw std::logic_error("holonomy group is not finite");
  }
  return elements;
}

}  // namespace detail

inline HolonomyRep holonomy_rep(CuspType t) {
  std::vector<RationalMatrix> gens;
  switch (t) {
    case CuspType::torus: gens = {RationalMatrix::identity(3)}; break;
    case CuspType::half_twist: gens = {detail::diag3(1, -1, -1)}; break;
    case CuspType::hantzsche_wendt: gens = {detail::diag3(1, -1, -1), detail::diag3(-1, 1, -1)}; break;
    case CuspType::third_twist: gens = {RationalMatrix{{-1, -1, 0}, {1, 0, 0}, {0, 0, 1}}}; break;
    case CuspType::quarter_twist: gens = {RationalMatrix{{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}}}; break;
    case CuspType::sixth_twist: gens = {RationalMatrix{{0, -1, 0}, {1, 1, 0}, {0, 0, 1}}}; break;
  }
  HolonomyRep rep{t, gens, detail::closure(gens)};
  return rep;
}

inline bool is_invariant(const HolonomyRep& h, const RationalMatrix& g) {
  for (const auto& a : h.generators)
    if (a.transpose() * g * a != g) return false;
  return true;
}

/// (1/|H|) sum of A^t S A over the holonomy group.
inline RationalMatrix invariant_form_average(const HolonomyRep& h, const RationalMatrix& seed) {
  if (seed.rows() != 3 || !seed.is_symmetric()) throw PreconditionViolated("invariant_form_average: seed must be a symmetric 3x3 matrix");
  if (qform::signature(qform::diagonalize(seed).form) != Signature{3, 0}) {
    throw PreconditionViolated("invariant_form_average: seed must be positive definite");
  }
  RationalMatrix sum(3, 3);
  for (const auto& a : h.elements) sum += a.transpose() * seed * a;
  sum *= Rational(1) / Rational(static_cast<long>(h.elements.size()));
  return sum;
}

namespace detail {

inline Integer product_where(const std::set<Prime>& primes, auto predicate) {
  Integer out = 1;
  for (const Prime p : primes)
    if (predicate(p)) out *= static_cast<long>(p);
  return out;
}

inline Witness certify(const CommensurabilityClass& c, CuspType t, DiagonalForm form, RationalMatrix block) {
  Witness w{std::move(form), std::move(block)};
  w.projective_ok = qform::projectively_equivalent(w.form, c.representative);
  w.invariant_ok = is_invariant(holonomy_rep(t), w.block);
  const DiagonalForm head{w.form[0], w.form[1], w.form[2]};
  w.block_ok = qform::rationally_equivalent(qform::diagonalize(w.block).form, head).equivalent;
  return w;
}

}  // namespace detail

/// Witness form for cusp type t in class c, with its invariant block and
/// the outcome of each certification step.
inline Witness witness(const CommensurabilityClass& c, CuspType t) {
  if (!admits(c, t)) throw Inadmissible("witness: class does not admit " + std::string(name(t)));
  const auto R = [](const Integer& x) { return Rational(x); };

  if (t == CuspType::quarter_twist) {
    const Integer n = detail::product_where(c.bad_primes(), [](Prime p) { return p != 2; });
    DiagonalForm form{R(n), R(n), 1, 1, -1};
    Witness w = detail::certify(c, t, form, RationalMatrix::diagonal({R(n), R(n), 1}));
    if (!w.projective_ok || !w.invariant_ok || !w.block_ok) throw std::logic_error("witness: quarter_twist certification failed");
    return w;
  }

  if (t == CuspType::third_twist || t == CuspType::sixth_twist) {
    const Integer base = detail::product_where(c.bad_primes(), [](Prime p) { return p != 2 && p % 3 == 2; });
    for (const Integer& n : {base, Integer(2 * base)}) {
      DiagonalForm form{R(n), R(3 * n), 3, 1, -1};
      RationalMatrix block{{R(4 * n), R(2 * n), 0}, {R(2 * n), R(4 * n), 0}, {0, 0, 3}};
      Witness w = detail::certify(c, t, form, block);
      if (w.projective_ok) {
        if (!w.invariant_ok || !w.block_ok) throw std::logic_error("witness: twist block certification failed");
        return w;
      }
    }
    throw SearchExhausted("witness: neither ab nor 2ab gives a form in the class");
  }

  const QuaternionTypeForm rep = construct::quaternion_representative(c.representative);
  Witness w = detail::certify(c, t, rep.form(), RationalMatrix::diagonal({R(rep.a), R(rep.b), R(rep.a * rep.b)}));
  if (!w.projective_ok || !w.invariant_ok || !w.block_ok) throw std::logic_error("witness: diagonal certification failed");
  return w;
}

inline DiagonalForm witness_form(const CommensurabilityClass& c, CuspType t) { return witness(c, t).form; }

/// phi(v) = A v + w composed as phi1 after phi2.
inline ParabolicIsometry compose(const ParabolicIsometry& phi1, const ParabolicIsometry& phi2) {
  std::vector<Rational> w = phi1.A * phi2.w;
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += phi1.w[i];
  return {phi1.A * phi2.A, std::move(w)};
}

/// 5x5 matrix of phi preserving q3 + <1, -1> and fixing (0, 0, 0, 1, 1).
inline RationalMatrix parabolic_embed(const ParabolicIsometry& phi, const DiagonalForm& q3) {
  if (q3.rank() != 3) throw PreconditionViolated("parabolic_embed: q3 must have rank 3");
  if (phi.A.rows() != 3 || phi.A.cols() != 3 || phi.w.size() != 3) {
    throw PreconditionViolated("parabolic_embed: A must be 3x3 and w a 3-vector");
  }
  const RationalMatrix Q3 = q3.gram();
  if (phi.A.transpose() * Q3 * phi.A != Q3) throw NotAnIsometry("parabolic_embed: A does not preserve q3");
  if (determinant(phi.A) != 1) throw NotAnIsometry("parabolic_embed: det A must be 1");

  const std::vector<Rational> fw = Q3 * phi.w;
  Rational h = 0;
  for (std::size_t i = 0; i < 3; ++i) h += phi.w[i] * fw[i];
  h /= 2;
  // Row vector f(w)^t A.
  std::vector<Rational> fa(3, Rational(0));
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 3; ++i) fa[j] += fw[i] * phi.A(i, j);

  RationalMatrix m(5, 5);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = phi.A(i, j);
    m(i, 3) = phi.w[i];
    m(i, 4) = -phi.w[i];
  }
  for (std::size_t j = 0; j < 3; ++j) {
    m(3, j) = -fa[j];
    m(4, j) = -fa[j];
  }
  m(3, 3) = 1 - h;
  m(3, 4) = h;
  m(4, 3) = -h;
  m(4, 4) = 1 + h;
  return m;
}

/// True when the class's quaternion algebra has no element of order n
/// modulo its centre.
inline bool torsion_obstruction(const CommensurabilityClass& c, int n) {
  const QuaternionTypeForm rep = construct::quaternion_representative(c.representative);
  return !quat::has_torsion(QuaternionAlgebra(-rep.a, -rep.b), n);
}

/// One-directional obstruction for B x S^1 cusps in dimension 5.
inline Obstruction5D admits_5d_product(const DiagonalForm& q6, CuspType t) {
  if (qform::signature(q6) != Signature{5, 1}) throw PreconditionViolated("admits_5d_product: signature must be (5,1)");
  if (qform::discriminant_class(q6) != -1) throw WrongDiscriminant("admits_5d_product: discriminant class must be -1");
  const auto m = obstruction_modulus(t);
  if (!m) return Obstruction5D::not_obstructed;
  for (const Prime p : qform::invariant_profile(q6).negative_places)
    if (p % *m == 1) return Obstruction5D::obstructed;
  return Obstruction5D::not_obstructed;
}

/// Profile of f, asserted equal at every finite place to that of f + <1>.
inline InvariantProfile restriction_profile(const DiagonalForm& f) {
  if (qform::signature(f) != Signature{4, 1}) throw PreconditionViolated("restriction_profile: signature must be (4,1)");
  if (qform::discriminant_class(f) != -1) throw WrongDiscriminant("restriction_profile: discriminant class must be -1");
  const InvariantProfile pf = qform::invariant_profile(f);
  const InvariantProfile pq = qform::invariant_profile(qform::direct_sum(f, DiagonalForm{1}));
  if (pf.negative_places != pq.negative_places) throw std::logic_error("restriction_profile: finite invariants of f and f + <1> differ");
  return pf;
}

/// Number k of extra circle factors for a cusp B x (S^1)^k, with n = dim B
/// and m the holonomy permutation degree.
inline int stabilization_k(int n, int m) {
  if (n < 1 || m < 1) throw PreconditionViolated("stabilization_k: n and m must be positive");
  const int k = (m % 2 == 0) ? m - n + 3 : m - n + 4;
  if (k < 0) throw NegativeK("stabilization_k: k = " + std::to_string(k) + " is negative");
  return k;
}

/// One class per prime p = 1 (mod m), p <= prime_bound, with bad primes
/// {2, p}; none of them admits t.
inline std::vector<EnumeratedClass> enumerate_avoiding(CuspType t, std::int64_t prime_bound) {
  const auto m = obstruction_modulus(t);
  if (!m) throw PreconditionViolated("enumerate_avoiding: " + std::string(name(t)) + " has no obstruction modulus");
  std::vector<EnumeratedClass> out;
  for (const Prime p : arith::primes_up_to(prime_bound)) {
    if (p % *m != 1) continue;
    InvariantProfile profile{{4, 1}, Integer(-1), {2, p}, 1};
    const CommensurabilityClass c = class_of(construct::form_with_profile(profile, 5));
    if (admits(c, t)) throw std::logic_error("enumerate_avoiding: constructed class admits the cusp type");
    out.push_back({p, c});
  }
  return out;
}

}  // namespace cusp
}  // namespace cusp_atlas
