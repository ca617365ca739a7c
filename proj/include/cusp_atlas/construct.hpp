#pragma once

// Existence and construction of diagonal forms with a prescribed invariant
// profile. Every constructed form is certified against its target before
// it is returned.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "cusp_atlas/arith.hpp"
#include "cusp_atlas/errors.hpp"
#include "cusp_atlas/qform.hpp"

namespace cusp_atlas {

/// Positive integers a, b standing for <a, b, ab, 1, -1>.
struct QuaternionTypeForm {
  Integer a;
  Integer b;

  DiagonalForm form() const {
    return DiagonalForm{Rational(a), Rational(b), Rational(a * b), Rational(1), Rational(-1)};
  }
  friend bool operator==(const QuaternionTypeForm&, const QuaternionTypeForm&) = default;
};

struct FeasibilityReport {
  bool feasible = true;
  int violated_condition = 0;  // 1..5, 0 when feasible
  std::string detail;
  explicit operator bool() const { return feasible; }
};

namespace construct {

/// Checks the five existence conditions for a rank-n form with the given
/// invariants and reports the first one that fails.
inline FeasibilityReport serre_feasible(const InvariantProfile& profile, int rank) {
  auto fail = [](int condition, std::string detail) { return FeasibilityReport{false, condition, std::move(detail)}; };

  const std::size_t negatives = profile.negative_places.size() + (profile.epsilon_infinity == -1 ? 1 : 0);
  if (negatives % 2 != 0) return fail(1, "product of epsilon over all places is -1");

  const Integer& d = profile.discriminant_class;
  if (rank == 1 && (!profile.negative_places.empty() || profile.epsilon_infinity != 1)) {
    return fail(2, "rank 1 forms have every epsilon equal to 1");
  }
  if (rank == 2 && d != 0) {
    for (const Prime p : profile.negative_places) {
      if (arith::is_padic_square(Rational(-d), p)) {
        return fail(2, "rank 2 with -d a square in Q_" + std::to_string(p) + " forces epsilon_" + std::to_string(p) + " = 1");
      }
    }
    if (d < 0 && profile.epsilon_infinity != 1) return fail(2, "rank 2 with d < 0 forces epsilon_infinity = 1");
  }

  const int r = profile.signature.positive;
  const int s = profile.signature.negative;
  if (r < 0 || s < 0 || r + s != rank) return fail(3, "signature does not sum to the rank");

  if (d == 0 || sgn(d) != (s % 2 == 0 ? 1 : -1)) return fail(4, "sign of the discriminant is not (-1)^s");

  const int expected_infinity = ((s * (s - 1) / 2) % 2 == 0) ? 1 : -1;
  if (profile.epsilon_infinity != expected_infinity) return fail(5, "epsilon_infinity is not (-1)^(s(s-1)/2)");

  return {};
}

namespace detail {

inline Integer product_of(const std::set<Prime>& primes) {
  Integer out = 1;
  for (const Prime p : primes) out *= static_cast<long>(p);
  return out;
}

// Default search bound (product of bad primes and discriminant primes)^2 * 4,
// widened by the three doublings allowed on retry.
inline Integer search_bound(const InvariantProfile& profile) {
  std::set<Prime> support = profile.negative_places;
  const auto disc_primes = arith::prime_support(Rational(profile.discriminant_class));
  support.insert(disc_primes.begin(), disc_primes.end());
  const Integer base = product_of(support);
  return base * base * 4 * 8;
}

// Odd primes where the target needs epsilon = -1 but which do not divide
// `unit_free`; any small coefficient must absorb them.
inline Integer forced_divisor(const std::set<Prime>& negative_places, const Integer& unit_free) {
  Integer out = 1;
  for (const Prime p : negative_places) {
    if (p == 2) continue;
    if (mpz_divisible_ui_p(unit_free.get_mpz_t(), static_cast<unsigned long>(p)) == 0) out *= static_cast<long>(p);
  }
  return out;
}

inline bool squarefree(const Integer& n) {
  if (!n.fits_slong_p()) return false;
  return arith::is_squarefree(n.get_si());
}

// Positive divisors in ascending order.
inline std::vector<Integer> divisors(const Integer& n) {
  std::vector<Integer> low, high;
  for (Integer m = 1; m * m <= n; ++m) {
    if (n % m != 0) continue;
    low.push_back(m);
    if (m * m != n) high.push_back(n / m);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

inline DiagonalForm with_prefix(std::vector<Rational> head, int ones, int minus_ones) {
  head.insert(head.end(), static_cast<std::size_t>(ones), Rational(1));
  head.insert(head.end(), static_cast<std::size_t>(minus_ones), Rational(-1));
  return DiagonalForm(std::move(head));
}

}  // namespace detail

/// A diagonal form realizing `profile` at rank n, found by bounded search
/// in a fixed order so results are reproducible.
inline DiagonalForm form_with_profile(const InvariantProfile& profile, int rank) {
  if (const auto report = serre_feasible(profile, rank); !report) {
    throw Infeasible("form_with_profile: condition (" + std::to_string(report.violated_condition) + ") fails: " + report.detail);
  }
  const Integer d = profile.discriminant_class;
  const int r = profile.signature.positive;
  const int s = profile.signature.negative;
  const Integer bound = detail::search_bound(profile);

  if (rank == 1) {
    DiagonalForm out{Rational(d)};
    if (qform::invariant_profile(out) != profile) throw std::logic_error("form_with_profile: rank 1 certification failed");
    return out;
  }

  if (rank == 2) {
    // <a, d a>, with epsilon_p = (a, -d)_p.
    const Integer step = detail::forced_divisor(profile.negative_places, d);
    for (Integer m = step; m <= bound; m += step) {
      if (!detail::squarefree(m)) continue;
      for (const int sign : {1, -1}) {
        const Integer a = sign * m;
        const int positives = (a > 0 ? 1 : 0) + (a * d > 0 ? 1 : 0);
        if (positives != r) continue;
        DiagonalForm candidate{Rational(a), Rational(d * a)};
        if (qform::invariant_profile(candidate) == profile) return candidate;
      }
    }
    throw SearchExhausted("form_with_profile: no rank 2 form with |a| <= " + bound.get_str());
  }

  // Ternary tail <a, b, d2 a b> followed by +-1's.
  const int tail_r = std::min(r, 3);
  const int tail_s = 3 - tail_r;
  const int ones = r - tail_r;
  const int minus_ones = s - tail_s;
  const Integer d2 = d * ((minus_ones % 2 == 0) ? 1 : -1);
  const Integer step = detail::forced_divisor(profile.negative_places, d2);

  for (Integer t = step; t <= bound; t += step) {
    for (const Integer& ma : detail::divisors(t)) {
      const Integer mb = t / ma;
      if (!detail::squarefree(ma) || !detail::squarefree(mb)) continue;
      for (const auto& [sa, sb] : {std::pair{1, 1}, std::pair{1, -1}, std::pair{-1, 1}, std::pair{-1, -1}}) {
        const Integer a = sa * ma;
        const Integer b = sb * mb;
        const Integer c = d2 * a * b;
        const int positives = (a > 0 ? 1 : 0) + (b > 0 ? 1 : 0) + (c > 0 ? 1 : 0);
        if (positives != tail_r) continue;
        DiagonalForm candidate = detail::with_prefix({Rational(a), Rational(b), Rational(c)}, ones, minus_ones);
        if (qform::invariant_profile(candidate) == profile) return candidate;
      }
    }
  }
  throw SearchExhausted("form_with_profile: no ternary tail with |a||b| <= " + bound.get_str());
}

/// Quaternion-type form projectively equivalent to q: q is scaled to
/// discriminant -1 and matched by <a, b, ab, 1, -1> with a, b > 0.
inline QuaternionTypeForm quaternion_representative(const DiagonalForm& q) {
  const Signature sig = qform::signature(q);
  if (sig != Signature{4, 1}) throw PreconditionViolated("quaternion_representative: signature must be (4,1)");
  const DiagonalForm scaled = qform::scale(q, Rational(-qform::discriminant_class(q)));
  const DiagonalForm found = form_with_profile(qform::invariant_profile(scaled), 5);
  QuaternionTypeForm out{found[0].get_num(), found[1].get_num()};
  if (!qform::projectively_equivalent(out.form(), q)) {
    throw std::logic_error("quaternion_representative: certification failed for " + q.to_string());
  }
  return out;
}

/// Form r with r + block rationally equivalent to q. The residual
/// epsilon is read off from p-excess subtraction.
inline DiagonalForm complement_form(const DiagonalForm& q, const DiagonalForm& block) {
  if (q.rank() <= block.rank()) throw Infeasible("complement_form: rank of q must exceed rank of block");
  const Signature sq = qform::signature(q);
  const Signature sb = qform::signature(block);
  InvariantProfile residual;
  residual.signature = {sq.positive - sb.positive, sq.negative - sb.negative};
  if (residual.signature.positive < 0 || residual.signature.negative < 0) {
    throw Infeasible("complement_form: block signature does not fit inside q");
  }
  const int rank = static_cast<int>(q.rank() - block.rank());
  residual.discriminant_class = arith::squarefree_part(Rational(qform::discriminant_class(q) * qform::discriminant_class(block)));
  const long s = residual.signature.negative;
  residual.epsilon_infinity = ((s * (s - 1) / 2) % 2 == 0) ? 1 : -1;

  std::set<Prime> primes = qform::relevant_primes(q);
  const auto more = qform::relevant_primes(block);
  primes.insert(more.begin(), more.end());
  std::vector<Rational> reference(static_cast<std::size_t>(rank), Rational(1));
  reference.front() = Rational(residual.discriminant_class);
  const DiagonalForm reference_form(std::move(reference));
  for (const Prime p : primes) {
    const int excess = ((qform::p_excess(q, p) - qform::p_excess(block, p)) % 8 + 8) % 8;
    if (excess != qform::p_excess(reference_form, p)) residual.negative_places.insert(p);
  }

  if (const auto report = serre_feasible(residual, rank); !report) {
    throw Infeasible("complement_form: residual violates condition (" + std::to_string(report.violated_condition) + "): " + report.detail);
  }
  DiagonalForm r = form_with_profile(residual, rank);
  if (!qform::rationally_equivalent(qform::direct_sum(r, block), q)) {
    throw std::logic_error("complement_form: certification failed");
  }
  return r;
}

}  // namespace construct
}  // namespace cusp_atlas
