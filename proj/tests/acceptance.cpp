// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "cusp_atlas/cusp_atlas.hpp"
#include "cusp_atlas/hilbert_oracle.hpp"
#include "support.hpp"

using namespace cusp_atlas;
using testing_support::Rng;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail << what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && elapsed > limit_seconds) {
    std::ostringstream msg;
    msg << "took " << elapsed << " s, limit " << limit_seconds << " s";
    check.require(false, msg.str());
  }
  if (!check.ok) ++failures;
  std::printf("%s %2d  %-58s %9.3f s%s%s\n", check.ok ? "PASS" : "FAIL", id, title.c_str(), elapsed,
              check.ok ? "" : "  -- ", check.ok ? "" : check.detail.str().c_str());
  std::fflush(stdout);
}

DiagonalForm form(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (const long x : c) v.emplace_back(x);
  return DiagonalForm(std::move(v));
}

std::vector<CuspType> obstructed(const DiagonalForm& q) {
  const CommensurabilityClass c = cusp::class_of(q);
  std::vector<CuspType> out;
  for (const CuspType t : kAllCuspTypes)
    if (!cusp::admits(c, t)) out.push_back(t);
  return out;
}

void enumerate_check(Check& check, CuspType t, int modulus) {
  const auto classes = cusp::enumerate_avoiding(t, 500);
  std::size_t expected = 0;
  for (const Prime p : arith::primes_up_to(500))
    if (p % modulus == 1) ++expected;
  check.require(classes.size() == expected, std::string(name(t)) + ": wrong number of classes");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& c = classes[i].cls;
    check.require(classes[i].prime % modulus == 1, "prime not 1 mod m");
    check.require(c.bad_primes() == std::set<Prime>{2, classes[i].prime}, "unexpected bad primes");
    check.require(!cusp::admits(c, t), "class admits the avoided type");
    for (std::size_t j = 0; j < i; ++j) {
      if (qform::projectively_equivalent(c.representative, classes[j].cls.representative)) {
        check.require(false, "classes " + std::to_string(classes[j].prime) + " and " + std::to_string(classes[i].prime) +
                                 " coincide");
      }
    }
  }
}

}  // namespace

int main() {
  criterion(1, "example <1,1,7,7,-1>: eps_7 = -1, excludes {3, 6}", 0.001, [](Check& c) {
    const DiagonalForm q = form({1, 1, 7, 7, -1});
    c.require(qform::hasse_witt(q, Place::prime(7)) == -1, "eps_7 != -1");
    c.require(obstructed(q) == std::vector<CuspType>{CuspType::third_twist, CuspType::sixth_twist}, "wrong exclusions");
  });

  criterion(2, "example <1,2,5,10,-1>: eps_5 = -1, excludes {4}", 0.001, [](Check& c) {
    const DiagonalForm q = form({1, 2, 5, 10, -1});
    c.require(qform::hasse_witt(q, Place::prime(5)) == -1, "eps_5 != -1");
    c.require(obstructed(q) == std::vector<CuspType>{CuspType::quarter_twist}, "wrong exclusions");
  });

  criterion(3, "enumerate_avoiding third/quarter twist up to 500", 10, [](Check& c) {
    enumerate_check(c, CuspType::third_twist, 3);
    enumerate_check(c, CuspType::quarter_twist, 4);
  });

  criterion(4, "Hilbert closed form = solvability oracle, |a|,|b| <= 30", 60, [](Check& c) {
    const auto values = testing_support::squarefree_range(30);
    std::vector<Place> places{Place::infinity()};
    for (const Prime p : {2, 3, 5, 7, 11, 13}) places.push_back(Place::prime(p));
    for (const long a : values)
      for (const long b : values)
        for (const Place v : places) {
          if (qform::hilbert_symbol(Rational(a), Rational(b), v) != oracle::hilbert_oracle(Integer(a), Integer(b), v)) {
            c.require(false, "(" + std::to_string(a) + ", " + std::to_string(b) + ")_" + v.to_string());
          }
        }
  });

  criterion(5, "Hilbert reciprocity, 1000 pairs |a|,|b| <= 10^4", 5, [](Check& c) {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
      const Rational a(rng.nonzero(10000)), b(rng.nonzero(10000));
      int product = qform::hilbert_symbol(a, b, Place::infinity());
      std::set<Prime> primes{2};
      for (const auto& x : {a, b}) {
        const auto s = arith::prime_support(x);
        primes.insert(s.begin(), s.end());
      }
      for (const Prime p : primes) product *= qform::hilbert_symbol(a, b, Place::prime(p));
      c.require(product == 1, "reciprocity fails for (" + a.get_str() + ", " + b.get_str() + ")");
    }
  });

  criterion(6, "Hasse-Witt: symbol path = p-excess path, 500 forms", 0, [](Check& c) {
    Rng rng(6);
    for (int i = 0; i < 500; ++i) {
      const DiagonalForm q = rng.integer_form(static_cast<int>(rng.uniform(1, 6)), 50);
      std::set<Prime> primes = qform::relevant_primes(q);
      primes.insert(2);
      for (const Prime p : primes) {
        c.require(qform::hasse_witt(q, Place::prime(p)) == qform::hasse_from_excess(q, p),
                  q.to_string() + " at " + std::to_string(p));
      }
    }
  });

  criterion(7, "ram_matches_hasse for 1 <= a,b <= 50", 30, [](Check& c) {
    for (long a = 1; a <= 50; ++a)
      for (long b = 1; b <= 50; ++b) {
        c.require(quat::ram_matches_hasse(Integer(a), Integer(b)), "odd primes, a=" + std::to_string(a) + " b=" + std::to_string(b));
        c.require(quat::ram_complements_hasse_at_two(Integer(a), Integer(b)), "p=2, a=" + std::to_string(a) + " b=" + std::to_string(b));
      }
  });

  criterion(8, "quaternion_representative on 100 forms", 0, [](Check& c) {
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
      const DiagonalForm q = rng.form41(30);
      const QuaternionTypeForm rep = construct::quaternion_representative(q);
      c.require(rep.a > 0 && rep.b > 0, "non-positive a or b for " + q.to_string());
      c.require(qform::projectively_equivalent(rep.form(), q), "not projectively equivalent: " + q.to_string());
    }
  });

  criterion(9, "admits = not torsion_obstruction, 100 classes", 0, [](Check& c) {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
      const CommensurabilityClass cls = cusp::class_of(rng.form41(30));
      for (const CuspType t : {CuspType::third_twist, CuspType::quarter_twist, CuspType::sixth_twist}) {
        c.require(cusp::admits(cls, t) == !cusp::torsion_obstruction(cls, *obstruction_torsion(t)),
                  cls.representative.to_string() + " / " + std::string(name(t)));
      }
    }
  });

  criterion(10, "holonomy invariance (20 seeds x 6 types), orders 3, 4, 6", 0, [](Check& c) {
    Rng rng(10);
    for (const CuspType t : kAllCuspTypes) {
      const HolonomyRep h = cusp::holonomy_rep(t);
      for (int seed = 0; seed < 20; ++seed) {
        const RationalMatrix g = cusp::invariant_form_average(h, testing_support::random_positive_definite(rng));
        for (const auto& a : h.generators) c.require(a.transpose() * g * a == g, std::string(name(t)));
      }
    }
    c.require(cusp::multiplicative_order(cusp::holonomy_rep(CuspType::third_twist).generators.front()) == 3, "rho_3");
    c.require(cusp::multiplicative_order(cusp::holonomy_rep(CuspType::quarter_twist).generators.front()) == 4, "rho_4");
    c.require(cusp::multiplicative_order(cusp::holonomy_rep(CuspType::sixth_twist).generators.front()) == 6, "rho_6");
  });

  criterion(11, "parabolic embedding, 100 random (A, w)", 0, [](Check& c) {
    Rng rng(11);
    const std::vector<Rational> y0{0, 0, 0, 1, 1};
    for (int i = 0; i < 100; ++i) {
      const DiagonalForm q3{Rational(rng.uniform(1, 7)), Rational(rng.uniform(1, 7)), Rational(rng.uniform(1, 7))};
      const RationalMatrix big_q = block_diagonal(q3.gram(), RationalMatrix::diagonal({Rational(1), Rational(-1)}));
      auto random_phi = [&] {
        return ParabolicIsometry{testing_support::random_rotation(rng, q3),
                                 {rng.rational(5, 3), rng.rational(5, 3), rng.rational(5, 3)}};
      };
      const ParabolicIsometry p1 = random_phi(), p2 = random_phi();
      const RationalMatrix m1 = cusp::parabolic_embed(p1, q3), m2 = cusp::parabolic_embed(p2, q3);
      c.require(m1.transpose() * big_q * m1 == big_q, "M^t Q M != Q");
      c.require(m1 * y0 == y0, "M y0 != y0");
      c.require(cusp::parabolic_embed(cusp::compose(p1, p2), q3) == m1 * m2, "homomorphism law");
    }
  });

  criterion(12, "restriction identity (200 forms), 5D obstruction example", 0, [](Check& c) {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
      const DiagonalForm q = rng.form41(30);
      const DiagonalForm f = qform::scale(q, Rational(-qform::discriminant_class(q)));
      const InvariantProfile pf = cusp::restriction_profile(f);
      const InvariantProfile pq = qform::invariant_profile(qform::direct_sum(f, DiagonalForm{1}));
      c.require(pf.negative_places == pq.negative_places, f.to_string());
    }
    c.require(cusp::admits_5d_product(form({1, 1, 7, 7, 1, -1}), CuspType::third_twist) == Obstruction5D::obstructed,
              "<1,1,7,7,1,-1> not obstructed for third_twist");
  });

  criterion(13, "binomial_g properties, 100 unipotent reconstructions", 0, [](Check& c) {
    Rng rng(13);
    for (unsigned n = 0; n <= 8; ++n) {
      for (int trial = 0; trial < 5; ++trial) {
        const Rational y = rng.nonzero_rational(9, 4);
        const Rational x = rng.rational(20, 5);
        Polynomial low;
        for (unsigned d = 0; d < n; ++d) low.push_back(rng.rational(9, 4));
        if (n > 0) c.require(unipotent::binomial_g(low, n, y, x) == 0, "deg < n does not vanish");
        Polynomial monomial(n + 1, Rational(0));
        monomial[n] = 1;
        Rational expected = 1;
        for (unsigned j = 1; j <= n; ++j) expected *= Rational(j) * y;
        if (n % 2 == 1) expected = -expected;
        c.require(unipotent::binomial_g(monomial, n, y, x) == expected, "x^n gives wrong constant");
      }
    }
    for (int i = 0; i < 100; ++i) {
      const auto dim = static_cast<std::size_t>(rng.uniform(1, 6));
      const auto k = static_cast<unsigned>(rng.uniform(1, 5));
      const RationalMatrix m = testing_support::random_unipotent(rng, dim, 3);
      const auto coefficients = unipotent::reconstruct_from_power(m, k);
      c.require(coefficients.size() == static_cast<std::size_t>(unipotent::nilpotency_index(m)), "coefficient count");
      c.require(unipotent::reassemble(m, k, coefficients) == m, "reassembly");
    }
  });

  std::printf("NOTE 14  manifold-level existence statements and the non-arithmetic examples are out of scope;\n"
              "         their arithmetic content is covered by criteria 1-12.\n");
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
