#pragma once

// Command-line front end. `run` takes the arguments after the program name
// and writes one JSON document to `out`; diagnostics go to `err`.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cusp_atlas/arith.hpp"
#include "cusp_atlas/construct.hpp"
#include "cusp_atlas/cusp.hpp"
#include "cusp_atlas/errors.hpp"
#include "cusp_atlas/matrix.hpp"
#include "cusp_atlas/qform.hpp"
#include "cusp_atlas/quat.hpp"
#include "cusp_atlas/unipotent.hpp"

namespace cusp_atlas::cli {

inline constexpr const char* kSchema = "cusp-atlas/1";

enum ExitCode : int { kSuccess = 0, kNegative = 1, kUsage = 2, kComputation = 3 };

/// Malformed command-line literal.
class LiteralError : public DomainError {
 public:
  using DomainError::DomainError;
};

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- parsing

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string piece;
  std::istringstream stream(s);
  while (std::getline(stream, piece, sep)) parts.push_back(trim(piece));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

/// Integer or fraction "p/q" in lowest terms.
inline Rational parse_rational(const std::string& text) {
  static const std::regex pattern(R"(^[+-]?\d+(/\d+)?$)");
  const std::string t = trim(text);
  if (!std::regex_match(t, pattern)) throw LiteralError("not a rational number: '" + text + "'");
  const auto slash = t.find('/');
  Integer num(t.substr(0, slash));
  Integer den = slash == std::string::npos ? Integer(1) : Integer(t.substr(slash + 1));
  if (den == 0) throw LiteralError("zero denominator in '" + text + "'");
  Rational out(num, den);
  out.canonicalize();
  return out;
}

inline Integer parse_integer(const std::string& text) {
  static const std::regex pattern(R"(^[+-]?\d+$)");
  const std::string t = trim(text);
  if (!std::regex_match(t, pattern)) throw LiteralError("not an integer: '" + text + "'");
  return Integer(t.front() == '+' ? t.substr(1) : t);
}

inline std::vector<Rational> parse_vector(const std::string& text) {
  if (trim(text).empty()) throw LiteralError("empty list");
  std::vector<Rational> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_rational(part));
  return out;
}

/// Comma-separated nonzero coefficients, e.g. "1,1,7,7,-1" or "1/2,3".
inline DiagonalForm parse_form(const std::string& text) {
  std::vector<Rational> coefficients = parse_vector(text);
  for (const auto& a : coefficients)
    if (a == 0) throw LiteralError("form coefficients must be nonzero");
  return DiagonalForm(std::move(coefficients));
}

/// Rows separated by ';', entries by ','.
inline RationalMatrix parse_matrix(const std::string& text) {
  const auto rows = split(text, ';');
  if (rows.empty()) throw LiteralError("empty matrix");
  std::vector<std::vector<Rational>> entries;
  for (const auto& row : rows) entries.push_back(parse_vector(row));
  const std::size_t cols = entries.front().size();
  RationalMatrix m(entries.size(), cols);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].size() != cols) throw LiteralError("matrix rows have different lengths");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = entries[i][j];
  }
  return m;
}

inline CuspType parse_cusp(const std::string& text) {
  const auto t = parse_cusp_type(text);
  if (!t) throw LiteralError("unknown cusp type '" + text + "'");
  return *t;
}

// ---------------------------------------------------------------- output

inline std::string str(const Rational& x) { return x.get_str(); }
inline std::string str(const Integer& x) { return x.get_str(); }
inline std::string str(long long x) { return std::to_string(x); }

inline Json to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(str(x));
  return out;
}

inline Json to_json(const DiagonalForm& q) { return to_json(q.coefficients()); }

inline Json to_json(const RationalMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(str(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline Json to_json(const std::set<Prime>& primes) {
  Json out = Json::array();
  for (const Prime p : primes) out.push_back(str(p));
  return out;
}

inline Json to_json(const InvariantProfile& p) {
  Json hw = Json::object();
  for (const Prime q : p.negative_places) hw[str(q)] = "-1";
  return Json{{"signature", {str(p.signature.positive), str(p.signature.negative)}},
              {"discriminant", str(p.discriminant_class)},
              {"hasse_witt", hw},
              {"epsilon_infinity", str(p.epsilon_infinity)}};
}

inline Json to_json(const CommensurabilityClass& c) {
  return Json{{"representative", to_json(c.representative)}, {"bad_primes", to_json(c.bad_primes())}};
}

inline Json cusp_list(const std::vector<CuspType>& types) {
  Json out = Json::array();
  for (const CuspType t : types) out.push_back(std::string(name(t)));
  return out;
}

// ---------------------------------------------------------------- commands

struct Options {
  bool pretty = false;
  bool json = true;
  bool fail_on_no = false;
  bool verify = false;
  std::string form, lhs, rhs, cusp, q3, a_matrix, w, matrix, poly, a, b;
  std::string avoid;
  long long prime_bound = 0;
  long long k = 1;
  long long n = 0;
  std::string y = "1", x = "0";
};

/// Result of a subcommand: its JSON body and whether the answer was
/// negative (used by --fail-on-no).
struct Outcome {
  Json body;
  bool negative = false;
};

/// Raised when --verify finds a mismatch.
class VerificationFailure : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

inline Json header(const std::string& command, Json input) {
  return Json{{"schema", kSchema}, {"command", command}, {"input", std::move(input)}};
}

inline Outcome cmd_invariants(const Options& o) {
  const DiagonalForm q = parse_form(o.form);
  const InvariantProfile p = qform::invariant_profile(q);
  Json body = header("invariants", {{"form", to_json(q)}});
  body["rank"] = str(static_cast<long long>(q.rank()));
  const Json profile = to_json(p);
  for (const auto& [key, value] : profile.items()) body[key] = value;
  Json excess = Json::object();
  bool agree = true;
  for (const Prime prime : qform::relevant_primes(q)) {
    excess[str(prime)] = str(qform::p_excess(q, prime));
    agree = agree && qform::hasse_from_excess(q, prime) == qform::hasse_witt(q, Place::prime(prime));
  }
  body["p_excess"] = excess;
  body["excess_path_agrees"] = agree;
  if (!agree) throw std::logic_error("invariants: Hilbert-symbol and p-excess paths disagree");
  return {body, false};
}

inline Outcome cmd_equiv(const Options& o) {
  const DiagonalForm l = parse_form(o.lhs);
  const DiagonalForm r = parse_form(o.rhs);
  const EquivalenceVerdict v = qform::rationally_equivalent(l, r);
  Json body = header("equiv", {{"lhs", to_json(l)}, {"rhs", to_json(r)}});
  body["equivalent"] = v.equivalent;
  body["reason"] = v.reason;
  return {body, !v.equivalent};
}

inline Outcome cmd_proj_equiv(const Options& o) {
  const DiagonalForm l = parse_form(o.lhs);
  const DiagonalForm r = parse_form(o.rhs);
  const bool eq = qform::projectively_equivalent(l, r);
  Json body = header("proj-equiv", {{"lhs", to_json(l)}, {"rhs", to_json(r)}});
  body["projectively_equivalent"] = eq;
  return {body, !eq};
}

inline Outcome cmd_classify(const Options& o) {
  const DiagonalForm q = parse_form(o.form);
  const CommensurabilityClass c = cusp::class_of(q);
  std::vector<CuspType> admissible, obstructed;
  for (const CuspType t : kAllCuspTypes) (cusp::admits(c, t) ? admissible : obstructed).push_back(t);
  Json input{{"form", to_json(q)}};
  if (!o.cusp.empty()) input["cusp"] = o.cusp;
  Json body = header("classify", input);
  body["class"] = to_json(c);
  body["admissible"] = cusp_list(admissible);
  body["obstructed"] = cusp_list(obstructed);
  if (o.cusp.empty()) return {body, false};
  const bool ok = cusp::admits(c, parse_cusp(o.cusp));
  body["admits"] = ok;
  return {body, !ok};
}

inline Outcome cmd_witness(const Options& o) {
  const DiagonalForm q = parse_form(o.form);
  const CuspType t = parse_cusp(o.cusp);
  const CommensurabilityClass c = cusp::class_of(q);
  const Witness w = cusp::witness(c, t);
  Json body = header("witness", {{"form", to_json(q)}, {"cusp", std::string(name(t))}});
  body["class"] = to_json(c);
  body["form"] = to_json(w.form);
  body["block"] = to_json(w.block);
  const HolonomyRep h = cusp::holonomy_rep(t);
  Json generators = Json::array();
  for (const auto& g : h.generators) generators.push_back(to_json(g));
  body["holonomy"] = {{"order", str(static_cast<long long>(h.group_order()))}, {"generators", generators}};
  Json transcript{{"projectively_equivalent", w.projective_ok},
                  {"block_invariant", w.invariant_ok},
                  {"block_matches_form", w.block_ok}};
  if (o.verify) {
    const bool rational = qform::rationally_equivalent(cusp::class_of(w.form).representative, c.representative).equivalent;
    const bool in_class = qform::invariant_profile(cusp::class_of(w.form).representative) == c.profile;
    const auto types = cusp::classify(w.form);
    const bool classified = std::find(types.begin(), types.end(), t) != types.end();
    transcript["class_profile_matches"] = in_class && rational;
    transcript["classifies_as_admitting"] = classified;
    if (!(rational && in_class && classified && w.projective_ok && w.invariant_ok && w.block_ok)) {
      body["verification"] = transcript;
      throw VerificationFailure("witness: verification failed: " + body.dump());
    }
  }
  body["verification"] = transcript;
  return {body, false};
}

inline Outcome cmd_quat(const Options& o) {
  const QuaternionAlgebra alg(parse_integer(o.a), parse_integer(o.b));
  Json body = header("quat", {{"a", o.a}, {"b", o.b}});
  body["normalized"] = {str(alg.a()), str(alg.b())};
  const RamificationSet ram = quat::ramification_set(alg);
  Json places = Json::array();
  for (const Place& v : ram.places) places.push_back(v.to_string());
  body["ramification"] = places;
  body["division_algebra"] = !ram.places.empty();
  Json torsion = Json::object();
  for (const int n : {3, 4, 6}) torsion[std::to_string(n)] = quat::has_torsion(alg, n);
  body["torsion"] = torsion;
  return {body, false};
}

inline Outcome cmd_classify_5d(const Options& o) {
  const DiagonalForm q = parse_form(o.form);
  Json input{{"form", to_json(q)}};
  if (!o.cusp.empty()) input["cusp"] = o.cusp;
  Json body = header("classify-5d", input);
  std::vector<CuspType> types(kAllCuspTypes.begin(), kAllCuspTypes.end());
  if (!o.cusp.empty()) types = {parse_cusp(o.cusp)};
  Json results = Json::object();
  bool any_obstructed = false;
  for (const CuspType t : types) {
    const Obstruction5D r = cusp::admits_5d_product(q, t);
    any_obstructed = any_obstructed || r == Obstruction5D::obstructed;
    results[std::string(name(t))] = std::string(name(r));
  }
  body["bad_primes"] = to_json(qform::invariant_profile(q).negative_places);
  body["product_cusps"] = results;
  return {body, any_obstructed};
}

inline Outcome cmd_embed(const Options& o) {
  const DiagonalForm q3 = parse_form(o.q3);
  ParabolicIsometry phi{parse_matrix(o.a_matrix), parse_vector(o.w)};
  const RationalMatrix m = cusp::parabolic_embed(phi, q3);
  const RationalMatrix big_q = block_diagonal(q3.gram(), RationalMatrix::diagonal({Rational(1), Rational(-1)}));
  const std::vector<Rational> y0{0, 0, 0, 1, 1};
  Json body = header("embed", {{"q3", to_json(q3)}, {"A", to_json(phi.A)}, {"w", to_json(phi.w)}});
  body["matrix"] = to_json(m);
  body["preserves_form"] = (m.transpose() * big_q * m == big_q);
  body["fixes_y0"] = (m * y0 == y0);
  return {body, false};
}

inline Outcome cmd_unipotent_reconstruct(const Options& o) {
  if (o.k < 1) throw LiteralError("--k must be positive");
  const RationalMatrix m = parse_matrix(o.matrix);
  const auto coefficients = unipotent::reconstruct_from_power(m, static_cast<unsigned>(o.k));
  Json body = header("unipotent reconstruct", {{"matrix", to_json(m)}, {"k", str(o.k)}});
  body["nilpotency_index"] = str(static_cast<long long>(unipotent::nilpotency_index(m)));
  body["coefficients"] = to_json(coefficients);
  body["reassembles"] = unipotent::reassemble(m, static_cast<unsigned>(o.k), coefficients) == m;
  return {body, false};
}

inline Outcome cmd_unipotent_binomial(const Options& o) {
  if (o.n < 0) throw LiteralError("--n must be nonnegative");
  const Polynomial f = parse_vector(o.poly);
  const Rational y = parse_rational(o.y);
  const Rational x = parse_rational(o.x);
  Json body = header("unipotent binomial", {{"poly", to_json(f)}, {"n", str(o.n)}, {"y", str(y)}, {"x", str(x)}});
  body["value"] = str(unipotent::binomial_g(f, static_cast<unsigned>(o.n), y, x));
  return {body, false};
}

inline Outcome cmd_enumerate(const Options& o) {
  const CuspType t = parse_cusp(o.avoid);
  if (o.prime_bound < 1) throw LiteralError("--prime-bound must be positive");
  const auto classes = cusp::enumerate_avoiding(t, o.prime_bound);
  Json body = header("enumerate", {{"avoid", std::string(name(t))}, {"prime_bound", str(o.prime_bound)}});
  body["modulus"] = str(static_cast<long long>(*obstruction_modulus(t)));
  Json list = Json::array();
  for (const auto& e : classes) {
    Json entry{{"prime", str(e.prime)}};
    const Json cls = to_json(e.cls);
    for (const auto& [key, value] : cls.items()) entry[key] = value;
    list.push_back(std::move(entry));
  }
  body["classes"] = list;
  body["count"] = str(static_cast<long long>(classes.size()));
  if (o.verify) {
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const auto& c = classes[i].cls;
      const std::set<Prime> expected{2, classes[i].prime};
      if (c.bad_primes() != expected || cusp::admits(c, t) ||
          qform::invariant_profile(c.representative) != c.profile) {
        throw VerificationFailure("enumerate: class for p = " + str(classes[i].prime) + " failed verification");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (qform::projectively_equivalent(c.representative, classes[j].cls.representative)) {
          throw VerificationFailure("enumerate: classes for p = " + str(classes[j].prime) + " and " +
                                    str(classes[i].prime) + " coincide");
        }
      }
    }
    body["verified"] = true;
  }
  return {body, classes.empty()};
}

// ---------------------------------------------------------------- driver

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cusp types of arithmetic hyperbolic 4-manifolds from rational quadratic forms", "cusp-atlas"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  auto* json_flag = app.add_flag("--json", o.json, "Compact JSON output (default)");
  app.add_flag("--pretty", o.pretty, "Indented JSON output")->excludes(json_flag);
  app.add_flag("--fail-on-no", o.fail_on_no, "Exit with status 1 when the answer is negative");

  auto* invariants = app.add_subcommand("invariants", "Signature, discriminant, Hasse-Witt invariants and p-excesses");
  invariants->add_option("--form", o.form, "Diagonal form, e.g. 1,2,5,10,-1")->required();

  auto* equiv = app.add_subcommand("equiv", "Rational equivalence of two diagonal forms");
  equiv->add_option("--lhs", o.lhs)->required();
  equiv->add_option("--rhs", o.rhs)->required();

  auto* proj = app.add_subcommand("proj-equiv", "Projective equivalence of two diagonal forms");
  proj->add_option("--lhs", o.lhs)->required();
  proj->add_option("--rhs", o.rhs)->required();

  auto* classify = app.add_subcommand("classify", "Admissible cusp types of a signature (4,1) form");
  classify->add_option("--form", o.form)->required();
  classify->add_option("--cusp", o.cusp, "Ask about a single cusp type");

  auto* witness = app.add_subcommand("witness", "Witness form for a cusp type");
  witness->add_option("--form", o.form)->required();
  witness->add_option("--cusp", o.cusp)->required();
  witness->add_flag("--verify", o.verify, "Re-run the full certification");

  auto* quat_cmd = app.add_subcommand("quat", "Ramification and torsion of the quaternion algebra (a, b)");
  quat_cmd->add_option("--a", o.a)->required();
  quat_cmd->add_option("--b", o.b)->required();

  auto* c5 = app.add_subcommand("classify-5d", "Obstruction to B x S^1 cusps for a signature (5,1) form");
  c5->add_option("--form", o.form)->required();
  c5->add_option("--cusp", o.cusp);

  auto* embed = app.add_subcommand("embed", "5x5 matrix of a parabolic isometry v -> Av + w");
  embed->add_option("--q3", o.q3, "Rank 3 diagonal form")->required();
  embed->add_option("--A", o.a_matrix, "Rows separated by ';'")->required();
  embed->add_option("--w", o.w, "Translation vector")->required();

  auto* uni = app.add_subcommand("unipotent", "Unipotent reconstruction and the alternating binomial sum");
  uni->require_subcommand(1);
  auto* reconstruct = uni->add_subcommand("reconstruct", "Write M as a combination of powers of M^k");
  reconstruct->add_option("--matrix", o.matrix)->required();
  reconstruct->add_option("--k", o.k)->required();
  auto* binomial = uni->add_subcommand("binomial", "Evaluate sum_a (-1)^a C(n,a) f(x + a y)");
  binomial->add_option("--poly", o.poly, "Coefficients in ascending degree")->required();
  binomial->add_option("--n", o.n)->required();
  binomial->add_option("--y", o.y);
  binomial->add_option("--x", o.x);

  auto* enumerate = app.add_subcommand("enumerate", "Classes avoiding a twisted cusp type");
  enumerate->add_option("--avoid", o.avoid)->required();
  enumerate->add_option("--prime-bound", o.prime_bound)->required();
  enumerate->add_flag("--verify", o.verify, "Re-run the certification of every class");

  std::vector<const char*> argv{"cusp-atlas"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    Outcome outcome;
    if (invariants->parsed()) outcome = cmd_invariants(o);
    else if (equiv->parsed()) outcome = cmd_equiv(o);
    else if (proj->parsed()) outcome = cmd_proj_equiv(o);
    else if (classify->parsed()) outcome = cmd_classify(o);
    else if (witness->parsed()) outcome = cmd_witness(o);
    else if (quat_cmd->parsed()) outcome = cmd_quat(o);
    else if (c5->parsed()) outcome = cmd_classify_5d(o);
    else if (embed->parsed()) outcome = cmd_embed(o);
    else if (reconstruct->parsed()) outcome = cmd_unipotent_reconstruct(o);
    else if (binomial->parsed()) outcome = cmd_unipotent_binomial(o);
    else if (enumerate->parsed()) outcome = cmd_enumerate(o);
    out << outcome.body.dump(o.pretty ? 2 : -1) << '\n';
    return (o.fail_on_no && outcome.negative) ? kNegative : kSuccess;
  } catch (const ComputationError& e) {
    err << "cusp-atlas: computation error: " << e.what() << '\n';
    return kComputation;
  } catch (const DomainError& e) {
    err << "cusp-atlas: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "cusp-atlas: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace cusp_atlas::cli
