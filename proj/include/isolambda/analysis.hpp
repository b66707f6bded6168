#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "isolambda/reduction.hpp"
#include "isolambda/syntax.hpp"
#include "isolambda/term_equiv.hpp"

namespace isolambda {

struct GenConfig {
  int max_depth = 5;
  std::vector<std::string> atom_alphabet{"T1", "T2", "T3"};
  std::uint64_t seed = 0;
  double sum_bias = 1.0;
  double app_bias = 1.0;
  double lam_bias = 2.0;
  double proj_bias = 1.0;
};

/// Random closed typable term. Generation is type-directed: a target type is
/// drawn, then a derivation is built backwards, retrying on dead ends, so
/// every output typechecks by construction. Deterministic per cfg.seed.
Term gen_typed_term(const GenConfig& cfg);

/// Same, but of a type whose canonical form has at least two conjuncts.
Term gen_conjunctive_term(const GenConfig& cfg);

struct SnReport {
  bool terminated = false;
  std::uint64_t ns = 0;       // longest reduction without revisiting a class
  std::size_t nf_count = 0;
};

SnReport check_sn(const Term& t, Engine& eng);
SnReport check_sn(const Term& t, std::uint64_t fuel);

/// Decomposition of a closed normal form into lambdas plus applications
/// stuck because the argument's type, although absorbed somewhere in the
/// function's uncurried domain, is not the binder annotation itself.
struct CsnShape {
  std::vector<std::pair<Type, Term>> lambda_group;        // binder type, body
  std::vector<std::tuple<Type, Term, Term>> stuck_group;  // binder, body, arg
};

/// Searches t's class for a member matching the shape; t must be a closed
/// normal form.
std::optional<CsnShape> check_csn(const Term& t, Engine& eng);

/// For closed t whose type strictly contains a's conjuncts: true iff every
/// maximal reduction of pi_a(t) takes at least one discarding projection
/// (pi_n) step.
bool check_redpi(const Term& t, const Type& a, Engine& eng);

struct PropFailure {
  std::string description;
  std::optional<Term> counterexample;  // shrunk when shrinking applies
};

struct PropReport {
  std::string name;
  std::size_t trials = 0;
  std::vector<PropFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// name is one of: subject_reduction, m_invariance, p_invariance,
/// class_finiteness, sn, csn, redpi, substitution_lemma, unicity.
PropReport run_property_suite(const std::string& name, std::size_t trials,
                              std::uint64_t seed);

const std::vector<std::string>& property_suite_names();

}  // namespace isolambda
