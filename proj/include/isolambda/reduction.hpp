#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isolambda/syntax.hpp"
#include "isolambda/term_equiv.hpp"

namespace isolambda {

/// Proper reduction rules (as opposed to the symmetric equivalences):
///  beta   (lambda x:A. t) s  ~>  t[s/x]          when s : A on the nose
///  pi_n   pi_A(s1 + ... + sn)  ~>  s1 + ... + sk when that prefix : A
///  pi_1   pi_A(t)  ~>  t                         when t : A
///  delta  t  ~>  pi_B(t) + pi_C(t)               when t : B /\ C, t is not
///         a sum modulo equivalence, and no equivalent context places the
///         redex directly under a projection
enum class RedRule { beta, pi_n, pi_1, delta };

const char* rule_name(RedRule r);

struct RedStep {
  RedRule rule;
  Path pos;
  Term result;  // whole term after the step
};

/// All rule applications on t itself, without consulting the equivalence
/// class. t must be annotation-canonical and typable.
std::vector<RedStep> direct_steps(const Term& t, Engine& eng);

/// One reduction step of the class of t: a successor per distinct target
/// class, each reported through its representative plus a witness telling
/// which member fired and how.
struct Successor {
  Term rep;                    // representative of the target class
  Term via_member;             // the member of t's class the rule fired on
  RedStep step;                // witness step (step.result lands in rep's class)
  std::vector<RedRule> rules;  // every rule observed reaching this class
};

std::vector<Successor> red_modulo_detailed(const Term& t, Engine& eng);
std::vector<Term> red_modulo(const Term& t, Engine& eng);

bool is_normal_modulo(const Term& t, Engine& eng);

/// Every normal form reachable from t, as class representatives in
/// serialization order. Cycles in the reduction graph are fine; running
/// past Options::fuel explored classes is not (FuelExhausted).
std::vector<Term> normal_forms(const Term& t, Engine& eng);

/// Length of the longest reduction out of t that never revisits a class.
std::uint64_t max_steps(const Term& t, Engine& eng);

struct ReductionHop {
  Term via_member;
  RedStep step;
  Term to_rep;
};

struct RandomRun {
  Term result;  // final class representative
  bool fuel_exhausted = false;
  std::vector<ReductionHop> trace;
};

/// Seeded uniform random walk over the class graph, capped at
/// Options::fuel steps.
RandomRun normalize_random(const Term& t, Engine& eng, std::uint64_t seed);

}  // namespace isolambda
