#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "isolambda/syntax.hpp"
#include "isolambda/type_canon.hpp"

namespace isolambda {

struct TypeErrorInfo {
  enum class Kind {
    non_functional_vars,  // one name, two inequivalent annotations
    arrow_expected,       // applied term has an atomic conjunct
    arg_mismatch,         // argument conjuncts not absorbed by every conjunct
    proj_not_available,   // projection annotation not contained in the type
  };
  Kind kind;
  Path where;
  std::string detail;

  std::string message() const;
};

struct TypingResult {
  Type type;  // canonical representative spelling
  CanonicalType canonical;
};

/// Cache of successful inferences keyed by alpha_serial of the term.
/// Only ever consulted/filled for one fixed mode; keep one per engine.
using TypingCache = std::unordered_map<std::string, CanonicalType>;

using InferOutcome = std::variant<TypingResult, TypeErrorInfo>;

/// Type of a term, unique up to isomorphism. Every subterm carries its own
/// annotations, so no environment is needed.
InferOutcome infer(const Term& t, Mode mode = Mode::modulo,
                   TypingCache* cache = nullptr);

std::optional<CanonicalType> try_infer(const Term& t, Mode mode = Mode::modulo,
                                       TypingCache* cache = nullptr);

/// True iff t is typable with a type equivalent to `a`.
bool check(const Term& t, const Type& a, Mode mode = Mode::modulo,
           TypingCache* cache = nullptr);

/// No identifier occurs with two inequivalent annotations.
bool is_functional(const std::vector<VarUse>& uses, Mode mode = Mode::modulo);

/// Rewrites every annotation to its canonical representative spelling.
/// Idempotent; all equivalence/reduction machinery works on such terms.
Term normalize_annotations(const Term& t, Mode mode = Mode::modulo);

// What a derivation must look like at the head constructor, given that the
// term is typable.
struct InvVar { CanonicalType ann; };
struct InvLam { CanonicalType dom, cod; };     // cod = body's type
struct InvApp { CanonicalType arg, result; };  // fun : arg -> result
struct InvSum { CanonicalType lhs, rhs; };
struct InvProj {
  CanonicalType ann, body;
  bool strict;  // body's type strictly larger than the annotation
};
using Inversion = std::variant<InvVar, InvLam, InvApp, InvSum, InvProj>;

std::optional<Inversion> invert(const Term& t, Mode mode = Mode::modulo,
                                TypingCache* cache = nullptr);

}  // namespace isolambda
