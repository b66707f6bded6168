#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isolambda/syntax.hpp"

namespace isolambda {

/// Default mode identifies types up to the four isomorphisms (commutativity
/// and associativity of &, distribution of -> over &, currying).
/// Deterministic mode drops the commutativity identification: conjunct order
/// is preserved everywhere and no sorting happens.
enum class Mode { modulo, deterministic };

/// A conjunction-free type in spine form: args[0] -> args[1] -> ... -> head.
/// `ser` is the serialization used for ordering and equality; it is computed
/// once at construction.
struct ConjFree {
  std::vector<ConjFree> args;
  std::string head;
  std::string ser;

  bool operator==(const ConjFree& o) const { return ser == o.ser; }
  bool operator!=(const ConjFree& o) const { return ser != o.ser; }
};

ConjFree make_conjfree(std::vector<ConjFree> args, std::string head);

/// Quasi-lexicographic order: shorter serialization first, then byte-wise.
bool quasi_lex_less(const ConjFree& a, const ConjFree& b);

/// A flattened type: a non-empty conjunction of conjunction-free types.
/// Multiplicity matters; the list is sorted in modulo mode.
struct CanonicalType {
  std::vector<ConjFree> conjuncts;

  std::string ser() const;
  bool operator==(const CanonicalType& o) const;
  bool operator!=(const CanonicalType& o) const { return !(*this == o); }
};

/// Decomposition into conjunction-free conjuncts, preserving source order.
CanonicalType canonicalize(const Type& t);
/// Same, with every conjunct list and every argument spine sorted
/// quasi-lexicographically (modulo mode); equal results characterise
/// isomorphic types. Deterministic mode keeps source order.
CanonicalType order_canonical(const Type& t, Mode mode = Mode::modulo);

bool type_equiv(const Type& a, const Type& b, Mode mode = Mode::modulo);

std::vector<ConjFree> conjunct_multiset(const Type& t, Mode mode = Mode::modulo);

/// Rebuild a Type: conjuncts joined right-associatively with &,
/// spines joined right-associatively with ->.
Type to_type(const ConjFree& c);
Type to_type(const CanonicalType& c);

/// to_type(order_canonical(t)) - the representative spelling used for stored
/// annotations.
Type canonical_type_of(const Type& t, Mode mode = Mode::modulo);

CanonicalType make_canonical(std::vector<ConjFree> conjuncts, Mode mode);

// Multiset operations on conjunct lists. In modulo mode inputs are expected
// sorted and treated as multisets; in deterministic mode `part` must be a
// literal prefix and merging is concatenation.
bool conj_includes(const std::vector<ConjFree>& big,
                   const std::vector<ConjFree>& part, Mode mode);
std::optional<std::vector<ConjFree>> conj_subtract(
    const std::vector<ConjFree>& big, const std::vector<ConjFree>& part, Mode mode);
std::vector<ConjFree> conj_merge(const std::vector<ConjFree>& a,
                                 const std::vector<ConjFree>& b, Mode mode);

/// Result type of applying a function of type `fun` to an argument of type
/// `arg`: every conjunct of `fun` must absorb arg's conjunct multiset into
/// its argument spine. nullopt when some conjunct cannot.
std::optional<CanonicalType> apply_canonical(const CanonicalType& fun,
                                             const CanonicalType& arg, Mode mode);

/// Canonical form of dom -> cod given canonical forms of the pieces.
CanonicalType arrow_canonical(const CanonicalType& dom, const CanonicalType& cod,
                              Mode mode);

}  // namespace isolambda
