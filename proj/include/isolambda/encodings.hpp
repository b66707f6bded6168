#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "isolambda/syntax.hpp"

namespace isolambda {

/// Violations of the structural preconditions of the encoded combinators
/// (non-pair argument to mk_fst, non-arrow cocanon, and so on).
struct EncodingError : std::runtime_error {
  explicit EncodingError(const std::string& what) : std::runtime_error(what) {}
};

/// Slot markers for the pair/list encoding. Index i is rendered as the arrow
/// #i => #i over a reserved atom the term parser cannot produce, so label
/// types never collide with user types and always have the closed witness
/// lambda y^{#i}. y.
struct LabelType {
  std::size_t index = 1;
  Type type() const;
  Term witness() const;
};

/// lambda x^{L1}. r + lambda x^{L2}. s with labels fresh for r and s. The
/// non-deterministic projection becomes deterministic: each slot is the only
/// summand whose type mentions its label.
Term mk_pair(const Term& r, const Term& s);

/// The n-ary variant of mk_pair (associativity makes pairs into lists).
Term mk_list(const std::vector<Term>& items);

/// Projection of a labeled slot: pi at the slot's type applied to the label
/// witness. Slots are counted in label order. The outermost labels of a
/// nested encoding are the freshest, i.e. the highest indices.
Term mk_nth(const Term& lst, std::size_t slot);
Term mk_fst(const Term& p);
Term mk_snd(const Term& p);

/// The canon [t]^A: lambda z^A. t with z fresh for t.
Term canon(const Term& t, const Type& a);

/// The cocanon {t}^{A=>B} for t of arrow type: t applied to a dummy of the
/// domain type. The dummy is a closed inhabitant when one is constructible,
/// otherwise it lambdas down to fresh free variables at the atoms.
Term cocanon(const Term& t, const Type& arrow);

/// Inhabitant of a: closed whenever the type lets us, with fresh free
/// variables at unreachable atoms otherwise.
Term inhabit(const Type& a);

/// TT = lambda x^B. lambda y^{(A=>A)=>B}. x
/// FF = lambda x^{(A=>A)=>B}. lambda y^B. {x}^{A=>A}
/// The two inhabitants of ((A=>A)=>B) => B => B up to equivalence.
Term mk_bool(bool v, const Type& a, const Type& b);

/// If c then r else s := c r [s]^{A=>A}; the canon type is recovered from
/// the types of c and r.
Term mk_ite(const Term& c, const Term& r, const Term& s);

}  // namespace isolambda
