#include "doctest.h"

#include "isolambda/syntax.hpp"
#include "isolambda/type_canon.hpp"
#include "isolambda/typing.hpp"

using namespace isolambda;

namespace {

Type T(const char* src) { return parse_type(src); }

std::optional<CanonicalType> ty(const char* src, Mode mode = Mode::modulo) {
  return try_infer(parse_term(src), mode);
}

TypeErrorInfo::Kind err_kind(const char* src) {
  InferOutcome out = infer(parse_term(src));
  REQUIRE(std::holds_alternative<TypeErrorInfo>(out));
  return std::get<TypeErrorInfo>(out).kind;
}

}  // namespace

TEST_CASE("axioms and abstractions") {
  CHECK(check(parse_term("x:A"), T("A")));
  CHECK(check(parse_term("\\x:A. x"), T("A -> A")));
  CHECK(check(parse_term("\\x:A & B. x"), T("A & B -> A & B")));
  // the same term seen through currying
  CHECK(check(parse_term("\\x:A & B. x"), T("A -> B -> (A & B)")));
  CHECK(check(parse_term("\\x:A & B. x"), T("(B -> A) & (B -> B) -> zzz")) ==
        false);
}

TEST_CASE("application consumes the argument's conjuncts exactly") {
  CHECK(ty("(\\x:A. x) y:A") == order_canonical(T("A")));
  // a pair-typed argument is consumed whole
  CHECK(ty("(\\x:A & B. x) (y:A + z:B)") == order_canonical(T("A & B")));
  // partial application via currying: one atom of the pair
  CHECK(ty("(\\x:A & B. x) y:A") == order_canonical(T("B -> (A & B)")));
  // argument type not absorbable
  CHECK_FALSE(ty("(\\x:A. x) y:B").has_value());
  CHECK(err_kind("(\\x:A. x) y:B") == TypeErrorInfo::Kind::arg_mismatch);
  // atoms are not functions
  CHECK(err_kind("x:A y:A") == TypeErrorInfo::Kind::arrow_expected);
}

TEST_CASE("sums build conjunctions") {
  CHECK(ty("x:A + y:B") == order_canonical(T("A & B")));
  CHECK(check(parse_term("x:A + y:B"), T("B & A")));
  CHECK(ty("x:A + x:A") == order_canonical(T("A & A")));
  CHECK_FALSE(ty("x:A + x:B").has_value());  // one name, two types
}

TEST_CASE("projections need a conjunct sub-multiset") {
  CHECK(ty("pi[A](x:A + y:A)") == order_canonical(T("A")));
  CHECK(ty("pi[A](x:A)") == order_canonical(T("A")));  // full-type projection
  CHECK(ty("pi[A & A](x:A + y:A + z:A)") == order_canonical(T("A & A")));
  CHECK_FALSE(ty("pi[A & A](x:A + y:B)").has_value());  // multiplicity
  CHECK(err_kind("pi[B](x:A)") == TypeErrorInfo::Kind::proj_not_available);
}

TEST_CASE("bundled example judgments") {
  CHECK(ty("pi[B -> A]((\\x:A & B. x) s:A) t:B") == order_canonical(T("A")));
  CHECK(ty("\\x:A. \\y:B. (x + y)") ==
        order_canonical(T("A -> B -> (A & B)")));
  CHECK(ty("(\\x:A. \\y:B. x) + (\\x:A. \\y:B. y) + (\\x:A. \\y:B. (x + y))") ==
        order_canonical(
            T("((A -> B -> A) & (A -> B -> B)) & ((A -> B -> A) & (A -> B -> B))")));
}

TEST_CASE("variables must be used at one type per scope") {
  CHECK(err_kind("\\x:A. x:B") == TypeErrorInfo::Kind::non_functional_vars);
  CHECK_FALSE(ty("x:A + x:B").has_value());
  // distinct binders for the same name are independent
  CHECK(ty("(\\x:A. x) + (\\x:B. x)") ==
        order_canonical(T("(A -> A) & (B -> B)")));
  // equivalent spellings of one annotation are fine
  CHECK(ty("x:(A & B -> A) + x:(A -> B -> A)").has_value());
  // a free and a bound use of the same name do not clash
  CHECK(ty("(\\x:A. x) x:B").has_value() == false);  // B not absorbable by A
  CHECK(ty("(\\x:A. x) x:A").has_value());
}

TEST_CASE("deterministic mode drops commutativity from typing") {
  CHECK(check(parse_term("x:A + y:B"), T("B & A"), Mode::modulo));
  CHECK_FALSE(check(parse_term("x:A + y:B"), T("B & A"), Mode::deterministic));
  // application still curries, but consumes a literal prefix
  CHECK(ty("(\\x:A & B. x) y:A", Mode::deterministic).has_value());
  CHECK_FALSE(ty("(\\x:A & B. x) y:B", Mode::deterministic).has_value());
}

TEST_CASE("annotation normalization respells every annotation canonically") {
  Term t = parse_term("\\x:(A & B) -> A & B. x");
  Term n = normalize_annotations(t);
  REQUIRE(n.is_lam());
  CHECK(n.ann() == canonical_type_of(T("(A & B) -> A & B")));
  CHECK(try_infer(n) == try_infer(t));
  // idempotent
  CHECK(alpha_equal(normalize_annotations(n), n));
}

TEST_CASE("inversion reports the head-constructor derivation shape") {
  auto inv = invert(parse_term("\\x:A. x"));
  REQUIRE(inv.has_value());
  auto* lam = std::get_if<InvLam>(&*inv);
  REQUIRE(lam != nullptr);
  CHECK(lam->dom == order_canonical(T("A")));
  CHECK(lam->cod == order_canonical(T("A")));

  auto sum = invert(parse_term("x:A + y:B"));
  auto* s = std::get_if<InvSum>(&*sum);
  REQUIRE(s != nullptr);
  CHECK(s->lhs == order_canonical(T("A")));
  CHECK(s->rhs == order_canonical(T("B")));

  auto prj = invert(parse_term("pi[A](x:A + y:A)"));
  auto* p = std::get_if<InvProj>(&*prj);
  REQUIRE(p != nullptr);
  CHECK(p->ann == order_canonical(T("A")));
  CHECK(p->strict);

  auto whole = invert(parse_term("pi[A](x:A)"));
  auto* w = std::get_if<InvProj>(&*whole);
  REQUIRE(w != nullptr);
  CHECK_FALSE(w->strict);

  CHECK_FALSE(invert(parse_term("x:A y:A")).has_value());
}
