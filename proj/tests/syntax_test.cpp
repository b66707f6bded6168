#include "doctest.h"

#include <set>

#include "isolambda/syntax.hpp"

using namespace isolambda;

namespace {

Type A() { return Type::atom("A"); }
Type B() { return Type::atom("B"); }

}  // namespace

TEST_CASE("type parsing and precedence") {
  CHECK(parse_type("T") == Type::atom("T"));
  CHECK(parse_type("A -> B") == Type::arrow(A(), B()));
  // arrow is right-associative
  CHECK(parse_type("A -> B -> A") == Type::arrow(A(), Type::arrow(B(), A())));
  // conjunction binds tighter than arrow
  CHECK(parse_type("A & B -> A") == Type::arrow(Type::conj(A(), B()), A()));
  CHECK(parse_type("A /\\ B") == Type::conj(A(), B()));
  CHECK(parse_type("(A -> B) & A") == Type::conj(Type::arrow(A(), B()), A()));
  CHECK_THROWS_AS(parse_type("A ->"), ParseError);
  CHECK_THROWS_AS(parse_type("(A"), ParseError);
}

TEST_CASE("type printing round-trips through the parser") {
  for (const char* src :
       {"A", "A -> B", "A -> B -> A", "A & B -> A", "(A -> B) & A",
        "((A & B) -> A) & C", "A & B & C", "(A & B) & C"}) {
    Type t = parse_type(src);
    CHECK(parse_type(print_type(t)) == t);
  }
}

TEST_CASE("term parsing") {
  Term id = parse_term("\\x:A. x");
  CHECK(id.is_lam());
  CHECK(id.name() == "x");
  CHECK(id.ann() == A());
  CHECK(id.child0().is_var());
  // bound occurrences inherit the binder annotation
  CHECK(id.child0().ann() == A());

  // application binds tighter than +, lambda body extends maximally
  Term t = parse_term("\\x:A. x + y:B");
  REQUIRE(t.is_lam());
  CHECK(t.child0().is_sum());

  Term u = parse_term("(\\x:A. x) r:A s:B");
  REQUIRE(u.is_app());
  CHECK(u.child0().is_app());

  Term p = parse_term("pi[A & B](x:A + y:B)");
  REQUIRE(p.is_proj());
  CHECK(p.ann() == Type::conj(A(), B()));
  CHECK(p.child0().is_sum());

  // explicit annotation on a bound occurrence may differ from the binder
  Term w = parse_term("\\x:A. x:B");
  CHECK(w.child0().ann() == B());
}

TEST_CASE("program files carry an optional atom alphabet") {
  ProgramFile p = parse_program("atoms A B;\n-- comment\n\\x:A. x");
  CHECK(p.atoms == AtomAlphabet{"A", "B"});
  CHECK(p.term.is_lam());
  CHECK_THROWS_AS(parse_program("atoms A;\n\\x:B. x"), ParseError);
}

TEST_CASE("term printing round-trips") {
  for (const char* src :
       {"\\x:A. x", "x:A + y:B", "(\\x:A. x) y:A", "pi[A](x:A + y:A)",
        "\\x:A & B. pi[A](x)", "(x:A -> A) (y:A + z:A)",
        "(\\x:A. x) + (\\y:B. y)", "\\x:A. x:B"}) {
    Term t = parse_term(src);
    CHECK(alpha_equal(parse_term(print_term(t)), t));
  }
}

TEST_CASE("alpha equivalence ignores binder names, not annotations") {
  CHECK(alpha_equal(parse_term("\\x:A. x"), parse_term("\\y:A. y")));
  CHECK_FALSE(alpha_equal(parse_term("\\x:A. x"), parse_term("\\x:B. x")));
  // free variables compare by name
  CHECK_FALSE(alpha_equal(parse_term("x:A"), parse_term("y:A")));
  CHECK(alpha_serial(parse_term("\\x:A.\\y:B. x y")) ==
        alpha_serial(parse_term("\\u:A.\\v:B. u v")));
}

TEST_CASE("free and bound variable collection") {
  Term t = parse_term("\\x:A. x y:B");
  auto fv = free_vars(t);
  REQUIRE(fv.size() == 1);
  CHECK(fv[0].name == "y");
  CHECK(fv[0].ann == B());
  auto av = all_vars(t);
  CHECK(av.size() == 2);
  CHECK_FALSE(is_closed(t));
  CHECK(is_closed(parse_term("\\x:A. x")));
}

TEST_CASE("substitution avoids capture") {
  // (\y. x y)[y/x] must rename the binder
  Term body = parse_term("\\y:B. x:(B -> A) y");
  Term result = subst_term(body, Term::var("y", Type::arrow(B(), A())), "x");
  REQUIRE(result.is_lam());
  CHECK(result.name() != "y");
  auto fv = free_vars(result);
  REQUIRE(fv.size() == 1);
  CHECK(fv[0].name == "y");

  // straightforward replacement
  Term r = subst_term(parse_term("x:A + x:A"), parse_term("z:A"), "x");
  CHECK(alpha_equal(r, parse_term("z:A + z:A")));

  // bound occurrences are untouched
  Term s = subst_term(parse_term("\\x:A. x"), parse_term("z:A"), "x");
  CHECK(alpha_equal(s, parse_term("\\x:A. x")));
}

TEST_CASE("paths address subterms") {
  Term t = parse_term("(\\x:A. x) (y:A + z:A)");
  CHECK(alpha_equal(subterm_at(t, {0}), parse_term("\\x:A. x")));
  CHECK(alpha_equal(subterm_at(t, {1, 0}), parse_term("y:A")));
  Term u = replace_at(t, Path{1, 0}, parse_term("w:A"));
  CHECK(alpha_equal(subterm_at(u, {1, 0}), parse_term("w:A")));
  CHECK(print_path({}) == "@");
  CHECK(print_path({0, 1}) == "0.1");
}

TEST_CASE("fresh_name avoids the given set") {
  std::set<std::string> avoid{"x", "x_1"};
  std::string n = fresh_name("x", avoid);
  CHECK(avoid.count(n) == 0);
  CHECK(fresh_name("y", avoid) == "y");
}
