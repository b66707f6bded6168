#include "doctest.h"

#include <algorithm>

#include "isolambda/measures.hpp"
#include "isolambda/syntax.hpp"
#include "isolambda/term_equiv.hpp"
#include "isolambda/typing.hpp"

using namespace isolambda;

namespace {

Term P(const char* src) { return parse_term(src); }

bool has_successor(const Term& t, EquivRule rule, const char* expect,
                   Engine& eng) {
  Term want = normalize_annotations(P(expect), eng.mode());
  for (const EquivStep& s : equiv_steps(normalize_annotations(t, eng.mode()),
                                        eng)) {
    if (s.rule == rule && alpha_equal(s.result, want)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("single equivalence steps") {
  Engine eng;
  CHECK(has_successor(P("x:A + y:B"), EquivRule::comm, "y:B + x:A", eng));
  CHECK(has_successor(P("(x:A + y:B) + z:C"), EquivRule::asso,
                      "x:A + (y:B + z:C)", eng));
  CHECK(has_successor(P("\\x:A. x + x"), EquivRule::dist_ii,
                      "(\\x:A. x) + (\\x:A. x)", eng));
  CHECK(has_successor(P("(\\x:A. x) + (\\x:A. x)"), EquivRule::dist_ii,
                      "\\x:A. x + x", eng));
  CHECK(has_successor(P("(x:(A -> B) + y:(A -> B)) z:A"), EquivRule::dist_ie,
                      "x:(A -> B) z:A + y:(A -> B) z:A", eng));
  CHECK(has_successor(P("pi[A -> B](\\x:A. y:B + z:B)"), EquivRule::dist_ei,
                      "\\x:A. pi[B](y:B + z:B)", eng));
  CHECK(has_successor(P("r:(A -> B -> C) s:A t:B"), EquivRule::curry,
                      "r:(A -> B -> C) (s:A + t:B)", eng));
  CHECK(has_successor(P("r:(A -> B -> C) (s:A + t:B)"), EquivRule::curry,
                      "r:(A -> B -> C) s:A t:B", eng));
}

TEST_CASE("projection distribution over applications") {
  Engine eng;
  // pi[B -> A]( r ) s  ==  pi[A]( r s )  when r returns a strictly
  // larger product
  Term lhs = P("pi[B -> A]((\\x:A & B. x) s:A) t:B");
  Term rhs = P("pi[A]((\\x:A & B. x) s:A t:B)");
  CHECK(equiv_star(lhs, rhs, eng));

  // no step when nothing would be discarded: the projected type already
  // covers the whole result
  Term whole = normalize_annotations(
      P("pi[(B -> A) & (B -> B)](y:(B -> A) & (B -> B)) t:B"));
  for (const EquivStep& s : equiv_steps(whole, eng))
    CHECK(s.rule != EquivRule::dist_ee);
}

TEST_CASE("split distributes a projection over a sum") {
  Engine eng;
  Term lhs = P("pi[((A & B) -> A) & C]((\\x:A & B. x) + r:C)");
  Term rhs = P("pi[(A & B) -> A](\\x:A & B. x) + pi[C](r:C)");
  CHECK(equiv_star(lhs, rhs, eng));

  Term four = P("pi[A & C](x:(A & B) + y:(C & D))");
  Term split = P("pi[A](x:(A & B)) + pi[C](y:(C & D))");
  CHECK(equiv_star(four, split, eng));
}

TEST_CASE("class enumeration is finite and measure-invariant") {
  Engine eng;
  EquivClass singleton = enumerate_class(P("x:A"), eng);
  CHECK(singleton.members.size() == 1);

  EquivClass pair = enumerate_class(P("x:A + y:B"), eng);
  CHECK(pair.members.size() == 2);
  CHECK(pair.contains(normalize_annotations(P("y:B + x:A"))));

  EquivClass dist = enumerate_class(P("\\x:A. x + x"), eng);
  CHECK(dist.contains(normalize_annotations(P("(\\x:A. x) + (\\x:A. x)"))));
  std::uint64_t m = measure_M(dist.representative);
  std::uint64_t p = potential_P(dist.representative);
  for (const Term& member : dist.members) {
    CHECK(measure_M(member) == m);
    CHECK(potential_P(member) == p);
  }
}

TEST_CASE("paths to members replay from the start term") {
  Engine eng;
  Term start = normalize_annotations(P("(x:A + y:B) + z:C"));
  EquivClass cls = enumerate_class(start, eng);
  Term target = normalize_annotations(P("x:A + (y:B + z:C)"));
  REQUIRE(cls.contains(target));
  Term cur = start;
  for (const EquivStep& s : cls.path_to(target)) cur = s.result;
  CHECK(alpha_equal(cur, target));
}

TEST_CASE("equiv_star distinguishes unrelated terms") {
  Engine eng;
  CHECK(equiv_star(P("(x:A + y:B) + z:C"), P("x:A + (y:B + z:C)"), eng));
  CHECK_FALSE(equiv_star(P("x:A"), P("y:A"), eng));
  CHECK_FALSE(equiv_star(P("x:A + y:B"), P("x:A"), eng));
}

TEST_CASE("is_sum_modulo sees through distribution") {
  Engine eng;
  CHECK_FALSE(is_sum_modulo(P("x:(A & B)"), eng).has_value());
  CHECK(is_sum_modulo(P("\\x:A. x + x"), eng).has_value());
  auto parts = is_sum_modulo(P("x:A + y:B"), eng);
  REQUIRE(parts.has_value());
  CHECK(alpha_equal(parts->first, normalize_annotations(P("x:A"))));
}

TEST_CASE("deterministic mode drops comm and asso") {
  Options opt;
  opt.mode = Mode::deterministic;
  Engine eng(opt);
  EquivClass pair = enumerate_class(P("x:A + y:B"), eng);
  CHECK(pair.members.size() == 1);
  CHECK_FALSE(equiv_star(P("x:A + y:B"), P("y:B + x:A"), eng));
  // distribution rules survive
  CHECK(has_successor(P("\\x:A. x + x"), EquivRule::dist_ii,
                      "(\\x:A. x) + (\\x:A. x)", eng));
}

TEST_CASE("the two booleans and the pair-former share one class") {
  Engine eng;
  Term both = P("\\x:A. \\y:B. (x + y)");
  Term sum = P("(\\x:A. \\y:B. x) + (\\x:A. \\y:B. y)");
  CHECK(equiv_star(both, sum, eng));
}
