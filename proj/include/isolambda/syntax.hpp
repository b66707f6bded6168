#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isolambda {

/// Immutable type AST: atoms, arrows, conjunctions.
/// Structural equality only; isomorphism-aware comparison lives in type_canon.
class Type {
 public:
  enum class Kind { atom, arrow, conj };

  static Type atom(std::string name);
  static Type arrow(Type domain, Type codomain);
  static Type conj(Type lhs, Type rhs);

  Kind kind() const { return node_->kind; }
  bool is_atom() const { return kind() == Kind::atom; }
  bool is_arrow() const { return kind() == Kind::arrow; }
  bool is_conj() const { return kind() == Kind::conj; }

  const std::string& atom_name() const;
  /// Arrow domain or conjunction left component.
  Type left() const;
  /// Arrow codomain or conjunction right component.
  Type right() const;

  bool operator==(const Type& other) const;
  bool operator!=(const Type& other) const { return !(*this == other); }

 private:
  struct Node {
    Kind kind;
    std::string name;                        // atom
    std::shared_ptr<const Node> lhs, rhs;    // arrow / conj
  };
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Compact unambiguous encoding, usable as a map key.
std::string serialize_type(const Type& t);
/// Concrete syntax: '->' right-associative, '&' tighter, parenthesised as needed.
std::string print_type(const Type& t);

/// Immutable term AST. Every variable occurrence carries its annotation.
class Term {
 public:
  enum class Kind { var, lam, app, sum, proj };

  static Term var(std::string name, Type ann);
  static Term lam(std::string binder, Type ann, Term body);
  static Term app(Term fun, Term arg);
  static Term sum(Term lhs, Term rhs);
  static Term proj(Type ann, Term body);

  Kind kind() const { return node_->kind; }
  bool is_var() const { return kind() == Kind::var; }
  bool is_lam() const { return kind() == Kind::lam; }
  bool is_app() const { return kind() == Kind::app; }
  bool is_sum() const { return kind() == Kind::sum; }
  bool is_proj() const { return kind() == Kind::proj; }

  /// Var name or Lam binder.
  const std::string& name() const;
  /// Var / Lam binder / Proj annotation.
  const Type& ann() const;
  /// Lam body, App function, Sum left, Proj body.
  Term child0() const;
  /// App argument, Sum right.
  Term child1() const;

  int arity() const;  // number of term children (1 or 2, 0 for var)

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::optional<Type> ann;
    std::shared_ptr<const Node> a, b;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Path from the root to a subterm: child indices per node
/// (Lam/Proj body = 0, App fun = 0 arg = 1, Sum left = 0 right = 1).
using Path = std::vector<int>;

std::string print_path(const Path& p);

Term subterm_at(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, const Term& replacement);

/// A term with exactly one hole, as a (term, hole position) pair.
struct Context {
  Term scaffold;  // hole occupied by a placeholder subterm
  Path hole;
  Term plug(const Term& filler) const { return replace_at(scaffold, hole, filler); }
};

struct VarUse {
  std::string name;
  Type ann;
};

/// Free variables with their annotations, deduplicated.
std::vector<VarUse> free_vars(const Term& t);
/// Free and bound variables with their annotations, deduplicated.
std::vector<VarUse> all_vars(const Term& t);
bool is_closed(const Term& t);

/// Capture-avoiding substitution of s for the free occurrences of x in r.
Term subst_term(const Term& r, const Term& s, const std::string& x);
Term subst_term(const Term& r, const Term& s, const std::string& x, const Type& ann);

/// Syntactic substitution of type b by a in every annotation of r.
Term subst_type(const Term& r, const Type& a, const Type& b);

/// Canonical de Bruijn-style encoding; equal strings iff alpha-equivalent terms.
std::string alpha_serial(const Term& t);
bool alpha_equal(const Term& a, const Term& b);

std::string print_term(const Term& t);

/// A name not in `avoid`, derived from `base` (base, base_1, base_2, ...).
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int col);
  int line, col;
};

/// Declared atom alphabet; empty set means "any identifier".
using AtomAlphabet = std::vector<std::string>;

Type parse_type(std::string_view src, const AtomAlphabet* alphabet = nullptr);
Term parse_term(std::string_view src, const AtomAlphabet* alphabet = nullptr);

/// One term per file, optional `atoms A B C;` header, `--` line comments.
struct ProgramFile {
  AtomAlphabet atoms;
  Term term;
};
ProgramFile parse_program(std::string_view src);

}  // namespace isolambda
