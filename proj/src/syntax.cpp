#include "isolambda/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <sstream>

namespace isolambda {

// ---------------------------------------------------------------- types

Type Type::atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::atom;
  n->name = std::move(name);
  return Type(std::move(n));
}

Type Type::arrow(Type domain, Type codomain) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::arrow;
  n->lhs = std::move(domain.node_);
  n->rhs = std::move(codomain.node_);
  return Type(std::move(n));
}

Type Type::conj(Type lhs, Type rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::conj;
  n->lhs = std::move(lhs.node_);
  n->rhs = std::move(rhs.node_);
  return Type(std::move(n));
}

const std::string& Type::atom_name() const {
  assert(is_atom());
  return node_->name;
}

Type Type::left() const {
  assert(!is_atom());
  return Type(node_->lhs);
}

Type Type::right() const {
  assert(!is_atom());
  return Type(node_->rhs);
}

bool Type::operator==(const Type& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::atom:
      return node_->name == other.node_->name;
    default:
      return left() == other.left() && right() == other.right();
  }
}

std::string serialize_type(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::atom:
      return t.atom_name();
    case Type::Kind::arrow:
      return "(" + serialize_type(t.left()) + ">" + serialize_type(t.right()) + ")";
    case Type::Kind::conj:
      return "[" + serialize_type(t.left()) + "&" + serialize_type(t.right()) + "]";
  }
  return {};
}

namespace {

// Precedence: conj binds tighter than arrow; arrow right-assoc, conj left-assoc.
void print_type_rec(const Type& t, std::string& out, int level) {
  switch (t.kind()) {
    case Type::Kind::atom:
      out += t.atom_name();
      return;
    case Type::Kind::arrow: {
      bool parens = level > 0;
      if (parens) out += '(';
      print_type_rec(t.left(), out, 1);
      out += " -> ";
      print_type_rec(t.right(), out, 0);
      if (parens) out += ')';
      return;
    }
    case Type::Kind::conj: {
      bool parens = level > 1;
      if (parens) out += '(';
      print_type_rec(t.left(), out, 1);
      out += " & ";
      print_type_rec(t.right(), out, 2);
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

std::string print_type(const Type& t) {
  std::string out;
  print_type_rec(t, out, 0);
  return out;
}

// ---------------------------------------------------------------- terms

Term Term::var(std::string name, Type ann) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::var;
  n->name = std::move(name);
  n->ann = std::move(ann);
  return Term(std::move(n));
}

Term Term::lam(std::string binder, Type ann, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::lam;
  n->name = std::move(binder);
  n->ann = std::move(ann);
  n->a = std::move(body.node_);
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::app;
  n->a = std::move(fun.node_);
  n->b = std::move(arg.node_);
  return Term(std::move(n));
}

Term Term::sum(Term lhs, Term rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::sum;
  n->a = std::move(lhs.node_);
  n->b = std::move(rhs.node_);
  return Term(std::move(n));
}

Term Term::proj(Type ann, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::proj;
  n->ann = std::move(ann);
  n->a = std::move(body.node_);
  return Term(std::move(n));
}

const std::string& Term::name() const {
  assert(is_var() || is_lam());
  return node_->name;
}

const Type& Term::ann() const {
  assert(node_->ann.has_value());
  return *node_->ann;
}

Term Term::child0() const {
  assert(node_->a);
  return Term(node_->a);
}

Term Term::child1() const {
  assert(node_->b);
  return Term(node_->b);
}

int Term::arity() const {
  switch (kind()) {
    case Kind::var: return 0;
    case Kind::lam:
    case Kind::proj: return 1;
    default: return 2;
  }
}

std::string print_path(const Path& p) {
  if (p.empty()) return "@";
  std::string out;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

Term subterm_at(const Term& t, const Path& p) {
  Term cur = t;
  for (int step : p) {
    assert(step == 0 || step == 1);
    cur = (step == 0) ? cur.child0() : cur.child1();
  }
  return cur;
}

Term replace_at(const Term& t, const Path& p, const Term& replacement) {
  if (p.empty()) return replacement;
  Path rest(p.begin() + 1, p.end());
  int step = p.front();
  switch (t.kind()) {
    case Term::Kind::var:
      assert(false && "path into a variable");
      return t;
    case Term::Kind::lam:
      assert(step == 0);
      return Term::lam(t.name(), t.ann(), replace_at(t.child0(), rest, replacement));
    case Term::Kind::proj:
      assert(step == 0);
      return Term::proj(t.ann(), replace_at(t.child0(), rest, replacement));
    case Term::Kind::app:
      return step == 0
                 ? Term::app(replace_at(t.child0(), rest, replacement), t.child1())
                 : Term::app(t.child0(), replace_at(t.child1(), rest, replacement));
    case Term::Kind::sum:
      return step == 0
                 ? Term::sum(replace_at(t.child0(), rest, replacement), t.child1())
                 : Term::sum(t.child0(), replace_at(t.child1(), rest, replacement));
  }
  return t;
}

// ---------------------------------------------------------------- variables

namespace {

void collect_vars(const Term& t, bool include_bound,
                  std::vector<std::string> bound,
                  std::map<std::pair<std::string, std::string>, VarUse>& acc) {
  switch (t.kind()) {
    case Term::Kind::var: {
      bool is_bound =
          std::find(bound.begin(), bound.end(), t.name()) != bound.end();
      if (include_bound || !is_bound)
        acc.emplace(std::make_pair(t.name(), serialize_type(t.ann())),
                    VarUse{t.name(), t.ann()});
      return;
    }
    case Term::Kind::lam: {
      if (include_bound)
        acc.emplace(std::make_pair(t.name(), serialize_type(t.ann())),
                    VarUse{t.name(), t.ann()});
      bound.push_back(t.name());
      collect_vars(t.child0(), include_bound, bound, acc);
      return;
    }
    case Term::Kind::proj:
      collect_vars(t.child0(), include_bound, std::move(bound), acc);
      return;
    default:
      collect_vars(t.child0(), include_bound, bound, acc);
      collect_vars(t.child1(), include_bound, std::move(bound), acc);
      return;
  }
}

std::vector<VarUse> vars_impl(const Term& t, bool include_bound) {
  std::map<std::pair<std::string, std::string>, VarUse> acc;
  collect_vars(t, include_bound, {}, acc);
  std::vector<VarUse> out;
  out.reserve(acc.size());
  for (auto& [k, v] : acc) out.push_back(v);
  return out;
}

}  // namespace

std::vector<VarUse> free_vars(const Term& t) { return vars_impl(t, false); }
std::vector<VarUse> all_vars(const Term& t) { return vars_impl(t, true); }
bool is_closed(const Term& t) { return free_vars(t).empty(); }

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

namespace {

std::set<std::string> name_set(const std::vector<VarUse>& uses) {
  std::set<std::string> out;
  for (auto& u : uses) out.insert(u.name);
  return out;
}

Term subst_rec(const Term& r, const Term& s, const std::string& x,
               const std::set<std::string>& fv_s) {
  switch (r.kind()) {
    case Term::Kind::var:
      return r.name() == x ? s : r;
    case Term::Kind::lam: {
      if (r.name() == x) return r;  // x shadowed, nothing below is free
      if (fv_s.count(r.name())) {
        // Binder would capture a free variable of s: rename it first.
        std::set<std::string> avoid = fv_s;
        for (auto& u : all_vars(r)) avoid.insert(u.name);
        avoid.insert(x);
        std::string fresh = fresh_name(r.name(), avoid);
        Term renamed_body = subst_rec(r.child0(), Term::var(fresh, r.ann()),
                                      r.name(), {});
        return Term::lam(fresh, r.ann(), subst_rec(renamed_body, s, x, fv_s));
      }
      return Term::lam(r.name(), r.ann(), subst_rec(r.child0(), s, x, fv_s));
    }
    case Term::Kind::proj:
      return Term::proj(r.ann(), subst_rec(r.child0(), s, x, fv_s));
    case Term::Kind::app:
      return Term::app(subst_rec(r.child0(), s, x, fv_s),
                       subst_rec(r.child1(), s, x, fv_s));
    case Term::Kind::sum:
      return Term::sum(subst_rec(r.child0(), s, x, fv_s),
                       subst_rec(r.child1(), s, x, fv_s));
  }
  return r;
}

}  // namespace

Term subst_term(const Term& r, const Term& s, const std::string& x) {
  return subst_rec(r, s, x, name_set(free_vars(s)));
}

Term subst_term(const Term& r, const Term& s, const std::string& x, const Type&) {
  return subst_term(r, s, x);
}

namespace {

Type subst_type_in(const Type& t, const Type& a, const Type& b) {
  if (t == b) return a;
  switch (t.kind()) {
    case Type::Kind::atom:
      return t;
    case Type::Kind::arrow:
      return Type::arrow(subst_type_in(t.left(), a, b), subst_type_in(t.right(), a, b));
    case Type::Kind::conj:
      return Type::conj(subst_type_in(t.left(), a, b), subst_type_in(t.right(), a, b));
  }
  return t;
}

}  // namespace

Term subst_type(const Term& r, const Type& a, const Type& b) {
  switch (r.kind()) {
    case Term::Kind::var:
      return Term::var(r.name(), subst_type_in(r.ann(), a, b));
    case Term::Kind::lam:
      return Term::lam(r.name(), subst_type_in(r.ann(), a, b),
                       subst_type(r.child0(), a, b));
    case Term::Kind::proj:
      return Term::proj(subst_type_in(r.ann(), a, b), subst_type(r.child0(), a, b));
    case Term::Kind::app:
      return Term::app(subst_type(r.child0(), a, b), subst_type(r.child1(), a, b));
    case Term::Kind::sum:
      return Term::sum(subst_type(r.child0(), a, b), subst_type(r.child1(), a, b));
  }
  return r;
}

// ---------------------------------------------------------------- alpha

namespace {

void alpha_rec(const Term& t, std::vector<std::string>& binders, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::var: {
      for (size_t i = binders.size(); i-- > 0;) {
        if (binders[i] == t.name()) {
          out += 'v';
          out += std::to_string(binders.size() - 1 - i);
          out += ':';
          out += serialize_type(t.ann());
          return;
        }
      }
      out += "f[";
      out += t.name();
      out += ':';
      out += serialize_type(t.ann());
      out += ']';
      return;
    }
    case Term::Kind::lam:
      out += "L[";
      out += serialize_type(t.ann());
      out += ']';
      binders.push_back(t.name());
      alpha_rec(t.child0(), binders, out);
      binders.pop_back();
      return;
    case Term::Kind::proj:
      out += "P[";
      out += serialize_type(t.ann());
      out += "](";
      alpha_rec(t.child0(), binders, out);
      out += ')';
      return;
    case Term::Kind::app:
      out += '(';
      alpha_rec(t.child0(), binders, out);
      out += ' ';
      alpha_rec(t.child1(), binders, out);
      out += ')';
      return;
    case Term::Kind::sum:
      out += '{';
      alpha_rec(t.child0(), binders, out);
      out += '+';
      alpha_rec(t.child1(), binders, out);
      out += '}';
      return;
  }
}

}  // namespace

std::string alpha_serial(const Term& t) {
  std::string out;
  std::vector<std::string> binders;
  alpha_rec(t, binders, out);
  return out;
}

bool alpha_equal(const Term& a, const Term& b) {
  return alpha_serial(a) == alpha_serial(b);
}

// ---------------------------------------------------------------- printing

namespace {

struct Binder {
  std::string name;
  Type ann;
};

// level 0 = sum position, 1 = application operand, 2 = atomic position.
// `last` tells whether the printed text extends to the end of the enclosing
// group; a bare lambda (or a bare trailing sum inside one) is only safe there.
void print_term_rec(const Term& t, std::vector<Binder>& scope, std::string& out,
                    int level, bool last) {
  switch (t.kind()) {
    case Term::Kind::var: {
      out += t.name();
      bool annotated = true;
      for (size_t i = scope.size(); i-- > 0;) {
        if (scope[i].name == t.name()) {
          annotated = !(scope[i].ann == t.ann());
          break;
        }
      }
      if (annotated) {
        out += ':';
        out += print_type(t.ann());
      }
      return;
    }
    case Term::Kind::lam: {
      bool parens = level > 0 || !last;
      if (parens) out += '(';
      out += '\\';
      out += t.name();
      out += ':';
      out += print_type(t.ann());
      out += '.';
      scope.push_back({t.name(), t.ann()});
      print_term_rec(t.child0(), scope, out, 0, true);
      scope.pop_back();
      if (parens) out += ')';
      return;
    }
    case Term::Kind::proj:
      out += "pi[";
      out += print_type(t.ann());
      out += "](";
      print_term_rec(t.child0(), scope, out, 0, true);
      out += ')';
      return;
    case Term::Kind::app: {
      bool parens = level > 1;
      if (parens) out += '(';
      print_term_rec(t.child0(), scope, out, 1, false);
      out += ' ';
      print_term_rec(t.child1(), scope, out, 2, parens ? true : last);
      if (parens) out += ')';
      return;
    }
    case Term::Kind::sum: {
      bool parens = level > 0;
      if (parens) out += '(';
      print_term_rec(t.child0(), scope, out, 0, false);
      out += " + ";
      print_term_rec(t.child1(), scope, out, 1, parens ? true : last);
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

std::string print_term(const Term& t) {
  std::string out;
  std::vector<Binder> scope;
  print_term_rec(t, scope, out, 0, true);
  return out;
}

// ---------------------------------------------------------------- parsing

ParseError::ParseError(std::string msg, int line, int col)
    : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                         std::to_string(col)),
      line(line),
      col(col) {}

namespace {

struct Token {
  enum class Kind {
    ident, lambda, colon, dot, lparen, rparen, lbracket, rbracket,
    plus, arrow, conj, pi, atoms_kw, semicolon, eof
  };
  Kind kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_trivia();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::eof;
      tok_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        bump();
      tok_.text = std::string(src_.substr(start, pos_ - start));
      if (tok_.text == "pi")
        tok_.kind = Token::Kind::pi;
      else if (tok_.text == "atoms")
        tok_.kind = Token::Kind::atoms_kw;
      else
        tok_.kind = Token::Kind::ident;
      return;
    }
    switch (c) {
      case '\\': bump(); tok_.kind = Token::Kind::lambda; return;
      case ':': bump(); tok_.kind = Token::Kind::colon; return;
      case '.': bump(); tok_.kind = Token::Kind::dot; return;
      case '(': bump(); tok_.kind = Token::Kind::lparen; return;
      case ')': bump(); tok_.kind = Token::Kind::rparen; return;
      case '[': bump(); tok_.kind = Token::Kind::lbracket; return;
      case ']': bump(); tok_.kind = Token::Kind::rbracket; return;
      case '+': bump(); tok_.kind = Token::Kind::plus; return;
      case ';': bump(); tok_.kind = Token::Kind::semicolon; return;
      case '&': bump(); tok_.kind = Token::Kind::conj; return;
      case '-':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          bump(); bump();
          tok_.kind = Token::Kind::arrow;
          return;
        }
        break;
      case '/':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\\') {
          bump(); bump();
          tok_.kind = Token::Kind::conj;
          return;
        }
        break;
      default: break;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", line_, col_);
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view src, const AtomAlphabet* alphabet)
      : lex_(src), alphabet_(alphabet) {}

  Type parse_type_only() {
    Type t = type_expr();
    expect_eof();
    return t;
  }

  Term parse_term_only() {
    Term t = term_expr();
    expect_eof();
    return t;
  }

  ProgramFile parse_file() {
    AtomAlphabet atoms;
    if (lex_.peek().kind == Token::Kind::atoms_kw) {
      lex_.take();
      while (lex_.peek().kind == Token::Kind::ident)
        atoms.push_back(lex_.take().text);
      if (atoms.empty()) fail("expected atom names after 'atoms'");
      expect(Token::Kind::semicolon, "';'");
      declared_ = atoms;
      alphabet_ = &declared_;
    }
    Term body = term_expr();
    expect_eof();
    return ProgramFile{std::move(atoms), std::move(body)};
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, lex_.peek().line, lex_.peek().col);
  }

  Token expect(Token::Kind k, const std::string& what) {
    if (lex_.peek().kind != k) fail("expected " + what);
    return lex_.take();
  }

  void expect_eof() {
    if (lex_.peek().kind != Token::Kind::eof) fail("trailing input");
  }

  // ---- types: conj binds tighter than arrow, arrow right-assoc.
  Type type_expr() {
    Type lhs = type_conj();
    if (lex_.peek().kind == Token::Kind::arrow) {
      lex_.take();
      return Type::arrow(std::move(lhs), type_expr());
    }
    return lhs;
  }

  Type type_conj() {
    Type lhs = type_atomic();
    while (lex_.peek().kind == Token::Kind::conj) {
      lex_.take();
      lhs = Type::conj(std::move(lhs), type_atomic());
    }
    return lhs;
  }

  Type type_atomic() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::ident) {
      Token id = lex_.take();
      if (alphabet_ && !alphabet_->empty() &&
          std::find(alphabet_->begin(), alphabet_->end(), id.text) == alphabet_->end())
        throw ParseError("atom '" + id.text + "' not in declared alphabet",
                         id.line, id.col);
      return Type::atom(id.text);
    }
    if (t.kind == Token::Kind::lparen) {
      lex_.take();
      Type inner = type_expr();
      expect(Token::Kind::rparen, "')'");
      return inner;
    }
    fail("expected a type");
  }

  // ---- terms
  Term term_expr() {  // sums, left-assoc
    Term lhs = term_app();
    while (lex_.peek().kind == Token::Kind::plus) {
      lex_.take();
      lhs = Term::sum(std::move(lhs), term_app());
    }
    return lhs;
  }

  Term term_app() {  // juxtaposition, left-assoc
    Term lhs = term_atomic();
    while (starts_atomic(lex_.peek().kind))
      lhs = Term::app(std::move(lhs), term_atomic());
    return lhs;
  }

  static bool starts_atomic(Token::Kind k) {
    return k == Token::Kind::ident || k == Token::Kind::lparen ||
           k == Token::Kind::pi || k == Token::Kind::lambda;
  }

  Term term_atomic() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Token::Kind::lambda: {
        lex_.take();
        Token id = expect(Token::Kind::ident, "binder name");
        expect(Token::Kind::colon, "':'");
        Type ann = type_expr();
        expect(Token::Kind::dot, "'.'");
        binders_.push_back({id.text, ann});
        Term body = term_expr();  // maximal extent
        binders_.pop_back();
        return Term::lam(id.text, ann, std::move(body));
      }
      case Token::Kind::pi: {
        lex_.take();
        expect(Token::Kind::lbracket, "'['");
        Type ann = type_expr();
        expect(Token::Kind::rbracket, "']'");
        expect(Token::Kind::lparen, "'('");
        Term body = term_expr();
        expect(Token::Kind::rparen, "')'");
        return Term::proj(ann, std::move(body));
      }
      case Token::Kind::lparen: {
        lex_.take();
        Term inner = term_expr();
        expect(Token::Kind::rparen, "')'");
        return inner;
      }
      case Token::Kind::ident: {
        Token id = lex_.take();
        if (lex_.peek().kind == Token::Kind::colon) {
          lex_.take();
          Type ann = type_expr();
          return Term::var(id.text, std::move(ann));
        }
        for (size_t i = binders_.size(); i-- > 0;)
          if (binders_[i].first == id.text)
            return Term::var(id.text, binders_[i].second);
        throw ParseError("variable '" + id.text +
                             "' is unbound and carries no annotation",
                         id.line, id.col);
      }
      default:
        fail("expected a term");
    }
  }

  Lexer lex_;
  const AtomAlphabet* alphabet_;
  AtomAlphabet declared_;
  std::vector<std::pair<std::string, Type>> binders_;
};

}  // namespace

Type parse_type(std::string_view src, const AtomAlphabet* alphabet) {
  return Parser(src, alphabet).parse_type_only();
}

Term parse_term(std::string_view src, const AtomAlphabet* alphabet) {
  return Parser(src, alphabet).parse_term_only();
}

ProgramFile parse_program(std::string_view src) {
  return Parser(src, nullptr).parse_file();
}

}  // namespace isolambda
