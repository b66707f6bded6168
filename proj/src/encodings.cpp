#include "isolambda/encodings.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "isolambda/type_canon.hpp"
#include "isolambda/typing.hpp"

namespace isolambda {

namespace {

std::string label_atom(std::size_t index) {
  return "#" + std::to_string(index);
}

void collect_atoms(const Type& t, std::vector<std::string>& out) {
  if (t.is_atom()) {
    out.push_back(t.atom_name());
    return;
  }
  collect_atoms(t.left(), out);
  collect_atoms(t.right(), out);
}

void collect_term_atoms(const Term& t, std::vector<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::var:
    case Term::Kind::lam:
    case Term::Kind::proj:
      collect_atoms(t.ann(), out);
      break;
    default:
      break;
  }
  for (int i = 0; i < t.arity(); ++i)
    collect_term_atoms(i == 0 ? t.child0() : t.child1(), out);
}

std::size_t next_label_index(std::initializer_list<const Term*> terms) {
  std::size_t next = 1;
  std::vector<std::string> atoms;
  for (const Term* t : terms) collect_term_atoms(*t, atoms);
  for (const std::string& a : atoms) {
    if (a.size() < 2 || a[0] != '#') continue;
    next = std::max(next, std::stoul(a.substr(1)) + 1);
  }
  return next;
}

std::set<std::string> term_names(const Term& t) {
  std::set<std::string> out;
  for (const auto& v : all_vars(t)) out.insert(v.name);
  return out;
}

// Bounded proof search for a conjunction-free goal; falls back to a fresh
// free variable at atoms the environment cannot reach, so it always returns.
Term inhabit_cf(const ConjFree& goal,
                std::vector<std::pair<std::string, ConjFree>>& env,
                int& fresh_counter, int depth) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->second.ser == goal.ser) return Term::var(it->first, to_type(goal));

  if (!goal.args.empty()) {
    std::size_t mark = env.size();
    Term body = [&] {
      for (const ConjFree& a : goal.args)
        env.emplace_back("w" + std::to_string(++fresh_counter), a);
      ConjFree head = make_conjfree({}, goal.head);
      return inhabit_cf(head, env, fresh_counter, depth);
    }();
    for (std::size_t i = goal.args.size(); i > 0; --i) {
      body = Term::lam(env[mark + i - 1].first, to_type(goal.args[i - 1]),
                       body);
    }
    env.resize(mark);
    return body;
  }

  if (depth > 0) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      if (it->second.head != goal.head || it->second.args.empty()) continue;
      ConjFree fn = it->second;
      Term acc = Term::var(it->first, to_type(fn));
      for (const ConjFree& a : fn.args)
        acc = Term::app(acc, inhabit_cf(a, env, fresh_counter, depth - 1));
      return acc;
    }
  }

  return Term::var("w" + std::to_string(++fresh_counter),
                   Type::atom(goal.head));
}

}  // namespace

Type LabelType::type() const {
  Type a = Type::atom(label_atom(index));
  return Type::arrow(a, a);
}

Term LabelType::witness() const {
  Type a = Type::atom(label_atom(index));
  return Term::lam("y", a, Term::var("y", a));
}

Term inhabit(const Type& a) {
  CanonicalType ct = order_canonical(a);
  int fresh_counter = 0;
  std::optional<Term> out;
  for (const ConjFree& c : ct.conjuncts) {
    std::vector<std::pair<std::string, ConjFree>> env;
    Term part = inhabit_cf(c, env, fresh_counter, 6);
    out = out ? Term::sum(*out, part) : part;
  }
  return *out;
}

Term mk_list(const std::vector<Term>& items) {
  if (items.empty()) throw EncodingError("mk_list: no items");
  std::size_t base = 1;
  for (const Term& t : items)
    base = std::max(base, next_label_index({&t}));
  std::optional<Term> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    LabelType label{base + i};
    std::string x = fresh_name("x", term_names(items[i]));
    Term slot = Term::lam(x, label.type(), items[i]);
    out = out ? Term::sum(*out, slot) : slot;
  }
  return *out;
}

Term mk_pair(const Term& r, const Term& s) { return mk_list({r, s}); }

namespace {

bool is_label_arg(const ConjFree& c, std::size_t& index_out) {
  if (c.args.size() != 1 || c.head.empty() || c.head[0] != '#') return false;
  const ConjFree& a = c.args[0];
  if (!a.args.empty() || a.head != c.head) return false;
  index_out = std::stoul(c.head.substr(1));
  return true;
}

}  // namespace

Term mk_nth(const Term& lst, std::size_t slot) {
  auto ct = try_infer(lst, Mode::modulo);
  if (!ct) throw EncodingError("mk_nth: term does not typecheck");

  // group conjuncts by their freshest (outermost) label
  std::map<std::size_t, std::vector<ConjFree>> slots;
  for (const ConjFree& c : ct->conjuncts) {
    std::size_t best = 0;
    for (const ConjFree& a : c.args) {
      std::size_t idx = 0;
      if (is_label_arg(a, idx)) best = std::max(best, idx);
    }
    if (best == 0)
      throw EncodingError("mk_nth: type has an unlabeled component");
    slots[best].push_back(c);
  }
  if (slot >= slots.size())
    throw EncodingError("mk_nth: slot " + std::to_string(slot) +
                        " out of range, term has " +
                        std::to_string(slots.size()));
  auto it = slots.begin();
  std::advance(it, slot);
  Type at = to_type(make_canonical(it->second, Mode::modulo));
  return Term::app(Term::proj(at, lst), LabelType{it->first}.witness());
}

Term mk_fst(const Term& p) { return mk_nth(p, 0); }
Term mk_snd(const Term& p) { return mk_nth(p, 1); }

Term canon(const Term& t, const Type& a) {
  std::string z = fresh_name("z", term_names(t));
  return Term::lam(z, a, t);
}

Term cocanon(const Term& t, const Type& arrow) {
  if (!arrow.is_arrow()) throw EncodingError("cocanon: type is not an arrow");
  return Term::app(t, inhabit(arrow.left()));
}

Term mk_bool(bool v, const Type& a, const Type& b) {
  Type trigger = Type::arrow(Type::arrow(a, a), b);  // (A=>A)=>B
  if (v)
    return Term::lam("x", b, Term::lam("y", trigger, Term::var("x", b)));
  return Term::lam(
      "x", trigger,
      Term::lam("y", b, cocanon(Term::var("x", trigger), trigger)));
}

Term mk_ite(const Term& c, const Term& r, const Term& s) {
  auto ctype = try_infer(c, Mode::modulo);
  auto rtype = try_infer(r, Mode::modulo);
  if (!ctype || !rtype)
    throw EncodingError("mk_ite: condition or branch does not typecheck");
  auto taken = apply_canonical(*ctype, *rtype, Mode::modulo);
  if (!taken)
    throw EncodingError("mk_ite: condition cannot consume the then branch");

  // c r : <(D=>B)=>B> with B the branch type; find D so the else branch
  // fits wrapped as \z^D. s, then discharge it.
  for (const ConjFree& x : taken->conjuncts) {
    for (const ConjFree& b : rtype->conjuncts) {
      if (x.head != b.head) continue;
      auto rest = conj_subtract(x.args, b.args, Mode::modulo);
      if (!rest || rest->empty()) continue;
      CanonicalType arg_ct = make_canonical(*rest, Mode::modulo);
      if (apply_canonical(*taken, arg_ct, Mode::modulo) != *rtype) continue;
      for (const ConjFree& a : arg_ct.conjuncts) {
        for (const ConjFree& b2 : rtype->conjuncts) {
          if (a.head != b2.head) continue;
          auto dms = conj_subtract(a.args, b2.args, Mode::modulo);
          if (!dms || dms->empty()) continue;
          CanonicalType d = make_canonical(*dms, Mode::modulo);
          if (arrow_canonical(d, *rtype, Mode::modulo) != arg_ct) continue;
          std::string z = fresh_name("z", term_names(s));
          return Term::app(Term::app(c, r), Term::lam(z, to_type(d), s));
        }
      }
    }
  }
  throw EncodingError("mk_ite: condition type does not match if-then-else");
}

}  // namespace isolambda
