#include "isolambda/type_canon.hpp"

#include <algorithm>
#include <cassert>

namespace isolambda {

ConjFree make_conjfree(std::vector<ConjFree> args, std::string head) {
  ConjFree out;
  out.ser = head;
  for (size_t i = args.size(); i-- > 0;)
    out.ser = "(" + args[i].ser + ">" + out.ser + ")";
  out.args = std::move(args);
  out.head = std::move(head);
  return out;
}

bool quasi_lex_less(const ConjFree& a, const ConjFree& b) {
  if (a.ser.size() != b.ser.size()) return a.ser.size() < b.ser.size();
  return a.ser < b.ser;
}

std::string CanonicalType::ser() const {
  std::string out;
  for (size_t i = 0; i < conjuncts.size(); ++i) {
    if (i) out += '&';
    out += conjuncts[i].ser;
  }
  return out;
}

bool CanonicalType::operator==(const CanonicalType& o) const {
  if (conjuncts.size() != o.conjuncts.size()) return false;
  for (size_t i = 0; i < conjuncts.size(); ++i)
    if (conjuncts[i].ser != o.conjuncts[i].ser) return false;
  return true;
}

CanonicalType make_canonical(std::vector<ConjFree> conjuncts, Mode mode) {
  assert(!conjuncts.empty());
  if (mode == Mode::modulo)
    std::sort(conjuncts.begin(), conjuncts.end(), quasi_lex_less);
  return CanonicalType{std::move(conjuncts)};
}

namespace {

std::vector<ConjFree> canon_rec(const Type& t, bool sorted) {
  switch (t.kind()) {
    case Type::Kind::atom:
      return {make_conjfree({}, t.atom_name())};
    case Type::Kind::conj: {
      std::vector<ConjFree> out = canon_rec(t.left(), sorted);
      std::vector<ConjFree> rhs = canon_rec(t.right(), sorted);
      out.insert(out.end(), std::make_move_iterator(rhs.begin()),
                 std::make_move_iterator(rhs.end()));
      if (sorted) std::sort(out.begin(), out.end(), quasi_lex_less);
      return out;
    }
    case Type::Kind::arrow: {
      std::vector<ConjFree> dom = canon_rec(t.left(), sorted);
      std::vector<ConjFree> cod = canon_rec(t.right(), sorted);
      std::vector<ConjFree> out;
      out.reserve(cod.size());
      for (auto& r : cod) {
        std::vector<ConjFree> args = dom;
        args.insert(args.end(), std::make_move_iterator(r.args.begin()),
                    std::make_move_iterator(r.args.end()));
        if (sorted) std::sort(args.begin(), args.end(), quasi_lex_less);
        out.push_back(make_conjfree(std::move(args), std::move(r.head)));
      }
      if (sorted) std::sort(out.begin(), out.end(), quasi_lex_less);
      return out;
    }
  }
  return {};
}

}  // namespace

CanonicalType canonicalize(const Type& t) {
  return CanonicalType{canon_rec(t, false)};
}

CanonicalType order_canonical(const Type& t, Mode mode) {
  return CanonicalType{canon_rec(t, mode == Mode::modulo)};
}

bool type_equiv(const Type& a, const Type& b, Mode mode) {
  return order_canonical(a, mode) == order_canonical(b, mode);
}

std::vector<ConjFree> conjunct_multiset(const Type& t, Mode mode) {
  return order_canonical(t, mode).conjuncts;
}

Type to_type(const ConjFree& c) {
  Type out = Type::atom(c.head);
  for (size_t i = c.args.size(); i-- > 0;)
    out = Type::arrow(to_type(c.args[i]), out);
  return out;
}

Type to_type(const CanonicalType& c) {
  assert(!c.conjuncts.empty());
  Type out = to_type(c.conjuncts.back());
  for (size_t i = c.conjuncts.size() - 1; i-- > 0;)
    out = Type::conj(to_type(c.conjuncts[i]), out);
  return out;
}

Type canonical_type_of(const Type& t, Mode mode) {
  return to_type(order_canonical(t, mode));
}

bool conj_includes(const std::vector<ConjFree>& big,
                   const std::vector<ConjFree>& part, Mode mode) {
  return conj_subtract(big, part, mode).has_value();
}

std::optional<std::vector<ConjFree>> conj_subtract(
    const std::vector<ConjFree>& big, const std::vector<ConjFree>& part,
    Mode mode) {
  if (part.size() > big.size()) return std::nullopt;
  if (mode == Mode::deterministic) {
    for (size_t i = 0; i < part.size(); ++i)
      if (big[i].ser != part[i].ser) return std::nullopt;
    return std::vector<ConjFree>(big.begin() + part.size(), big.end());
  }
  // Both sides sorted: two-pointer multiset difference.
  std::vector<ConjFree> rest;
  rest.reserve(big.size() - part.size());
  size_t j = 0;
  for (size_t i = 0; i < big.size(); ++i) {
    if (j < part.size() && big[i].ser == part[j].ser) {
      ++j;
    } else if (j < part.size() && quasi_lex_less(part[j], big[i])) {
      return std::nullopt;  // part[j] missing from big
    } else {
      rest.push_back(big[i]);
    }
  }
  if (j != part.size()) return std::nullopt;
  return rest;
}

std::vector<ConjFree> conj_merge(const std::vector<ConjFree>& a,
                                 const std::vector<ConjFree>& b, Mode mode) {
  std::vector<ConjFree> out;
  out.reserve(a.size() + b.size());
  if (mode == Mode::deterministic) {
    out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
             quasi_lex_less);
  return out;
}

std::optional<CanonicalType> apply_canonical(const CanonicalType& fun,
                                             const CanonicalType& arg,
                                             Mode mode) {
  std::vector<ConjFree> out;
  out.reserve(fun.conjuncts.size());
  for (const auto& c : fun.conjuncts) {
    auto rest = conj_subtract(c.args, arg.conjuncts, mode);
    if (!rest) return std::nullopt;
    out.push_back(make_conjfree(std::move(*rest), c.head));
  }
  return make_canonical(std::move(out), mode);
}

CanonicalType arrow_canonical(const CanonicalType& dom, const CanonicalType& cod,
                              Mode mode) {
  std::vector<ConjFree> out;
  out.reserve(cod.conjuncts.size());
  for (const auto& r : cod.conjuncts)
    out.push_back(make_conjfree(conj_merge(dom.conjuncts, r.args, mode), r.head));
  return make_canonical(std::move(out), mode);
}

}  // namespace isolambda
