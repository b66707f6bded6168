#include "isolambda/typing.hpp"

#include <cassert>
#include <map>

namespace isolambda {

std::string TypeErrorInfo::message() const {
  std::string head;
  switch (kind) {
    case Kind::non_functional_vars: head = "variable annotations disagree"; break;
    case Kind::arrow_expected: head = "term of non-arrow type applied"; break;
    case Kind::arg_mismatch: head = "argument type not absorbed"; break;
    case Kind::proj_not_available: head = "projection not contained in type"; break;
  }
  std::string out = head;
  if (!detail.empty()) out += ": " + detail;
  out += " (" + print_path(where) + ")";
  return out;
}

bool is_functional(const std::vector<VarUse>& uses, Mode mode) {
  std::map<std::string, std::string> seen;
  for (const auto& u : uses) {
    std::string key = order_canonical(u.ann, mode).ser();
    auto [it, inserted] = seen.emplace(u.name, key);
    if (!inserted && it->second != key) return false;
  }
  return true;
}

namespace {

// The functional-variables precondition, read up to alpha: a bound occurrence
// must carry its binder's annotation, and all free occurrences of one name
// must agree. Clashes between independent binders are renamable, so they are
// no obstacle; this keeps typability stable under alpha-conversion, which the
// serialization-keyed cache relies on.
std::optional<std::string> functional_conflict(const Term& t, Mode mode) {
  std::map<std::string, std::string> free_seen;
  std::vector<std::pair<std::string, std::string>> bound;  // name, canonical

  std::optional<std::string> offender;
  auto walk = [&](auto&& self, const Term& u) -> void {
    if (offender) return;
    switch (u.kind()) {
      case Term::Kind::var: {
        std::string key = order_canonical(u.ann(), mode).ser();
        for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
          if (it->first == u.name()) {
            if (it->second != key) offender = u.name();
            return;
          }
        }
        auto [it, inserted] = free_seen.emplace(u.name(), key);
        if (!inserted && it->second != key) offender = u.name();
        return;
      }
      case Term::Kind::lam:
        bound.emplace_back(u.name(), order_canonical(u.ann(), mode).ser());
        self(self, u.child0());
        bound.pop_back();
        return;
      default:
        for (int i = 0; i < u.arity(); ++i)
          self(self, i == 0 ? u.child0() : u.child1());
        return;
    }
  };
  walk(walk, t);
  return offender;
}

struct Infer {
  Mode mode;
  TypingCache* cache;
  std::optional<TypeErrorInfo> error;

  std::optional<CanonicalType> rec(const Term& t, Path& path) {
    std::string key;
    if (cache) {
      key = alpha_serial(t);
      auto it = cache->find(key);
      if (it != cache->end()) return it->second;
    }
    auto result = rec_uncached(t, path);
    if (cache && result) cache->emplace(std::move(key), *result);
    return result;
  }

  std::optional<CanonicalType> rec_uncached(const Term& t, Path& path) {
    switch (t.kind()) {
      case Term::Kind::var:
        return order_canonical(t.ann(), mode);
      case Term::Kind::lam: {
        path.push_back(0);
        auto body = rec(t.child0(), path);
        path.pop_back();
        if (!body) return std::nullopt;
        return arrow_canonical(order_canonical(t.ann(), mode), *body, mode);
      }
      case Term::Kind::app: {
        path.push_back(0);
        auto fun = rec(t.child0(), path);
        path.pop_back();
        if (!fun) return std::nullopt;
        path.push_back(1);
        auto arg = rec(t.child1(), path);
        path.pop_back();
        if (!arg) return std::nullopt;
        auto result = apply_canonical(*fun, *arg, mode);
        if (!result) {
          bool atomic_conjunct = false;
          for (const auto& c : fun->conjuncts)
            if (c.args.empty()) atomic_conjunct = true;
          error = TypeErrorInfo{atomic_conjunct
                                    ? TypeErrorInfo::Kind::arrow_expected
                                    : TypeErrorInfo::Kind::arg_mismatch,
                                path,
                                to_string_types(*fun, *arg)};
          return std::nullopt;
        }
        return result;
      }
      case Term::Kind::sum: {
        path.push_back(0);
        auto lhs = rec(t.child0(), path);
        path.pop_back();
        if (!lhs) return std::nullopt;
        path.push_back(1);
        auto rhs = rec(t.child1(), path);
        path.pop_back();
        if (!rhs) return std::nullopt;
        return make_canonical(conj_merge(lhs->conjuncts, rhs->conjuncts, mode),
                              mode);
      }
      case Term::Kind::proj: {
        path.push_back(0);
        auto body = rec(t.child0(), path);
        path.pop_back();
        if (!body) return std::nullopt;
        CanonicalType ann = order_canonical(t.ann(), mode);
        if (!conj_includes(body->conjuncts, ann.conjuncts, mode)) {
          error = TypeErrorInfo{TypeErrorInfo::Kind::proj_not_available, path,
                                ann.ser() + " within " + body->ser()};
          return std::nullopt;
        }
        return ann;
      }
    }
    return std::nullopt;
  }

  static std::string to_string_types(const CanonicalType& fun,
                                     const CanonicalType& arg) {
    return arg.ser() + " into " + fun.ser();
  }
};

}  // namespace

InferOutcome infer(const Term& t, Mode mode, TypingCache* cache) {
  if (auto name = functional_conflict(t, mode))
    return TypeErrorInfo{TypeErrorInfo::Kind::non_functional_vars, {}, *name};
  Infer engine{mode, cache, std::nullopt};
  Path path;
  auto result = engine.rec(t, path);
  if (!result) {
    assert(engine.error.has_value());
    return *engine.error;
  }
  return TypingResult{to_type(*result), std::move(*result)};
}

std::optional<CanonicalType> try_infer(const Term& t, Mode mode,
                                       TypingCache* cache) {
  if (cache) {
    // Fast path: a cache hit certifies the whole term, including the
    // functional-variables condition checked when it was first stored.
    auto it = cache->find(alpha_serial(t));
    if (it != cache->end()) return it->second;
  }
  auto outcome = infer(t, mode, cache);
  if (auto* ok = std::get_if<TypingResult>(&outcome)) return ok->canonical;
  return std::nullopt;
}

bool check(const Term& t, const Type& a, Mode mode, TypingCache* cache) {
  auto got = try_infer(t, mode, cache);
  return got && *got == order_canonical(a, mode);
}

Term normalize_annotations(const Term& t, Mode mode) {
  switch (t.kind()) {
    case Term::Kind::var:
      return Term::var(t.name(), canonical_type_of(t.ann(), mode));
    case Term::Kind::lam:
      return Term::lam(t.name(), canonical_type_of(t.ann(), mode),
                       normalize_annotations(t.child0(), mode));
    case Term::Kind::proj:
      return Term::proj(canonical_type_of(t.ann(), mode),
                        normalize_annotations(t.child0(), mode));
    case Term::Kind::app:
      return Term::app(normalize_annotations(t.child0(), mode),
                       normalize_annotations(t.child1(), mode));
    case Term::Kind::sum:
      return Term::sum(normalize_annotations(t.child0(), mode),
                       normalize_annotations(t.child1(), mode));
  }
  return t;
}

std::optional<Inversion> invert(const Term& t, Mode mode, TypingCache* cache) {
  if (!try_infer(t, mode, cache)) return std::nullopt;
  switch (t.kind()) {
    case Term::Kind::var:
      return Inversion{InvVar{order_canonical(t.ann(), mode)}};
    case Term::Kind::lam: {
      auto body = try_infer(t.child0(), mode, cache);
      return Inversion{InvLam{order_canonical(t.ann(), mode), std::move(*body)}};
    }
    case Term::Kind::app: {
      auto fun = try_infer(t.child0(), mode, cache);
      auto arg = try_infer(t.child1(), mode, cache);
      auto result = apply_canonical(*fun, *arg, mode);
      return Inversion{InvApp{std::move(*arg), std::move(*result)}};
    }
    case Term::Kind::sum: {
      auto lhs = try_infer(t.child0(), mode, cache);
      auto rhs = try_infer(t.child1(), mode, cache);
      return Inversion{InvSum{std::move(*lhs), std::move(*rhs)}};
    }
    case Term::Kind::proj: {
      auto body = try_infer(t.child0(), mode, cache);
      CanonicalType ann = order_canonical(t.ann(), mode);
      bool strict = body->conjuncts.size() > ann.conjuncts.size();
      return Inversion{InvProj{std::move(ann), std::move(*body), strict}};
    }
  }
  return std::nullopt;
}

}  // namespace isolambda
