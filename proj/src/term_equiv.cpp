#include "isolambda/term_equiv.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace isolambda {

const char* rule_name(EquivRule r) {
  switch (r) {
    case EquivRule::comm: return "comm";
    case EquivRule::asso: return "asso";
    case EquivRule::dist_ii: return "dist_ii";
    case EquivRule::dist_ie: return "dist_ie";
    case EquivRule::dist_ei: return "dist_ei";
    case EquivRule::dist_ee: return "dist_ee";
    case EquivRule::curry: return "curry";
    case EquivRule::split: return "split";
    case EquivRule::subst: return "subst";
  }
  return "?";
}

bool serial_less(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool EquivClass::contains(const Term& t) const {
  return edges.count(alpha_serial(t)) > 0 ||
         alpha_serial(t) == alpha_serial(start);
}

std::vector<EquivStep> EquivClass::path_to(const Term& member) const {
  std::vector<EquivStep> out;
  std::string key = alpha_serial(member);
  const std::string root = alpha_serial(start);
  while (key != root) {
    auto it = edges.find(key);
    if (it == edges.end())
      throw std::logic_error("path_to: term is not a member of this class");
    out.push_back(it->second.step);
    key = it->second.parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Engine::Engine(Options opts) : opts_(opts) {}

std::optional<CanonicalType> Engine::type_of(const Term& t) {
  return try_infer(t, opts_.mode, &typing_);
}

std::shared_ptr<const EquivClass> Engine::class_of(const Term& t) {
  Term t0 = normalize_annotations(t, opts_.mode);
  std::string key = alpha_serial(t0);
  auto hit = classes_.find(key);
  if (hit != classes_.end()) return hit->second;
  auto cls = std::make_shared<EquivClass>(enumerate_class(t0, *this));
  for (const Term& m : cls->members) classes_[alpha_serial(m)] = cls;
  return cls;
}

Term Engine::representative(const Term& t) {
  return class_of(t)->representative;
}

namespace {

struct LocalStep {
  EquivRule rule;
  StepDir dir;
  Term result;
};

// Fresh binder for merging two lambda bodies, avoiding every name in sight.
std::string merge_binder(const Term& r, const Term& s, const std::string& x,
                         const std::string& y) {
  std::set<std::string> avoid{x, y};
  for (const auto& v : all_vars(r)) avoid.insert(v.name);
  for (const auto& v : all_vars(s)) avoid.insert(v.name);
  return fresh_name(x, avoid);
}

bool conj_strictly_includes(const std::vector<ConjFree>& big,
                            const std::vector<ConjFree>& small, Mode mode) {
  return big.size() > small.size() && conj_includes(big, small, mode);
}

// Sub-multiset pairs (P, Q) with P ++ Q == whole (as multisets), both
// non-empty. In deterministic mode only contiguous cuts are allowed.
std::vector<std::pair<std::vector<ConjFree>, std::vector<ConjFree>>>
split_partitions(const std::vector<ConjFree>& whole, Mode mode) {
  std::vector<std::pair<std::vector<ConjFree>, std::vector<ConjFree>>> out;
  const std::size_t n = whole.size();
  if (n < 2) return out;
  if (mode == Mode::deterministic) {
    for (std::size_t k = 1; k < n; ++k) {
      out.emplace_back(
          std::vector<ConjFree>(whole.begin(), whole.begin() + k),
          std::vector<ConjFree>(whole.begin() + k, whole.end()));
    }
    return out;
  }
  if (n > 16) throw ResourceLimitError("split: conjunction too wide");
  std::set<std::string> seen;
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<ConjFree> p, q;
    std::string sig;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        p.push_back(whole[i]);
        sig += whole[i].ser;
        sig += ';';
      } else {
        q.push_back(whole[i]);
      }
    }
    if (seen.insert(sig).second) out.emplace_back(std::move(p), std::move(q));
  }
  return out;
}

Term proj_of(const std::vector<ConjFree>& conjs, const Term& body, Mode mode) {
  return Term::proj(to_type(make_canonical(conjs, mode)), body);
}

void local_steps(const Term& u, Engine& eng, std::vector<LocalStep>& out) {
  const Mode mode = eng.mode();

  if (u.kind() == Term::Kind::sum) {
    Term r = u.child0(), s = u.child1();
    if (mode == Mode::modulo)
      out.push_back({EquivRule::comm, StepDir::lr, Term::sum(s, r)});
    if (mode == Mode::modulo) {
      if (r.kind() == Term::Kind::sum)
        out.push_back({EquivRule::asso, StepDir::lr,
                       Term::sum(r.child0(), Term::sum(r.child1(), s))});
      if (s.kind() == Term::Kind::sum)
        out.push_back({EquivRule::asso, StepDir::rl,
                       Term::sum(Term::sum(r, s.child0()), s.child1())});
    }

    // lambda(r') + lambda(s')  ->  one lambda over a sum
    if (r.kind() == Term::Kind::lam && s.kind() == Term::Kind::lam &&
        serialize_type(r.ann()) == serialize_type(s.ann())) {
      const std::string x = r.name(), y = s.name();
      Term rb = r.child0(), sb = s.child0();
      std::string z = (x == y) ? x : merge_binder(rb, sb, x, y);
      if (z != x) rb = subst_term(rb, Term::var(z, r.ann()), x);
      if (z != y) sb = subst_term(sb, Term::var(z, r.ann()), y);
      out.push_back({EquivRule::dist_ii, StepDir::rl,
                     Term::lam(z, r.ann(), Term::sum(rb, sb))});
    }

    // app(r', t) + app(s', t)  ->  app(r' + s', t)
    if (r.kind() == Term::Kind::app && s.kind() == Term::Kind::app &&
        alpha_equal(r.child1(), s.child1())) {
      out.push_back({EquivRule::dist_ie, StepDir::rl,
                     Term::app(Term::sum(r.child0(), s.child0()),
                               r.child1())});
    }

    // proj(r') + proj(s')  ->  proj over the sum, joining the indices
    if (r.kind() == Term::Kind::proj && s.kind() == Term::Kind::proj) {
      auto tr = eng.type_of(r.child0());
      auto ts = eng.type_of(s.child0());
      if (tr && ts) {
        auto p1 = order_canonical(r.ann(), mode).conjuncts;
        auto p2 = order_canonical(s.ann(), mode).conjuncts;
        std::vector<ConjFree> joined = conj_merge(p1, p2, mode);
        out.push_back({EquivRule::split, StepDir::rl,
                       proj_of(joined, Term::sum(r.child0(), s.child0()),
                               mode)});
      }
    }
    return;
  }

  if (u.kind() == Term::Kind::lam) {
    Term body = u.child0();
    if (body.kind() == Term::Kind::sum) {
      out.push_back({EquivRule::dist_ii, StepDir::lr,
                     Term::sum(Term::lam(u.name(), u.ann(), body.child0()),
                               Term::lam(u.name(), u.ann(), body.child1()))});
    }
    if (body.kind() == Term::Kind::proj) {
      // lambda x. proj_B(b)  ->  proj_{A=>B}(lambda x. b)
      CanonicalType dom = order_canonical(u.ann(), mode);
      CanonicalType cod = order_canonical(body.ann(), mode);
      Type outer = to_type(arrow_canonical(dom, cod, mode));
      out.push_back({EquivRule::dist_ei, StepDir::rl,
                     Term::proj(outer,
                                Term::lam(u.name(), u.ann(), body.child0()))});
    }
    return;
  }

  if (u.kind() == Term::Kind::app) {
    Term f = u.child0(), a = u.child1();
    if (f.kind() == Term::Kind::sum) {
      out.push_back({EquivRule::dist_ie, StepDir::lr,
                     Term::sum(Term::app(f.child0(), a),
                               Term::app(f.child1(), a))});
    }
    if (f.kind() == Term::Kind::app) {
      // (r s) t  ->  r (s + t)
      out.push_back({EquivRule::curry, StepDir::lr,
                     Term::app(f.child0(), Term::sum(f.child1(), a))});
    }
    if (a.kind() == Term::Kind::sum) {
      // r (s + t)  ->  (r s) t
      out.push_back({EquivRule::curry, StepDir::rl,
                     Term::app(Term::app(f, a.child0()), a.child1())});
    }
    if (f.kind() == Term::Kind::proj) {
      // proj_{A=>B}(r) s  ->  proj_B(r s), only when r keeps spare output
      auto ta = eng.type_of(a);
      auto tr = eng.type_of(f.child0());
      if (ta && tr) {
        auto b = apply_canonical(order_canonical(f.ann(), mode), *ta, mode);
        auto rs = apply_canonical(*tr, *ta, mode);
        if (b && rs &&
            conj_strictly_includes(rs->conjuncts, b->conjuncts, mode)) {
          out.push_back({EquivRule::dist_ee, StepDir::lr,
                         Term::proj(to_type(*b),
                                    Term::app(f.child0(), a))});
        }
      }
    }
    return;
  }

  if (u.kind() == Term::Kind::proj) {
    Term body = u.child0();
    CanonicalType idx = order_canonical(u.ann(), mode);

    if (body.kind() == Term::Kind::lam) {
      // proj_{A=>B}(lambda x:A'. b) with A' covering A  ->  push inside
      CanonicalType dom = order_canonical(body.ann(), mode);
      auto inner = apply_canonical(idx, dom, mode);
      if (inner) {
        out.push_back({EquivRule::dist_ei, StepDir::lr,
                       Term::lam(body.name(), body.ann(),
                                 Term::proj(to_type(*inner), body.child0()))});
      }
    }

    if (body.kind() == Term::Kind::app) {
      // proj_B(r s)  ->  proj_{A=>B}(r) s, kept reversible (strict residue)
      Term r = body.child0(), s = body.child1();
      auto ts = eng.type_of(s);
      auto tr = eng.type_of(r);
      if (ts && tr) {
        auto rs = apply_canonical(*tr, *ts, mode);
        if (rs && conj_strictly_includes(rs->conjuncts, idx.conjuncts, mode)) {
          Type outer = to_type(arrow_canonical(*ts, idx, mode));
          out.push_back({EquivRule::dist_ee, StepDir::rl,
                         Term::app(Term::proj(outer, r), s)});
        }
      }
    }

    if (body.kind() == Term::Kind::sum) {
      Term r = body.child0(), s = body.child1();
      auto tr = eng.type_of(r);
      auto ts = eng.type_of(s);
      if (tr && ts) {
        for (auto& [p, q] : split_partitions(idx.conjuncts, mode)) {
          if (conj_includes(tr->conjuncts, p, mode) &&
              conj_includes(ts->conjuncts, q, mode)) {
            out.push_back({EquivRule::split, StepDir::lr,
                           Term::sum(proj_of(p, r, mode),
                                     proj_of(q, s, mode))});
          }
        }
      }
    }
    return;
  }
}

void walk_positions(const Term& t, Path& here, Engine& eng,
                    std::vector<EquivStep>& out, const Term& whole) {
  std::vector<LocalStep> local;
  local_steps(t, eng, local);
  for (auto& st : local) {
    out.push_back({st.rule, st.dir, here,
                   replace_at(whole, here, st.result)});
  }
  for (int i = 0; i < t.arity(); ++i) {
    here.push_back(i);
    walk_positions(i == 0 ? t.child0() : t.child1(), here, eng, out, whole);
    here.pop_back();
  }
}

}  // namespace

std::vector<EquivStep> equiv_steps(const Term& t, Engine& eng) {
  std::vector<EquivStep> out;
  Path root;
  walk_positions(t, root, eng, out, t);
  return out;
}

EquivClass enumerate_class(const Term& t, Engine& eng) {
  Term start = normalize_annotations(t, eng.mode());
  EquivClass cls{start, start, {start}, {}};

  std::unordered_map<std::string, Term> seen;
  std::deque<std::string> queue;

  std::string root = alpha_serial(start);
  seen.emplace(root, start);
  queue.push_back(root);

  std::string best = root;
  Term best_term = start;

  while (!queue.empty()) {
    std::string key = queue.front();
    queue.pop_front();
    Term m = seen.at(key);
    for (EquivStep& step : equiv_steps(m, eng)) {
      std::string rk = alpha_serial(step.result);
      if (seen.count(rk)) continue;
      if (seen.size() >= eng.options().class_cap)
        throw ResourceLimitError("equivalence class exceeds cap of " +
                                 std::to_string(eng.options().class_cap));
      seen.emplace(rk, step.result);
      cls.members.push_back(step.result);
      cls.edges.emplace(rk, EquivClass::Edge{key, std::move(step)});
      if (serial_less(rk, best)) {
        best = rk;
        best_term = cls.members.back();
      }
      queue.push_back(rk);
    }
  }

  cls.representative = best_term;
  return cls;
}

bool equiv_star(const Term& a, const Term& b, Engine& eng) {
  auto cls = eng.class_of(a);
  return cls->contains(normalize_annotations(b, eng.mode()));
}

std::optional<std::pair<Term, Term>> is_sum_modulo(const Term& t,
                                                   Engine& eng) {
  auto cls = eng.class_of(t);
  for (const Term& m : cls->members) {
    if (m.kind() == Term::Kind::sum) return std::make_pair(m.child0(), m.child1());
  }
  return std::nullopt;
}

}  // namespace isolambda
