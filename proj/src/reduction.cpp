#include "isolambda/reduction.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <unordered_set>

namespace isolambda {

const char* rule_name(RedRule r) {
  switch (r) {
    case RedRule::beta: return "beta";
    case RedRule::pi_n: return "pi_n";
    case RedRule::pi_1: return "pi_1";
    case RedRule::delta: return "delta";
  }
  return "?";
}

namespace {

constexpr const char* kHole = "_hole";  // not a lexable identifier

bool marker_under_proj(const Term& t) {
  if (t.kind() == Term::Kind::proj) {
    const Term body = t.child0();
    if (body.kind() == Term::Kind::var && body.name() == kHole) return true;
  }
  for (int i = 0; i < t.arity(); ++i)
    if (marker_under_proj(i == 0 ? t.child0() : t.child1())) return true;
  return false;
}

// The delta context condition: replacing the redex by a fresh marker, no
// equivalent form of the surrounding context may hold the marker directly
// under a projection. Otherwise delta and the projection rules chase each
// other forever instead of making progress.
bool delta_allowed(const Term& whole, const Path& pos, const Type& redex_type,
                   Engine& eng) {
  Term ctx = replace_at(whole, pos, Term::var(kHole, redex_type));
  std::string key = alpha_serial(ctx);
  auto hit = eng.delta_context_memo.find(key);
  if (hit != eng.delta_context_memo.end()) return hit->second;
  bool ok = true;
  for (const Term& m : eng.class_of(ctx)->members) {
    if (marker_under_proj(m)) {
      ok = false;
      break;
    }
  }
  eng.delta_context_memo.emplace(std::move(key), ok);
  return ok;
}

void flatten_sum(const Term& t, std::vector<Term>& out) {
  if (t.kind() == Term::Kind::sum) {
    flatten_sum(t.child0(), out);
    out.push_back(t.child1());
  } else {
    out.push_back(t);
  }
}

Term rebuild_sum(const std::vector<Term>& parts, std::size_t k) {
  Term acc = parts[0];
  for (std::size_t i = 1; i < k; ++i) acc = Term::sum(acc, parts[i]);
  return acc;
}

Term proj_over(const std::vector<ConjFree>& conjs, const Term& body,
               Mode mode) {
  return Term::proj(to_type(make_canonical(conjs, mode)), body);
}

struct Collector {
  Engine& eng;
  const Term& whole;
  std::vector<RedStep> out;

  void emit(RedRule rule, const Path& pos, Term local) {
    out.push_back({rule, pos, replace_at(whole, pos, std::move(local))});
  }

  void visit(const Term& u, Path& pos) {
    const Mode mode = eng.mode();

    if (u.kind() == Term::Kind::app && u.child0().kind() == Term::Kind::lam) {
      const Term lam = u.child0(), arg = u.child1();
      auto ta = eng.type_of(arg);
      if (ta && *ta == order_canonical(lam.ann(), mode))
        emit(RedRule::beta, pos, subst_term(lam.child0(), arg, lam.name()));
    }

    if (u.kind() == Term::Kind::proj) {
      const Term body = u.child0();
      const CanonicalType idx = order_canonical(u.ann(), mode);
      auto tb = eng.type_of(body);
      if (tb && *tb == idx) emit(RedRule::pi_1, pos, body);
      if (body.kind() == Term::Kind::sum) {
        std::vector<Term> parts;
        flatten_sum(body, parts);
        for (std::size_t k = 1; k < parts.size(); ++k) {
          Term prefix = rebuild_sum(parts, k);
          auto tp = eng.type_of(prefix);
          if (tp && *tp == idx) emit(RedRule::pi_n, pos, prefix);
        }
      }
    }

    auto tu = eng.type_of(u);
    if (tu && tu->conjuncts.size() >= 2 && !is_sum_modulo(u, eng) &&
        delta_allowed(whole, pos, to_type(*tu), eng)) {
      const auto& cs = tu->conjuncts;
      for (std::size_t k = 1; k < cs.size(); ++k) {
        std::vector<ConjFree> p(cs.begin(), cs.begin() + k);
        std::vector<ConjFree> q(cs.begin() + k, cs.end());
        emit(RedRule::delta, pos,
             Term::sum(proj_over(p, u, mode), proj_over(q, u, mode)));
      }
    }

    for (int i = 0; i < u.arity(); ++i) {
      pos.push_back(i);
      visit(i == 0 ? u.child0() : u.child1(), pos);
      pos.pop_back();
    }
  }
};

}  // namespace

std::vector<RedStep> direct_steps(const Term& t, Engine& eng) {
  Collector c{eng, t, {}};
  Path pos;
  c.visit(t, pos);
  return c.out;
}

std::vector<Successor> red_modulo_detailed(const Term& t, Engine& eng) {
  auto cls = eng.class_of(t);
  std::map<std::string, Successor, bool (*)(const std::string&,
                                            const std::string&)>
      found(serial_less);
  for (const Term& m : cls->members) {
    for (RedStep& step : direct_steps(m, eng)) {
      Term rep = eng.representative(step.result);
      std::string key = alpha_serial(rep);
      const RedRule rule = step.rule;
      auto it = found.find(key);
      if (it == found.end()) {
        found.emplace(std::move(key),
                      Successor{rep, m, std::move(step), {rule}});
      } else {
        auto& rules = it->second.rules;
        if (std::find(rules.begin(), rules.end(), step.rule) == rules.end())
          rules.push_back(step.rule);
      }
    }
  }
  std::vector<Successor> out;
  out.reserve(found.size());
  for (auto& [key, succ] : found) {
    std::sort(succ.rules.begin(), succ.rules.end());
    out.push_back(std::move(succ));
  }
  return out;
}

std::vector<Term> red_modulo(const Term& t, Engine& eng) {
  std::vector<Term> out;
  for (auto& s : red_modulo_detailed(t, eng)) out.push_back(s.rep);
  return out;
}

bool is_normal_modulo(const Term& t, Engine& eng) {
  return red_modulo(t, eng).empty();
}

std::vector<Term> normal_forms(const Term& t, Engine& eng) {
  Term start = eng.representative(t);
  std::string start_key = alpha_serial(start);
  if (auto hit = eng.normal_forms_memo.find(start_key);
      hit != eng.normal_forms_memo.end())
    return hit->second;

  std::uint64_t budget = eng.options().fuel;
  std::unordered_set<std::string> visited{start_key};
  std::deque<Term> queue{start};
  std::vector<Term> nfs;

  while (!queue.empty()) {
    Term cur = queue.front();
    queue.pop_front();
    if (budget-- == 0)
      throw FuelExhausted("normal_forms: explored class budget exhausted");
    std::vector<Term> succs = red_modulo(cur, eng);
    if (succs.empty()) {
      nfs.push_back(cur);
      continue;
    }
    for (Term& s : succs) {
      if (visited.insert(alpha_serial(s)).second) queue.push_back(std::move(s));
    }
  }

  std::sort(nfs.begin(), nfs.end(), [](const Term& a, const Term& b) {
    return serial_less(alpha_serial(a), alpha_serial(b));
  });
  eng.normal_forms_memo.emplace(std::move(start_key), nfs);
  return nfs;
}

namespace {

std::uint64_t longest_path(const Term& node, Engine& eng,
                           std::unordered_set<std::string>& on_path,
                           std::uint64_t& budget) {
  if (budget-- == 0)
    throw FuelExhausted("max_steps: path search budget exhausted");
  std::uint64_t best = 0;
  for (Term& s : red_modulo(node, eng)) {
    std::string key = alpha_serial(s);
    if (on_path.count(key)) continue;
    on_path.insert(key);
    best = std::max(best, 1 + longest_path(s, eng, on_path, budget));
    on_path.erase(key);
  }
  return best;
}

}  // namespace

std::uint64_t max_steps(const Term& t, Engine& eng) {
  Term start = eng.representative(t);
  std::string key = alpha_serial(start);
  if (auto hit = eng.max_steps_memo.find(key);
      hit != eng.max_steps_memo.end())
    return hit->second;
  std::unordered_set<std::string> on_path{key};
  std::uint64_t budget = eng.options().fuel;
  std::uint64_t best = longest_path(start, eng, on_path, budget);
  eng.max_steps_memo.emplace(std::move(key), best);
  return best;
}

RandomRun normalize_random(const Term& t, Engine& eng, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Term cur = eng.representative(t);
  std::vector<ReductionHop> trace;
  bool exhausted = false;
  for (std::uint64_t step = 0;; ++step) {
    std::vector<Successor> succs = red_modulo_detailed(cur, eng);
    if (succs.empty()) break;
    if (step >= eng.options().fuel) {
      exhausted = true;
      break;
    }
    std::uniform_int_distribution<std::size_t> pick(0, succs.size() - 1);
    Successor& chosen = succs[pick(rng)];
    trace.push_back({chosen.via_member, chosen.step, chosen.rep});
    cur = chosen.rep;
  }
  return RandomRun{cur, exhausted, std::move(trace)};
}

}  // namespace isolambda
