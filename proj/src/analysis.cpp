#include "isolambda/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "isolambda/measures.hpp"
#include "isolambda/typing.hpp"

namespace isolambda {

namespace {

struct Binding {
  std::string name;
  CanonicalType ct;
};

using Env = std::vector<Binding>;

// Backwards, type-directed term synthesis: pick a target type, then build a
// derivation for it, abandoning branches that hit dead ends. All randomness
// flows from one generator, so a seed fixes the output exactly.
struct Generator {
  const GenConfig& cfg;
  std::mt19937_64 rng;
  int counter = 0;

  explicit Generator(const GenConfig& c) : cfg(c), rng(c.seed) {}

  std::size_t roll(std::size_t n) {
    std::uniform_int_distribution<std::size_t> d(0, n - 1);
    return d(rng);
  }

  Type rand_atom() {
    return Type::atom(cfg.atom_alphabet[roll(cfg.atom_alphabet.size())]);
  }

  Type rand_type(int depth) {
    if (depth <= 0) return rand_atom();
    switch (roll(6)) {
      case 0:
      case 1:
        return rand_atom();
      case 2:
      case 3:
        return Type::arrow(rand_type(depth - 1), rand_type(depth - 1));
      default:
        return Type::conj(rand_type(depth - 1), rand_type(depth - 1));
    }
  }

  std::string fresh() { return "x" + std::to_string(++counter); }

  // Conjunction-free types available as argument/junk material: biased
  // toward what the environment can already inhabit.
  CanonicalType side_type(const Env& env) {
    if (!env.empty() && roll(2) == 0) return env[roll(env.size())].ct;
    if (roll(3) != 0) return order_canonical(rand_atom());
    return order_canonical(rand_type(1));
  }

  std::optional<Term> build(const CanonicalType& target, int depth, Env& env);

  Term gen_closed(bool want_conjunctive) {
    for (int attempt = 0; attempt < 500; ++attempt) {
      Type ty = rand_type(2);
      if (want_conjunctive &&
          order_canonical(ty).conjuncts.size() < 2)
        ty = Type::conj(ty, rand_type(1));
      Env env;
      if (auto t = build(order_canonical(ty), cfg.max_depth, env)) return *t;
    }
    // Every alphabet admits these; only reachable if the dice are hostile.
    Term id0 = Term::lam("x", Type::atom(cfg.atom_alphabet[0]),
                         Term::var("x", Type::atom(cfg.atom_alphabet[0])));
    if (!want_conjunctive) return id0;
    std::string a1 = cfg.atom_alphabet[cfg.atom_alphabet.size() > 1 ? 1 : 0];
    Term id1 = Term::lam("y", Type::atom(a1), Term::var("y", Type::atom(a1)));
    return Term::sum(id0, id1);
  }
};

std::vector<ConjFree> remove_one(std::vector<ConjFree> args,
                                 const ConjFree& g) {
  for (auto it = args.begin(); it != args.end(); ++it) {
    if (it->ser == g.ser) {
      args.erase(it);
      return args;
    }
  }
  throw std::logic_error("remove_one: argument not present");
}

std::optional<Term> Generator::build(const CanonicalType& target, int depth,
                                     Env& env) {
  enum Move { mv_var, mv_sum, mv_lam, mv_app, mv_proj };
  std::vector<std::pair<Move, double>> moves;

  std::vector<std::size_t> var_hits;
  for (std::size_t i = 0; i < env.size(); ++i)
    if (env[i].ct == target) var_hits.push_back(i);
  if (!var_hits.empty()) moves.emplace_back(mv_var, 3.0);

  if (depth > 0) {
    if (target.conjuncts.size() >= 2) moves.emplace_back(mv_sum, cfg.sum_bias);

    // a lambda works iff some argument type is shared by every conjunct
    std::vector<ConjFree> common;
    for (const ConjFree& cand : target.conjuncts.front().args) {
      if (std::any_of(common.begin(), common.end(),
                      [&](const ConjFree& c) { return c.ser == cand.ser; }))
        continue;
      bool everywhere = true;
      for (const ConjFree& c : target.conjuncts) {
        if (std::none_of(c.args.begin(), c.args.end(), [&](const ConjFree& a) {
              return a.ser == cand.ser;
            })) {
          everywhere = false;
          break;
        }
      }
      if (everywhere) common.push_back(cand);
    }
    if (!common.empty()) moves.emplace_back(mv_lam, cfg.lam_bias);

    moves.emplace_back(mv_app, cfg.app_bias);
    moves.emplace_back(mv_proj, cfg.proj_bias);

    while (!moves.empty()) {
      double total = 0;
      for (auto& [m, w] : moves) total += w;
      std::uniform_real_distribution<double> d(0.0, total);
      double x = d(rng);
      std::size_t idx = 0;
      for (; idx + 1 < moves.size(); ++idx) {
        x -= moves[idx].second;
        if (x < 0) break;
      }
      Move mv = moves[idx].first;
      moves.erase(moves.begin() + idx);

      switch (mv) {
        case mv_var: {
          const Binding& b = env[var_hits[roll(var_hits.size())]];
          return Term::var(b.name, to_type(b.ct));
        }
        case mv_sum: {
          const auto& cs = target.conjuncts;
          std::size_t n = cs.size();
          std::vector<ConjFree> p, q;
          if (n > 16) {
            p.assign(cs.begin(), cs.begin() + n / 2);
            q.assign(cs.begin() + n / 2, cs.end());
          } else {
            std::uint64_t mask = 1 + roll((1u << n) - 2);
            for (std::size_t i = 0; i < n; ++i)
              (mask & (1u << i) ? p : q).push_back(cs[i]);
          }
          auto l = build(make_canonical(p, Mode::modulo), depth - 1, env);
          if (!l) break;
          auto r = build(make_canonical(q, Mode::modulo), depth - 1, env);
          if (!r) break;
          return Term::sum(*l, *r);
        }
        case mv_lam: {
          const ConjFree& g = common[roll(common.size())];
          std::vector<ConjFree> rest;
          for (const ConjFree& c : target.conjuncts)
            rest.push_back(make_conjfree(remove_one(c.args, g), c.head));
          std::string x = fresh();
          env.push_back({x, make_canonical({g}, Mode::modulo)});
          auto body = build(make_canonical(rest, Mode::modulo), depth - 1, env);
          env.pop_back();
          if (!body) break;
          return Term::lam(x, to_type(g), *body);
        }
        case mv_app: {
          CanonicalType b = side_type(env);
          auto fun = build(arrow_canonical(b, target, Mode::modulo),
                           depth - 1, env);
          if (!fun) break;
          auto arg = build(b, depth - 1, env);
          if (!arg) break;
          return Term::app(*fun, *arg);
        }
        case mv_proj: {
          CanonicalType junk = side_type(env);
          CanonicalType wide = make_canonical(
              conj_merge(target.conjuncts, junk.conjuncts, Mode::modulo),
              Mode::modulo);
          auto body = build(wide, depth - 1, env);
          if (!body) break;
          return Term::proj(to_type(target), *body);
        }
      }
    }
  } else if (!var_hits.empty()) {
    const Binding& b = env[var_hits[roll(var_hits.size())]];
    return Term::var(b.name, to_type(b.ct));
  }
  return std::nullopt;
}

void flatten_sum(const Term& t, std::vector<Term>& out) {
  if (t.kind() == Term::Kind::sum) {
    flatten_sum(t.child0(), out);
    out.push_back(t.child1());
  } else {
    out.push_back(t);
  }
}

}  // namespace

Term gen_typed_term(const GenConfig& cfg) {
  return Generator(cfg).gen_closed(false);
}

Term gen_conjunctive_term(const GenConfig& cfg) {
  return Generator(cfg).gen_closed(true);
}

SnReport check_sn(const Term& t, Engine& eng) {
  SnReport r;
  try {
    r.nf_count = normal_forms(t, eng).size();
    r.ns = max_steps(t, eng);
    r.terminated = true;
  } catch (const FuelExhausted&) {
    r.terminated = false;
  }
  return r;
}

SnReport check_sn(const Term& t, std::uint64_t fuel) {
  Options o;
  o.fuel = fuel;
  Engine eng(o);
  return check_sn(t, eng);
}

std::optional<CsnShape> check_csn(const Term& t, Engine& eng) {
  const Mode mode = eng.mode();
  for (const Term& m : eng.class_of(t)->members) {
    std::vector<Term> parts;
    flatten_sum(m, parts);
    CsnShape shape;
    bool ok = true;
    for (const Term& s : parts) {
      if (s.kind() == Term::Kind::lam) {
        shape.lambda_group.emplace_back(s.ann(), s.child0());
        continue;
      }
      if (s.kind() == Term::Kind::app &&
          s.child0().kind() == Term::Kind::lam) {
        // Stuck: the application typechecks (the argument is absorbed
        // somewhere in the function's uncurried domain) but the binder
        // annotation itself differs, so the redex can never fire.
        Term lam = s.child0(), arg = s.child1();
        CanonicalType binder = order_canonical(lam.ann(), mode);
        auto at = eng.type_of(arg);
        auto st = eng.type_of(s);
        if (at && st && *at != binder) {
          shape.stuck_group.emplace_back(lam.ann(), lam.child0(), arg);
          continue;
        }
      }
      ok = false;
      break;
    }
    if (ok) return shape;
  }
  return std::nullopt;
}

bool check_redpi(const Term& t, const Type& a, Engine& eng) {
  const Mode mode = eng.mode();
  auto tt = eng.type_of(t);
  if (!tt) throw std::invalid_argument("check_redpi: term does not typecheck");
  CanonicalType ia = order_canonical(a, mode);
  if (ia.conjuncts.size() >= tt->conjuncts.size() ||
      !conj_includes(tt->conjuncts, ia.conjuncts, mode))
    throw std::invalid_argument("check_redpi: projection is not strict");

  Term start = eng.representative(Term::proj(to_type(ia), t));

  // Walk only edges an adversary could take without a discarding projection;
  // the property fails iff such a walk reaches a dead end or can loop.
  std::unordered_map<std::string, int> color;  // 1 on stack, 2 done
  std::uint64_t budget = eng.options().fuel;

  std::function<bool(const Term&)> escapes = [&](const Term& node) -> bool {
    if (budget-- == 0)
      throw FuelExhausted("check_redpi: path search budget exhausted");
    std::string key = alpha_serial(node);
    color[key] = 1;
    bool bad = false;
    std::vector<Successor> succs = red_modulo_detailed(node, eng);
    if (succs.empty()) bad = true;  // normal form reached without pi_n
    for (const Successor& s : succs) {
      if (bad) break;
      bool avoidable = std::any_of(
          s.rules.begin(), s.rules.end(),
          [](RedRule r) { return r != RedRule::pi_n; });
      if (!avoidable) continue;
      auto it = color.find(alpha_serial(s.rep));
      if (it != color.end() && it->second == 1) {
        bad = true;  // pi_n-free cycle
      } else if (it == color.end()) {
        bad = escapes(s.rep);
      }
    }
    color[key] = 2;
    return bad;
  };

  return !escapes(start);
}

namespace {

std::vector<Term> strict_subterms(const Term& t) {
  std::vector<Term> out;
  std::function<void(const Term&, bool)> go = [&](const Term& u, bool root) {
    if (!root) out.push_back(u);
    for (int i = 0; i < u.arity(); ++i)
      go(i == 0 ? u.child0() : u.child1(), false);
  };
  go(t, true);
  return out;
}

void positions_of(const Term& t, Path& here, std::vector<Path>& out) {
  out.push_back(here);
  for (int i = 0; i < t.arity(); ++i) {
    here.push_back(i);
    positions_of(i == 0 ? t.child0() : t.child1(), here, out);
    here.pop_back();
  }
}

// Replace subterms with smaller same-type subterms while the predicate keeps
// failing; yields the small counterexamples the report prints.
Term shrink(Term t, Engine& eng,
            const std::function<bool(const Term&)>& still_fails) {
  bool improved = true;
  while (improved) {
    improved = false;
    std::vector<Path> poss;
    Path root;
    positions_of(t, root, poss);
    for (const Path& p : poss) {
      Term u = subterm_at(t, p);
      auto ut = eng.type_of(u);
      if (!ut) continue;
      for (const Term& v : strict_subterms(u)) {
        auto vt = eng.type_of(v);
        if (!vt || !(*vt == *ut)) continue;
        Term cand = replace_at(t, p, v);
        if (still_fails(cand)) {
          t = cand;
          improved = true;
          break;
        }
      }
      if (improved) break;
    }
  }
  return t;
}

struct SuiteCtx {
  Engine& eng;
  PropReport& rep;

  void fail(const std::string& what, const Term& t,
            const std::function<bool(const Term&)>& pred) {
    Term small = shrink(t, eng, pred);
    rep.failures.push_back(
        {what + ": " + print_term(small), small});
  }
};

}  // namespace

const std::vector<std::string>& property_suite_names() {
  static const std::vector<std::string> names{
      "subject_reduction", "m_invariance",       "p_invariance",
      "class_finiteness",  "sn",                 "csn",
      "redpi",             "substitution_lemma", "unicity"};
  return names;
}

PropReport run_property_suite(const std::string& name, std::size_t trials,
                              std::uint64_t seed) {
  const auto& names = property_suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw std::invalid_argument("unknown property suite: " + name);

  PropReport rep{name, trials, {}};
  Engine eng;
  SuiteCtx ctx{eng, rep};
  const Mode mode = eng.mode();

  for (std::size_t i = 0; i < trials; ++i) {
    GenConfig cfg;
    cfg.seed = seed * 0x9e3779b97f4a7c15ULL + i;

    if (name == "subject_reduction") {
      Term t = normalize_annotations(gen_typed_term(cfg), mode);
      auto pred = [&](const Term& u) {
        auto ct = eng.type_of(u);
        if (!ct) return true;
        for (const EquivStep& st : equiv_steps(u, eng)) {
          auto st_t = eng.type_of(st.result);
          if (!st_t || !(*st_t == *ct)) return true;
        }
        for (const Successor& su : red_modulo_detailed(u, eng)) {
          auto su_t = eng.type_of(su.rep);
          if (!su_t || !(*su_t == *ct)) return true;
        }
        return false;
      };
      if (pred(t)) ctx.fail("type not preserved by a successor", t, pred);
    } else if (name == "m_invariance" || name == "p_invariance") {
      const bool use_m = name[0] == 'm';
      Term t = normalize_annotations(gen_typed_term(cfg), mode);
      auto pred = [&](const Term& u) {
        if (!eng.type_of(u)) return false;
        Measures m0 = measure(u);
        for (const EquivStep& st : equiv_steps(u, eng)) {
          Measures m1 = measure(st.result);
          if (use_m ? m1.m != m0.m : m1.p != m0.p) return true;
        }
        return false;
      };
      if (pred(t))
        ctx.fail(use_m ? "M changed across an equivalence step"
                       : "P changed across an equivalence step",
                 t, pred);
    } else if (name == "class_finiteness") {
      Term t = normalize_annotations(gen_typed_term(cfg), mode);
      try {
        auto cls = eng.class_of(t);
        std::uint64_t m0 = measure(cls->representative).m;
        bool off = cls->members.size() > eng.options().class_cap;
        for (const Term& m : cls->members)
          if (measure(m).m != m0) off = true;
        if (off)
          rep.failures.push_back(
              {"class member breaks the M bound: " + print_term(t), t});
      } catch (const ResourceLimitError&) {
        rep.failures.push_back(
            {"class enumeration hit the cap: " + print_term(t), t});
      }
    } else if (name == "sn") {
      Term t = normalize_annotations(gen_typed_term(cfg), mode);
      SnReport r = check_sn(t, eng);
      if (!r.terminated)
        rep.failures.push_back(
            {"normalization ran out of fuel: " + print_term(t), t});
    } else if (name == "csn") {
      Term t = normalize_annotations(gen_typed_term(cfg), mode);
      auto pred = [&](const Term& u) {
        if (!is_closed(u) || !eng.type_of(u)) return false;
        for (const Term& nf : normal_forms(u, eng))
          if (is_closed(nf) && !check_csn(nf, eng)) return true;
        return false;
      };
      try {
        if (pred(t)) ctx.fail("a closed normal form escapes the shape", t, pred);
      } catch (const FuelExhausted&) {
        rep.failures.push_back({"fuel exhausted: " + print_term(t), t});
      }
    } else if (name == "redpi") {
      Term t = normalize_annotations(gen_conjunctive_term(cfg), mode);
      auto strict_slice = [&](const Term& u) -> std::optional<Type> {
        auto ct = eng.type_of(u);
        if (!ct || ct->conjuncts.size() < 2) return std::nullopt;
        std::mt19937_64 slice_rng(cfg.seed ^ 0xabcd);
        std::size_t n = ct->conjuncts.size();
        std::uniform_int_distribution<std::size_t> d(1, n - 1);
        std::size_t k = d(slice_rng);
        std::vector<ConjFree> part(ct->conjuncts.begin(),
                                   ct->conjuncts.begin() + k);
        return to_type(make_canonical(part, mode));
      };
      auto pred = [&](const Term& u) {
        if (!is_closed(u)) return false;
        auto a = strict_slice(u);
        if (!a) return false;
        return !check_redpi(u, *a, eng);
      };
      try {
        if (pred(t))
          ctx.fail("a maximal path avoids every discarding projection", t,
                   pred);
      } catch (const FuelExhausted&) {
        rep.failures.push_back({"fuel exhausted: " + print_term(t), t});
      }
    } else if (name == "substitution_lemma") {
      Term s = gen_typed_term(cfg);
      auto bt = eng.type_of(s);
      if (!bt) {
        rep.failures.push_back({"generator output untypable", s});
        continue;
      }
      GenConfig cfg2 = cfg;
      cfg2.seed = cfg.seed ^ 0x5bd1e995;
      Generator g(cfg2);
      Env env{{"u0", *bt}};
      auto r = g.build(order_canonical(g.rand_type(2)), 3, env);
      if (!r) continue;  // dead end: no open term this round, not a failure
      Term rn = normalize_annotations(*r, mode);
      auto before = eng.type_of(rn);
      auto after = eng.type_of(subst_term(rn, s, "u0"));
      if (!before || !after || !(*before == *after))
        rep.failures.push_back(
            {"substitution changed the type: " + print_term(rn), rn});
    } else if (name == "unicity") {
      Term t = normalize_annotations(gen_typed_term(cfg), mode);
      auto ct = eng.type_of(t);
      if (!ct) {
        rep.failures.push_back({"generator output untypable", t});
        continue;
      }
      Type spelled = to_type(*ct);
      Type respelled = to_type(canonicalize(spelled));
      Type widened = Type::conj(spelled, Type::atom(cfg.atom_alphabet[0]));
      bool ok = check(t, spelled, mode, &eng.typing()) &&
                check(t, respelled, mode, &eng.typing()) &&
                !check(t, widened, mode, &eng.typing());
      if (!ok)
        rep.failures.push_back(
            {"typing is not unique modulo equivalence: " + print_term(t), t});
    }
  }
  return rep;
}

}  // namespace isolambda
