// Command-line front door: typecheck, reduce, class, measure, prop, demo.
//
// Exit codes: 0 success, 1 object-language error (parse/type/resource) or
// property failure, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "isolambda/analysis.hpp"
#include "isolambda/encodings.hpp"
#include "isolambda/measures.hpp"
#include "isolambda/reduction.hpp"
#include "isolambda/syntax.hpp"
#include "isolambda/term_equiv.hpp"
#include "isolambda/type_canon.hpp"
#include "isolambda/typing.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace isolambda;

struct Globals {
  bool deterministic = false;
  bool json_out = false;
  std::string atoms;  // comma/space separated alphabet restriction

  Mode mode() const {
    return deterministic ? Mode::deterministic : Mode::modulo;
  }
};

std::vector<std::string> split_atoms(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void collect_annotation_atoms(const Type& t, std::set<std::string>& out) {
  if (t.is_atom()) {
    out.insert(t.atom_name());
    return;
  }
  collect_annotation_atoms(t.left(), out);
  collect_annotation_atoms(t.right(), out);
}

void collect_term_atoms(const Term& t, std::set<std::string>& out) {
  if (t.is_var() || t.is_lam() || t.is_proj())
    collect_annotation_atoms(t.ann(), out);
  for (int i = 0; i < t.arity(); ++i)
    collect_term_atoms(i == 0 ? t.child0() : t.child1(), out);
}

Term load_term(const std::string& path, const Globals& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  ProgramFile prog = parse_program(buf.str());
  if (!g.atoms.empty()) {
    std::vector<std::string> allowed = split_atoms(g.atoms);
    std::set<std::string> used;
    collect_term_atoms(prog.term, used);
    for (const std::string& a : used)
      if (std::find(allowed.begin(), allowed.end(), a) == allowed.end())
        throw ParseError("atom '" + a + "' not in declared alphabet", 0, 0);
  }
  return prog.term;
}

std::uint64_t default_fuel() {
  if (const char* e = std::getenv("ISOLAMBDA_FUEL")) {
    try {
      return std::stoull(e);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring invalid ISOLAMBDA_FUEL\n";
    }
  }
  return Options{}.fuel;
}

Engine make_engine(const Globals& g, std::uint64_t fuel) {
  Options opt;
  opt.mode = g.mode();
  opt.fuel = fuel;
  return Engine(opt);
}

const char* mode_name(const Globals& g) {
  return g.deterministic ? "deterministic" : "modulo";
}

// Fails with exit-1 semantics when the term does not typecheck.
TypingResult require_typed(const Term& t, Engine& eng) {
  InferOutcome out = infer(t, eng.mode(), &eng.typing());
  if (auto* err = std::get_if<TypeErrorInfo>(&out)) {
    std::cerr << "error: " << err->message() << "\n";
    std::exit(1);
  }
  return std::get<TypingResult>(out);
}

// ---- typecheck ------------------------------------------------------------

int cmd_typecheck(const std::string& file, const Globals& g) {
  Term t = load_term(file, g);
  InferOutcome out = infer(t, g.mode());
  if (auto* err = std::get_if<TypeErrorInfo>(&out)) {
    std::cerr << "error: " << err->message() << "\n";
    return 1;
  }
  const TypingResult& res = std::get<TypingResult>(out);
  if (g.json_out) {
    json j;
    j["command"] = "typecheck";
    j["mode"] = mode_name(g);
    j["term"] = print_term(t);
    j["type"] = print_type(res.type);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << ": " << print_type(res.type) << "\n";
  }
  return 0;
}

// ---- measure --------------------------------------------------------------

int cmd_measure(const std::string& file, const Globals& g) {
  Term t = load_term(file, g);
  Measures m = measure(t);
  if (g.json_out) {
    json j;
    j["command"] = "measure";
    j["term"] = print_term(t);
    j["S"] = m.s;
    j["P"] = m.p;
    j["M"] = m.m;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "S = " << m.s << "\n"
              << "P = " << m.p << "\n"
              << "M = " << m.m << "\n";
  }
  return 0;
}

// ---- class ----------------------------------------------------------------

int cmd_class(const std::string& file, const Globals& g) {
  Term t = load_term(file, g);
  Engine eng = make_engine(g, default_fuel());
  require_typed(t, eng);
  auto cls = eng.class_of(t);

  // BFS order; map serials to indices so edges can cite their parent.
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < cls->members.size(); ++i)
    index[alpha_serial(cls->members[i])] = i;
  std::string rep_serial = alpha_serial(cls->representative);

  json members = json::array();
  for (std::size_t i = 0; i < cls->members.size(); ++i) {
    const Term& m = cls->members[i];
    std::string serial = alpha_serial(m);
    auto edge = cls->edges.find(serial);
    if (g.json_out) {
      json jm;
      jm["term"] = print_term(m);
      jm["representative"] = (serial == rep_serial);
      if (edge != cls->edges.end()) {
        jm["rule"] = rule_name(edge->second.step.rule);
        jm["direction"] = edge->second.step.dir == StepDir::lr ? "lr" : "rl";
        jm["position"] = print_path(edge->second.step.pos);
        jm["parent"] = index.at(edge->second.parent);
      }
      members.push_back(std::move(jm));
    } else {
      std::cout << "#" << i << (serial == rep_serial ? " *" : "  ") << " "
                << print_term(m);
      if (edge != cls->edges.end()) {
        std::cout << "   [" << rule_name(edge->second.step.rule) << " "
                  << (edge->second.step.dir == StepDir::lr ? "lr" : "rl")
                  << " @ " << print_path(edge->second.step.pos) << " from #"
                  << index.at(edge->second.parent) << "]";
      }
      std::cout << "\n";
    }
  }
  if (g.json_out) {
    json j;
    j["command"] = "class";
    j["mode"] = mode_name(g);
    j["count"] = cls->members.size();
    j["members"] = std::move(members);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << cls->members.size() << " members (* = representative)\n";
  }
  return 0;
}

// ---- reduce ---------------------------------------------------------------

int cmd_reduce(const std::string& file, const Globals& g, bool all,
               std::uint64_t seed, bool trace, std::uint64_t fuel) {
  Term t = load_term(file, g);
  Engine eng = make_engine(g, fuel);
  require_typed(t, eng);

  if (all) {
    std::vector<Term> nfs = normal_forms(t, eng);
    if (g.json_out) {
      json j;
      j["command"] = "reduce";
      j["mode"] = mode_name(g);
      j["term"] = print_term(t);
      json arr = json::array();
      for (const Term& nf : nfs) arr.push_back(print_term(nf));
      j["normal_forms"] = std::move(arr);
      std::cout << j.dump(2) << "\n";
    } else {
      for (const Term& nf : nfs) std::cout << print_term(nf) << "\n";
    }
    return 0;
  }

  RandomRun run = normalize_random(t, eng, seed);
  json steps = json::array();
  std::string prev = alpha_serial(eng.representative(t));
  for (const ReductionHop& hop : run.trace) {
    if (alpha_serial(hop.via_member) != prev) {
      if (g.json_out) {
        json s;
        s["rule"] = "equiv";
        s["position"] = "@";
        s["term"] = print_term(hop.via_member);
        steps.push_back(std::move(s));
      } else if (trace) {
        std::cout << "equiv @ @ : " << print_term(hop.via_member) << "\n";
      }
    }
    if (g.json_out) {
      json s;
      s["rule"] = rule_name(hop.step.rule);
      s["position"] = print_path(hop.step.pos);
      s["term"] = print_term(hop.step.result);
      steps.push_back(std::move(s));
    } else if (trace) {
      std::cout << rule_name(hop.step.rule) << " @ "
                << print_path(hop.step.pos) << " : "
                << print_term(hop.step.result) << "\n";
    }
    prev = alpha_serial(hop.to_rep);
  }
  if (g.json_out) {
    json j;
    j["command"] = "reduce";
    j["mode"] = mode_name(g);
    j["term"] = print_term(t);
    j["seed"] = seed;
    j["steps"] = std::move(steps);
    j["result"] = print_term(run.result);
    j["fuel_exhausted"] = run.fuel_exhausted;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << print_term(run.result) << "\n";
  }
  if (run.fuel_exhausted) {
    std::cerr << "error: fuel exhausted before reaching a normal form\n";
    return 1;
  }
  return 0;
}

// ---- prop -----------------------------------------------------------------

int cmd_prop(const std::string& name, std::size_t trials, std::uint64_t seed,
             const Globals& g) {
  PropReport rep = run_property_suite(name, trials, seed);
  if (g.json_out) {
    json j;
    j["command"] = "prop";
    j["name"] = rep.name;
    j["trials"] = rep.trials;
    json fails = json::array();
    for (const PropFailure& f : rep.failures) {
      json jf;
      jf["description"] = f.description;
      if (f.counterexample) jf["counterexample"] = print_term(*f.counterexample);
      fails.push_back(std::move(jf));
    }
    j["failures"] = std::move(fails);
    j["ok"] = rep.ok();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << rep.name << ": " << rep.trials << " trials, "
              << rep.failures.size() << " failures  "
              << (rep.ok() ? "[ok]" : "[FAIL]") << "\n";
    for (const PropFailure& f : rep.failures) {
      std::cout << "  " << f.description << "\n";
      if (f.counterexample)
        std::cout << "    " << print_term(*f.counterexample) << "\n";
    }
  }
  return rep.ok() ? 0 : 1;
}

// ---- demo -----------------------------------------------------------------

void show_term(const std::string& label, const Term& t, Engine& eng,
               bool with_nfs, json* items, const Globals& g) {
  TypingResult res = require_typed(t, eng);
  std::vector<Term> nfs;
  if (with_nfs) nfs = normal_forms(t, eng);

  if (g.json_out) {
    json j;
    j["label"] = label;
    j["term"] = print_term(t);
    j["type"] = print_type(res.type);
    if (with_nfs) {
      json arr = json::array();
      for (const Term& nf : nfs) arr.push_back(print_term(nf));
      j["normal_forms"] = std::move(arr);
    }
    items->push_back(std::move(j));
    return;
  }

  std::cout << label << " = " << print_term(t) << "\n";
  std::cout << "  : " << print_type(res.type) << "\n";
  if (!with_nfs) return;
  RandomRun run = normalize_random(t, eng, 0);
  if (!run.trace.empty()) {
    std::cout << "  trace (seed 0):\n";
    std::string prev = alpha_serial(eng.representative(t));
    for (const ReductionHop& hop : run.trace) {
      if (alpha_serial(hop.via_member) != prev)
        std::cout << "    equiv @ @ : " << print_term(hop.via_member) << "\n";
      std::cout << "    " << rule_name(hop.step.rule) << " @ "
                << print_path(hop.step.pos) << " : "
                << print_term(hop.step.result) << "\n";
      prev = alpha_serial(hop.to_rep);
    }
  }
  std::cout << "  normal forms:\n";
  for (const Term& nf : nfs) std::cout << "    " << print_term(nf) << "\n";
}

int cmd_demo(const std::string& name, const Globals& g) {
  Type A = Type::atom("A");
  Type B = Type::atom("B");
  Type C = Type::atom("C");
  Engine eng = make_engine(g, default_fuel());
  json items = json::array();
  auto show = [&](const std::string& label, const Term& t, bool nfs = true) {
    show_term(label, t, eng, nfs, &items, g);
  };

  if (name == "pair") {
    Term r = Term::var("r", A);
    Term s = Term::var("s", A);
    Term p = mk_pair(r, s);
    show("pair", p, false);
    show("fst", mk_fst(p));
    show("snd", mk_snd(p));
  } else if (name == "list") {
    Term lst = mk_list({Term::var("r", A), Term::var("s", B),
                        Term::var("t", C)});
    show("list", lst, false);
    for (std::size_t i = 0; i < 3; ++i)
      show("nth " + std::to_string(i), mk_nth(lst, i));
  } else if (name == "bool") {
    Term tt = mk_bool(true, A, B);
    Term ff = mk_bool(false, A, B);
    Term r = Term::var("r", B);
    Term s = Term::var("s", B);
    show("TT", tt, false);
    show("FF", ff, false);
    show("ite TT r s", mk_ite(tt, r, s));
    show("ite FF r s", mk_ite(ff, r, s));
  } else if (name == "naive") {
    Term c = Term::lam("x", A, Term::lam("y", A, Term::var("x", A)));
    Term applied = Term::app(Term::app(c, Term::var("r", A)),
                             Term::var("s", A));
    show("naive", c, false);
    show("naive r s", applied);
  } else if (name == "canon") {
    Term t = Term::var("t", B);
    Term wrapped = canon(t, A);
    show("canon", wrapped, false);
    show("cocanon", cocanon(wrapped, Type::arrow(A, B)));
  } else {
    std::cerr << "unknown demo '" << name
              << "' (expected pair, list, bool, naive, canon)\n";
    return 2;
  }

  if (g.json_out) {
    json j;
    j["command"] = "demo";
    j["name"] = name;
    j["mode"] = mode_name(g);
    j["items"] = std::move(items);
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpreter and analysis toolkit for a lambda-calculus with "
               "non-deterministic projections and types identified up to "
               "isomorphism"};
  app.require_subcommand(1);

  Globals g;
  app.add_flag("--deterministic", g.deterministic,
               "Drop comm/asso of & : positional projections, fewer "
               "identifications");
  app.add_flag("--json", g.json_out, "Structured JSON output");
  app.add_option("--atoms", g.atoms,
                 "Restrict atoms to this comma-separated alphabet");

  std::string file, prop_name, demo_name;
  bool all = false, trace = false;
  std::uint64_t seed = 0, fuel = 0;
  std::size_t trials = 100;

  auto* tc = app.add_subcommand("typecheck", "Infer and print the type");
  tc->add_option("file", file)->required()->check(CLI::ExistingFile);
  tc->fallthrough();

  auto* red = app.add_subcommand("reduce", "Reduce to normal form(s)");
  red->add_option("file", file)->required()->check(CLI::ExistingFile);
  auto* all_f = red->add_flag("--all", all, "Enumerate every normal form");
  auto* seed_f =
      red->add_option("--seed", seed, "Random path with this seed (default 0)");
  red->add_flag("--trace", trace, "Print one line per reduction step");
  auto* fuel_f = red->add_option("--fuel", fuel, "Step budget");
  all_f->excludes(seed_f);
  red->fallthrough();

  auto* cls = app.add_subcommand("class", "Enumerate the equivalence class");
  cls->add_option("file", file)->required()->check(CLI::ExistingFile);
  cls->fallthrough();

  auto* meas = app.add_subcommand("measure", "Print the S/P/M measures");
  meas->add_option("file", file)->required()->check(CLI::ExistingFile);
  meas->fallthrough();

  auto* prop = app.add_subcommand("prop", "Run a property suite");
  prop->add_option("name", prop_name, "Suite name, or 'list'")->required();
  prop->add_option("--trials", trials, "Number of generated terms");
  prop->add_option("--seed", seed, "Base seed");
  prop->fallthrough();

  auto* demo = app.add_subcommand(
      "demo", "Replay an encoding construction with traces");
  demo->add_option("name", demo_name, "pair, list, bool, naive, canon")
      ->required();
  demo->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*tc) return cmd_typecheck(file, g);
    if (*meas) return cmd_measure(file, g);
    if (*cls) return cmd_class(file, g);
    if (*red) {
      std::uint64_t budget = fuel_f->count() ? fuel : default_fuel();
      return cmd_reduce(file, g, all, seed, trace, budget);
    }
    if (*prop) {
      const auto& names = property_suite_names();
      if (prop_name == "list") {
        for (const std::string& n : names) std::cout << n << "\n";
        return 0;
      }
      if (std::find(names.begin(), names.end(), prop_name) == names.end()) {
        std::cerr << "unknown property suite '" << prop_name
                  << "'; try 'prop list'\n";
        return 2;
      }
      return cmd_prop(prop_name, trials, seed, g);
    }
    if (*demo) return cmd_demo(demo_name, g);
  } catch (const ParseError& e) {
    std::cerr << "error at line " << e.line << ", col " << e.col << ": "
              << e.what() << "\n";
    return 1;
  } catch (const EncodingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
