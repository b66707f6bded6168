#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "isolambda/syntax.hpp"
#include "isolambda/type_canon.hpp"
#include "isolambda/typing.hpp"

namespace isolambda {

/// The symmetric rewrite rules generating term equivalence. `subst` never
/// produces distinct successors here because annotations are kept canonical;
/// it is listed for trace vocabulary completeness.
enum class EquivRule {
  comm, asso, dist_ii, dist_ie, dist_ei, dist_ee, curry, split, subst
};

enum class StepDir { lr, rl };

const char* rule_name(EquivRule r);

struct EquivStep {
  EquivRule rule;
  StepDir dir;
  Path pos;
  Term result;  // whole term after the step
};

struct Options {
  Mode mode = Mode::modulo;
  std::size_t class_cap = 20000;
  std::uint64_t fuel = 1000000;
};

struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

struct FuelExhausted : ResourceLimitError {
  explicit FuelExhausted(const std::string& what) : ResourceLimitError(what) {}
};

/// Strict weak order used whenever a canonical member must be picked:
/// shorter alpha-serialization first, then byte-wise.
bool serial_less(const std::string& a, const std::string& b);

struct EquivClass {
  Term start;                 // normalized input
  Term representative;        // member with the least serialization
  std::vector<Term> members;  // breadth-first discovery order

  struct Edge {
    std::string parent;  // alpha serial of the predecessor member
    EquivStep step;
  };
  std::unordered_map<std::string, Edge> edges;  // keyed by member serial

  bool contains(const Term& t) const;
  /// Steps replaying start -> member (empty when member is start itself).
  std::vector<EquivStep> path_to(const Term& member) const;
};

/// Shared scratch state: one fixed mode plus memo tables reused across the
/// equivalence, reduction and analysis entry points. Values are immutable,
/// so reuse is safe as long as a given engine is driven from one thread.
class Engine {
 public:
  explicit Engine(Options opts = {});

  const Options& options() const { return opts_; }
  Mode mode() const { return opts_.mode; }

  TypingCache& typing() { return typing_; }
  std::optional<CanonicalType> type_of(const Term& t);

  /// Equivalence class of t, cached under every member's serialization.
  std::shared_ptr<const EquivClass> class_of(const Term& t);

  /// Least-serialization member of class_of(t).
  Term representative(const Term& t);

  // scratch tables used by the reduction layer
  std::unordered_map<std::string, bool> delta_context_memo;
  std::unordered_map<std::string, std::vector<Term>> normal_forms_memo;
  std::unordered_map<std::string, std::uint64_t> max_steps_memo;

 private:
  Options opts_;
  TypingCache typing_;
  std::unordered_map<std::string, std::shared_ptr<const EquivClass>> classes_;
};

/// All one-step equivalences of t: every rule, both directions, every
/// position. t is expected annotation-canonical and typable.
std::vector<EquivStep> equiv_steps(const Term& t, Engine& eng);

EquivClass enumerate_class(const Term& t, Engine& eng);

bool equiv_star(const Term& a, const Term& b, Engine& eng);

/// The (lhs, rhs) of some member of t's class that is a sum at the root.
std::optional<std::pair<Term, Term>> is_sum_modulo(const Term& t, Engine& eng);

}  // namespace isolambda
