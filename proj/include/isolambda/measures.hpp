#pragma once

#include <cstdint>

#include "isolambda/syntax.hpp"

namespace isolambda {

/// Node count: variables, binders and projections weigh 1, sums weigh nothing.
std::uint64_t size_S(const Term& t);

/// Sum count: number of + nodes, with arguments of applications not counted
/// (only the function side of an application contributes).
std::uint64_t potential_P(const Term& t);

/// Interaction measure: invariant across the term equivalences, strictly
/// positive, used to bound equivalence classes.
std::uint64_t measure_M(const Term& t);

struct Measures {
  std::uint64_t s, p, m;
};

Measures measure(const Term& t);

}  // namespace isolambda
