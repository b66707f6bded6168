#include "isolambda/measures.hpp"

#include <stdexcept>

namespace isolambda {

namespace {

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("measure overflow");
  return r;
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("measure overflow");
  return r;
}

}  // namespace

std::uint64_t size_S(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::var: return 1;
    case Term::Kind::lam: return add(1, size_S(t.child0()));
    case Term::Kind::proj: return add(1, size_S(t.child0()));
    case Term::Kind::app: return add(size_S(t.child0()), size_S(t.child1()));
    case Term::Kind::sum: return add(size_S(t.child0()), size_S(t.child1()));
  }
  return 0;
}

std::uint64_t potential_P(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::var: return 0;
    case Term::Kind::lam: return potential_P(t.child0());
    case Term::Kind::proj: return potential_P(t.child0());
    case Term::Kind::app: return potential_P(t.child0());
    case Term::Kind::sum:
      return add(1, add(potential_P(t.child0()), potential_P(t.child1())));
  }
  return 0;
}

std::uint64_t measure_M(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::var: return 1;
    case Term::Kind::lam:
      return add(1, add(measure_M(t.child0()), potential_P(t.child0())));
    case Term::Kind::proj:
      return add(1, add(measure_M(t.child0()), potential_P(t.child0())));
    case Term::Kind::app: {
      std::uint64_t mf = measure_M(t.child0());
      std::uint64_t ma = measure_M(t.child1());
      return add(add(mf, ma), mul(potential_P(t.child0()), ma));
    }
    case Term::Kind::sum:
      return add(measure_M(t.child0()), measure_M(t.child1()));
  }
  return 0;
}

Measures measure(const Term& t) {
  return Measures{size_S(t), potential_P(t), measure_M(t)};
}

}  // namespace isolambda
