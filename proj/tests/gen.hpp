#pragma once

// Deterministic random instance generation for the property suites, plus
// tuple-level semantics helpers built on the membership oracle. Signatures
// are drawn from profiles whose depth-4 term universes stay enumerable.

#include <cstdint>
#include <functional>

#include "rtypes/defs.hpp"
#include "rtypes/normalize.hpp"

namespace rtypes::testgen {

// splitmix64: stable across platforms and standard libraries, so recorded
// seeds reproduce instances exactly.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return n ? next() % n : 0; }
  bool chance(unsigned percent) { return below(100) < percent; }
};

struct GenOptions {
  std::size_t max_ctors = 4;
  std::size_t max_params = 2;
  std::size_t max_rules = 3;
  bool tiny_terms = false;  // keep depth-3 tuple spaces small (no binary symbol)
  bool allow_unsimplified = true;  // aliases and nested bodies
};

TypeDefs random_defs(Rng& rng, const GenOptions& opt = {});

// Parameter-free expression over defs' constructors, height <= depth.
TypeExprPtr random_expr(Rng& rng, const TypeDefs& defs, std::size_t depth);

// A canonical conjunction of (1..2 positive, 0..2 negative) atoms.
Conjunct random_conjunct(Rng& rng, const TypeDefs& defs);

// n sequences of the given dimension (dimension 0 mixes eps and lambda).
ConjSeq random_conj_seq(Rng& rng, const TypeDefs& defs, std::size_t dim, std::size_t n);

bool tuple_in_seq(const std::vector<TermPtr>& tuple, const Sequence& s,
                  const TypeDefs& defs);
bool tuple_in_seq_expr(const std::vector<TermPtr>& tuple, const SeqExpr& e,
                       const TypeDefs& defs);

// Every width-tuple over pool, in odometer order.
void for_each_tuple(const std::vector<TermPtr>& pool, std::size_t width,
                    const std::function<void(const std::vector<TermPtr>&)>& fn);

}  // namespace rtypes::testgen
