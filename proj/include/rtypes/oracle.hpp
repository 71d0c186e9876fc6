#pragma once

// Brute-force semantics: ground-term membership by direct rule matching,
// bounded term enumeration, and the engine/oracle cross check. Works on
// general (unsimplified) definitions and deliberately shares nothing with
// the decision procedure beyond the core data types.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtypes/defs.hpp"

namespace rtypes::oracle {

// True iff t belongs to the set denoted by e. Total on valid inputs: rule
// application consumes term structure, and chains of constructor unfoldings
// that revisit a (term, atom) state denote nothing and are cut off.
bool member(const Term& t, const TypeExpr& e, const TypeDefs& defs);

// All ground terms of height <= depth, deterministically ordered by height,
// then root symbol, then arguments.
std::vector<TermPtr> enumerate_terms(const TypeDefs& defs, std::size_t depth);

// First enumerated member of e, if any. A hit proves e nonempty; no hit is
// inconclusive beyond the given depth.
std::optional<TermPtr> search_member(const TypeExprPtr& e, const TypeDefs& defs,
                                     std::size_t depth);

struct CrossReport {
  std::string verdict_engine;  // "empty" | "nonempty" | "error: ..."
  std::string verdict_oracle;  // "nonempty" | "no-member-found"
  std::optional<std::string> witness;
  std::size_t depth = 0;
  bool contradiction = false;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

// Runs the decision procedure (on simplified definitions) and the bounded
// search (on the definitions as given) against each other. Contradiction:
// the engine claims empty while the search found a member, or the engine
// claims nonempty but cannot produce a valid witness.
CrossReport cross_check(const TypeDefs& defs, const TypeExprPtr& e,
                        std::size_t depth, std::uint64_t seed = 0);

}  // namespace rtypes::oracle
