#pragma once

// Expression normalization: canonical forms for atoms, disjunctive normal
// forms of type and sequence expressions, complement-pushing over sequence
// unions, the relevant-atom closure that bounds the decision procedure, and
// rewriting of definitions into simplified form.

#include <cstdint>
#include <string>
#include <vector>

#include "rtypes/defs.hpp"

namespace rtypes {

// Canonical structural form: double negation removed, !top/!bot folded,
// nested conjunctions/disjunctions flattened, operands sorted and
// deduplicated. Denotation preserving; two atoms with equal canonical form
// compare equal everywhere (table lookups, literal sets, atom sets).
TypeExprPtr canonical(const TypeExprPtr& e);

// A conjunction of literals over canonical atoms: pos kept sorted/unique and
// never empty (top stands in when no positive literal remains), neg sorted/
// unique and free of top/bot.
struct Conjunct {
  std::vector<TypeExprPtr> pos, neg;
};

int cmp(const Conjunct& a, const Conjunct& b);
bool lit_superset(const Conjunct& big, const Conjunct& small);
TypeExprPtr conjunct_expr(const Conjunct& c);   // pos1 & .. & !neg1 & ..
std::string format_conjunct(const Conjunct& c);

// Disjunctive normal form of a parameter-free expression. Conjuncts are
// deduplicated and sorted; `limit` bounds the total number of literals
// across all conjuncts (limit_error beyond it).
std::vector<Conjunct> dnf(const TypeExprPtr& e, std::size_t limit = 1000000);

// Complement of a union of sequences of dimension k, negation pushed onto
// components. The union of nothing denotes nothing, so its complement
// denotes every k-tuple: the all-top sequence (eps when k = 0).
SeqExprPtr complement_sequences(const std::vector<Sequence>& seqs, std::size_t k);

// A conjunction of sequences of one common dimension, sorted and unique.
struct ConjSeq {
  std::vector<Sequence> seqs;

  std::size_t dim() const { return seqs.empty() ? 0 : seqs.front().dim(); }
};

int cmp(const ConjSeq& a, const ConjSeq& b);
std::string format_conj_seq(const ConjSeq& g);

// Disjunctive normal form of a negation-free sequence expression.
std::vector<ConjSeq> seq_dnf(const SeqExprPtr& e, std::size_t limit = 1000000);

// Maximal constructor atoms of e (not nested inside another atom), in
// canonical form; top/bot excluded. Sorted and unique.
std::vector<TypeExprPtr> top_level_atoms(const TypeExprPtr& e);

// Least set of atoms containing top_level_atoms(e) and closed under rule
// expansion: for each atom c(E...) and rule argument position, the top-level
// atoms of the instantiated argument. Requires simplified defs.
std::vector<TypeExprPtr> relevant_atoms(const TypeExprPtr& e, const TypeDefs& defs);

// Instantiates a simplified rule argument (a parameter or a constructor
// over parameters) as a type expression under the given head binding.
TypeExprPtr instantiate_arg(const BodyTerm& arg,
                            const std::vector<std::string>& params,
                            const std::vector<TypeExprPtr>& actuals);

// Rewrites definitions into simplified form: every rule body becomes a
// function symbol applied to parameters and parameter-only constructor
// atoms. Nested arguments are hoisted into fresh "_auxN" constructors;
// alias rules (constructor-rooted bodies) are unfolded, and alias cycles
// that never reach a function symbol leave their constructor ruleless.
// Deterministic; denotation preserving.
TypeDefs simplify(const TypeDefs& defs);

}  // namespace rtypes
