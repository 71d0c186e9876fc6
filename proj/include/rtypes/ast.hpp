#pragma once

// Ground terms, type expressions, rule-body terms and sequence expressions
// for a language of regular types closed under intersection, union and
// complement. All nodes are immutable after construction and may be shared
// freely between threads.

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtypes {

// ---------------------------------------------------------------------------
// Errors

// Lexical or grammatical error; carries a 1-based source position.
struct syntax_error : std::runtime_error {
  int line, col;
  syntax_error(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg), line(line_), col(col_) {}
};

// Well-formedness violation (unknown name, arity mismatch, ...). Position is
// 0:0 when the offending construct has no source location.
struct semantic_error : std::runtime_error {
  int line, col;
  explicit semantic_error(const std::string& msg, int line_ = 0, int col_ = 0)
      : std::runtime_error(msg), line(line_), col(col_) {}
};

// A configured resource limit (DNF size, recursion depth, ...) was exceeded.
// Never a verdict: callers must treat this as "gave up", not "empty".
struct limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Ground terms over the function-symbol alphabet.

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  std::string root;
  std::vector<TermPtr> args;
};

TermPtr make_term(std::string root, std::vector<TermPtr> args = {});
int cmp(const Term& a, const Term& b);
std::size_t term_height(const Term& t);  // constants have height 0
std::string format_term(const Term& t);

// ---------------------------------------------------------------------------
// Type expressions. Atom arguments are full type expressions; Param nodes
// appear only inside rule right-hand sides, never in queries.

enum class TypeKind { Top, Bot, Atom, Param, And, Or, Not };

struct TypeExpr;
using TypeExprPtr = std::shared_ptr<const TypeExpr>;

struct TypeExpr {
  TypeKind kind;
  std::string name;               // Atom: constructor; Param: parameter name
  std::vector<TypeExprPtr> args;  // Atom: ctor args; And/Or: 2; Not: 1
};

TypeExprPtr top();
TypeExprPtr bot();
TypeExprPtr atom(std::string ctor, std::vector<TypeExprPtr> args = {});
TypeExprPtr param(std::string name);
TypeExprPtr conj(TypeExprPtr l, TypeExprPtr r);
TypeExprPtr disj(TypeExprPtr l, TypeExprPtr r);
TypeExprPtr neg(TypeExprPtr e);

// Top, Bot and constructor applications; the expressions rules can expand.
inline bool is_atom(const TypeExpr& e) {
  return e.kind == TypeKind::Top || e.kind == TypeKind::Bot ||
         e.kind == TypeKind::Atom;
}

// Total structural order; stable across runs (never compares addresses).
int cmp(const TypeExpr& a, const TypeExpr& b);
inline bool equal(const TypeExpr& a, const TypeExpr& b) { return cmp(a, b) == 0; }
inline bool expr_less(const TypeExprPtr& a, const TypeExprPtr& b) {
  return cmp(*a, *b) < 0;
}

std::size_t expr_height(const TypeExpr& e);  // leaves have height 1

// Canonical text with minimal structure-preserving parentheses; output
// reparses to a structurally equal expression.
std::string format_expr(const TypeExpr& e);

// ---------------------------------------------------------------------------
// Rule bodies: terms over function symbols, constructors and parameters.
// Arguments of FSym/Ctor nodes are again body terms, so unsimplified rules
// like "Even = s(s(Even))" are representable.

enum class BodyKind { FSym, Ctor, Param };

struct BodyTerm;
using BodyTermPtr = std::shared_ptr<const BodyTerm>;

struct BodyTerm {
  BodyKind kind;
  std::string name;
  std::vector<BodyTermPtr> args;
  int line = 0, col = 0;  // source position, when parsed from text
};

BodyTermPtr body_fsym(std::string name, std::vector<BodyTermPtr> args = {});
BodyTermPtr body_ctor(std::string name, std::vector<BodyTermPtr> args = {});
BodyTermPtr body_param(std::string name);

int cmp(const BodyTerm& a, const BodyTerm& b);
std::string format_body(const BodyTerm& b);

// ---------------------------------------------------------------------------
// Sequences of type expressions. Eps is the empty sequence denoting {()};
// Lambda is the empty sequence denoting nothing at all. Items sequences are
// nonempty and their length is the dimension.

struct Sequence {
  enum class Kind { Eps, Lambda, Items };
  Kind kind = Kind::Eps;
  std::vector<TypeExprPtr> items;

  std::size_t dim() const { return items.size(); }
};

Sequence seq_eps();
Sequence seq_lambda();
Sequence seq_items(std::vector<TypeExprPtr> items);

int cmp(const Sequence& a, const Sequence& b);
inline bool seq_less(const Sequence& a, const Sequence& b) { return cmp(a, b) < 0; }
inline bool seq_equal(const Sequence& a, const Sequence& b) { return cmp(a, b) == 0; }
std::string format_seq(const Sequence& s);

// Conjunctions/disjunctions of sequences of one common dimension.
struct SeqExpr;
using SeqExprPtr = std::shared_ptr<const SeqExpr>;

struct SeqExpr {
  enum class Kind { Leaf, And, Or };
  Kind kind = Kind::Leaf;
  Sequence leaf;
  SeqExprPtr lhs, rhs;
  std::size_t dimension = 0;
};

SeqExprPtr seq_leaf(Sequence s);
SeqExprPtr seq_and(SeqExprPtr l, SeqExprPtr r);
SeqExprPtr seq_or(SeqExprPtr l, SeqExprPtr r);
std::string format_seq_expr(const SeqExpr& e);

}  // namespace rtypes
