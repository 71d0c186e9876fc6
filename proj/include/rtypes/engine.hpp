#pragma once

// The tabled emptiness decision procedure over simplified definitions, and
// the inclusion / equivalence / witness operations derived from it.
//
// A query alternates between two reductions: the emptiness of a conjunction
// of type literals reduces, per candidate root symbol, to the emptiness of a
// sequence expression constraining that symbol's arguments; the emptiness of
// a conjunction of sequences reduces to the emptiness of one of its
// component-wise projections. A table of conjuncts assumed empty along the
// current path breaks recursive loops: a conjunct whose literal set contains
// a tabled conjunct's literals denotes a subset of it, so its emptiness may
// be assumed too.

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "rtypes/normalize.hpp"

namespace rtypes {

struct EngineConfig {
  std::size_t dnf_limit = 1000000;    // max literals across a DNF
  bool trace = false;
  std::size_t recursion_limit = 4096; // max evaluation depth
};

struct EngineStats {
  std::size_t max_table = 0;
  std::size_t etype_nodes = 0;
  std::size_t etype_conj_nodes = 0;
  std::size_t eseq_nodes = 0;
  std::size_t eseq_conj_nodes = 0;
  std::size_t dnf_max = 0;            // largest DNF encountered
};

std::string stats_json(const EngineStats& s);

// Mirrors the evaluation tree. Short-circuited siblings appear as children
// with pruned = true and no verdict.
struct TraceNode {
  std::string kind;  // etype | etype_conj | eseq | eseq_conj
  std::string arg;
  std::string eq;    // init | dnf | overlap | table-hit | expand | lambda | epsilon | project
  std::size_t table_size = 0;
  std::optional<bool> verdict;
  bool pruned = false;
  std::vector<TraceNode> children;
};

std::string trace_json(const TraceNode& t);

class Engine {
 public:
  // defs must be simplified; the engine keeps its own copy.
  explicit Engine(TypeDefs defs, EngineConfig cfg = {});

  struct Result {
    bool empty;
    EngineStats stats;
    std::shared_ptr<TraceNode> trace;  // null unless tracing was enabled
  };

  // True result iff e denotes no ground term. Throws limit_error when a
  // configured limit is exceeded (never a wrong verdict).
  Result check_empty(const TypeExprPtr& e);

  bool subtype(const TypeExprPtr& sub, const TypeExprPtr& super);
  bool equivalent(const TypeExprPtr& a, const TypeExprPtr& b);

  // A ground term denoted by e, or nothing iff e is empty. Every returned
  // term is re-checked against the brute-force membership oracle; failure
  // of that check is an engine bug and throws logic_error.
  std::optional<TermPtr> find_witness(const TypeExprPtr& e);

  // Root function symbols of ground terms denoted by an atom.
  std::vector<std::string> principal_functors(const TypeExprPtr& a);
  // Argument sequences of an atom's rules with root f, instantiated.
  std::vector<Sequence> arg_sequences(const TypeExprPtr& a, const std::string& f);
  // The sequence expression whose emptiness, over all candidate roots,
  // decides the conjunct's emptiness; dimension arity(f). Negative atoms
  // without an f-rooted rule constrain nothing and are dropped.
  SeqExprPtr arg_constraint(const Conjunct& c, const std::string& f);
  // Conjunction of the j-th components (1-based) of a sequence conjunction.
  static TypeExprPtr project(const ConjSeq& g, std::size_t j);

  // Test hook: observes each conjunct as it is tabled.
  void set_table_observer(std::function<void(const Conjunct&)> fn) {
    observer_ = std::move(fn);
  }

 private:
  friend struct DepthGuard;

  bool expr_empty(const TypeExprPtr& e, TraceNode* parent, const std::string& label);
  bool conj_empty(const Conjunct& c, TraceNode* parent);
  bool seq_expr_empty(const SeqExprPtr& theta, const std::string& f, TraceNode* parent);
  bool conj_seq_empty(const ConjSeq& g, TraceNode* parent);

  TermPtr witness_expr(const TypeExprPtr& e);
  TermPtr witness_conj(const Conjunct& c);

  std::vector<std::string> functor_intersection(const std::vector<TypeExprPtr>& pos);
  TraceNode* add_child(TraceNode* parent, const char* kind, std::string arg,
                       const char* eq);
  void add_pruned(TraceNode* parent, const char* kind, std::string arg);
  std::vector<Conjunct> dnf_counted(const TypeExprPtr& e);
  std::vector<ConjSeq> seq_dnf_counted(const SeqExprPtr& e);

  struct ExprPtrLess {
    bool operator()(const TypeExprPtr& a, const TypeExprPtr& b) const {
      return cmp(*a, *b) < 0;
    }
  };
  struct AtomSymLess {
    bool operator()(const std::pair<TypeExprPtr, std::string>& a,
                    const std::pair<TypeExprPtr, std::string>& b) const {
      if (int c = cmp(*a.first, *b.first)) return c < 0;
      return a.second < b.second;
    }
  };

  TypeDefs defs_;
  EngineConfig cfg_;
  std::vector<Conjunct> table_;
  EngineStats stats_;
  std::size_t depth_ = 0;
  std::function<void(const Conjunct&)> observer_;
  std::map<TypeExprPtr, std::vector<std::string>, ExprPtrLess> functor_memo_;
  std::map<std::pair<TypeExprPtr, std::string>, std::vector<Sequence>, AtomSymLess> arg_memo_;
};

}  // namespace rtypes
