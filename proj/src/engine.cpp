#include "rtypes/engine.hpp"

#include <algorithm>

#include "json.hpp"
#include "rtypes/oracle.hpp"

namespace rtypes {

namespace {

bool sorted_intersects(const std::vector<TypeExprPtr>& a, const std::vector<TypeExprPtr>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const int c = cmp(*a[i], *b[j]);
    if (c == 0) return true;
    c < 0 ? ++i : ++j;
  }
  return false;
}

}  // namespace

struct DepthGuard {
  Engine& e;
  explicit DepthGuard(Engine& engine) : e(engine) {
    if (++e.depth_ > e.cfg_.recursion_limit) {
      --e.depth_;
      throw limit_error("recursion limit exceeded");
    }
  }
  ~DepthGuard() { --e.depth_; }
};

Engine::Engine(TypeDefs defs, EngineConfig cfg) : defs_(std::move(defs)), cfg_(cfg) {
  if (!defs_.simplified)
    throw semantic_error("the engine requires simplified definitions");
  if (cfg_.dnf_limit == 0 || cfg_.recursion_limit == 0)
    throw semantic_error("engine limits must be positive");
}

// ---------------------------------------------------------------------------
// Functor index

std::vector<std::string> Engine::principal_functors(const TypeExprPtr& a) {
  const TypeExprPtr key = canonical(a);
  auto hit = functor_memo_.find(key);
  if (hit != functor_memo_.end()) return hit->second;

  std::vector<std::string> out;
  switch (key->kind) {
    case TypeKind::Bot:
      break;
    case TypeKind::Top:
      for (const auto& [name, _] : defs_.sig.arity) out.push_back(name);
      break;
    case TypeKind::Atom: {
      if (!defs_.ctors.contains(key->name))
        throw semantic_error("unknown constructor '" + key->name + "'");
      for (std::size_t ri : defs_.rules_of(key->name))
        out.push_back(defs_.rules[ri].body->name);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      break;
    }
    default:
      throw semantic_error("principal_functors: not a type atom");
  }
  functor_memo_.emplace(key, out);
  return out;
}

std::vector<Sequence> Engine::arg_sequences(const TypeExprPtr& a, const std::string& f) {
  const TypeExprPtr key = canonical(a);
  const auto memo_key = std::make_pair(key, f);
  auto hit = arg_memo_.find(memo_key);
  if (hit != arg_memo_.end()) return hit->second;

  auto fit = defs_.sig.arity.find(f);
  if (fit == defs_.sig.arity.end())
    throw semantic_error("unknown function symbol '" + f + "'");
  const std::size_t k = fit->second;

  std::vector<Sequence> out;
  switch (key->kind) {
    case TypeKind::Bot:
      break;
    case TypeKind::Top:
      out.push_back(k == 0 ? seq_eps()
                           : seq_items(std::vector<TypeExprPtr>(k, top())));
      break;
    case TypeKind::Atom: {
      if (!defs_.ctors.contains(key->name))
        throw semantic_error("unknown constructor '" + key->name + "'");
      for (std::size_t ri : defs_.rules_of(key->name)) {
        const TypeRule& r = defs_.rules[ri];
        if (r.body->name != f) continue;
        if (k == 0) {
          out.push_back(seq_eps());
          continue;
        }
        std::vector<TypeExprPtr> items;
        items.reserve(k);
        for (const auto& arg : r.body->args)
          items.push_back(instantiate_arg(*arg, r.params, key->args));
        out.push_back(seq_items(std::move(items)));
      }
      std::sort(out.begin(), out.end(), seq_less);
      out.erase(std::unique(out.begin(), out.end(), seq_equal), out.end());
      break;
    }
    default:
      throw semantic_error("arg_sequences: not a type atom");
  }
  arg_memo_.emplace(memo_key, out);
  return out;
}

SeqExprPtr Engine::arg_constraint(const Conjunct& c, const std::string& f) {
  const std::size_t k = defs_.sig.arity.at(f);
  SeqExprPtr acc;
  for (const auto& omega : c.pos) {
    const auto alts = arg_sequences(omega, f);
    if (alts.empty())
      throw semantic_error("'" + f + "' is not a candidate root of the conjunct");
    SeqExprPtr u;
    for (const auto& s : alts) {
      SeqExprPtr leaf = seq_leaf(s);
      u = u ? seq_or(std::move(u), std::move(leaf)) : std::move(leaf);
    }
    acc = acc ? seq_and(std::move(acc), std::move(u)) : std::move(u);
  }
  for (const auto& tau : c.neg) {
    const auto alts = arg_sequences(tau, f);
    if (alts.empty()) continue;  // no f-rooted rule: excludes nothing
    acc = seq_and(std::move(acc), complement_sequences(alts, k));
  }
  return acc;
}

TypeExprPtr Engine::project(const ConjSeq& g, std::size_t j) {
  if (j < 1 || j > g.dim())
    throw semantic_error("projection index out of range");
  TypeExprPtr acc;
  for (const auto& s : g.seqs) {
    const TypeExprPtr& item = s.items[j - 1];
    acc = acc ? conj(acc, item) : item;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Trace helpers

TraceNode* Engine::add_child(TraceNode* parent, const char* kind, std::string arg,
                             const char* eq) {
  if (!parent) return nullptr;
  TraceNode n;
  n.kind = kind;
  n.arg = std::move(arg);
  n.eq = eq;
  n.table_size = table_.size();
  parent->children.push_back(std::move(n));
  return &parent->children.back();
}

void Engine::add_pruned(TraceNode* parent, const char* kind, std::string arg) {
  if (!parent) return;
  TraceNode n;
  n.kind = kind;
  n.arg = std::move(arg);
  n.table_size = table_.size();
  n.pruned = true;
  parent->children.push_back(std::move(n));
}

std::vector<Conjunct> Engine::dnf_counted(const TypeExprPtr& e) {
  auto out = dnf(e, cfg_.dnf_limit);
  stats_.dnf_max = std::max(stats_.dnf_max, out.size());
  return out;
}

std::vector<ConjSeq> Engine::seq_dnf_counted(const SeqExprPtr& e) {
  auto out = seq_dnf(e, cfg_.dnf_limit);
  stats_.dnf_max = std::max(stats_.dnf_max, out.size());
  return out;
}

// ---------------------------------------------------------------------------
// The four mutually recursive checks. Each returns true iff its argument is
// empty under the conjuncts currently tabled.

bool Engine::expr_empty(const TypeExprPtr& e, TraceNode* parent, const std::string& label) {
  DepthGuard guard(*this);
  TraceNode* tn = add_child(parent, "etype", label + format_expr(*e), "dnf");
  ++stats_.etype_nodes;
  const auto conjuncts = dnf_counted(e);
  bool verdict = true;
  for (std::size_t i = 0; i < conjuncts.size(); ++i) {
    if (!conj_empty(conjuncts[i], tn)) {
      verdict = false;
      for (std::size_t j = i + 1; j < conjuncts.size(); ++j)
        add_pruned(tn, "etype_conj", format_conjunct(conjuncts[j]));
      break;
    }
  }
  if (tn) tn->verdict = verdict;
  return verdict;
}

bool Engine::conj_empty(const Conjunct& c, TraceNode* parent) {
  DepthGuard guard(*this);
  TraceNode* tn = add_child(parent, "etype_conj", format_conjunct(c), "expand");
  ++stats_.etype_conj_nodes;

  // A literal and its complement: empty outright, and never tabled.
  if (sorted_intersects(c.pos, c.neg)) {
    if (tn) { tn->eq = "overlap"; tn->verdict = true; }
    return true;
  }
  // Subsumption: a superset of a tabled literal set denotes a subset.
  for (const auto& tabled : table_) {
    if (lit_superset(c, tabled)) {
      if (tn) { tn->eq = "table-hit"; tn->verdict = true; }
      return true;
    }
  }

  const auto fs = functor_intersection(c.pos);
  bool verdict = true;
  if (!fs.empty()) {
    table_.push_back(c);
    stats_.max_table = std::max(stats_.max_table, table_.size());
    if (observer_) observer_(c);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (!seq_expr_empty(arg_constraint(c, fs[i]), fs[i], tn)) {
        verdict = false;
        for (std::size_t j = i + 1; j < fs.size(); ++j)
          add_pruned(tn, "eseq", "f=" + fs[j]);
        break;
      }
    }
    table_.pop_back();
  }
  if (tn) tn->verdict = verdict;
  return verdict;
}

bool Engine::seq_expr_empty(const SeqExprPtr& theta, const std::string& f, TraceNode* parent) {
  DepthGuard guard(*this);
  TraceNode* tn = add_child(parent, "eseq", "f=" + f + ": " + format_seq_expr(*theta), "dnf");
  ++stats_.eseq_nodes;
  const auto gammas = seq_dnf_counted(theta);
  bool verdict = true;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!conj_seq_empty(gammas[i], tn)) {
      verdict = false;
      for (std::size_t j = i + 1; j < gammas.size(); ++j)
        add_pruned(tn, "eseq_conj", format_conj_seq(gammas[j]));
      break;
    }
  }
  if (tn) tn->verdict = verdict;
  return verdict;
}

bool Engine::conj_seq_empty(const ConjSeq& g, TraceNode* parent) {
  DepthGuard guard(*this);
  TraceNode* tn = add_child(parent, "eseq_conj", format_conj_seq(g), "project");
  ++stats_.eseq_conj_nodes;

  const std::size_t k = g.dim();
  if (k == 0) {
    // A dimension-0 conjunction denotes the empty tuple unless the
    // nothing-denoting empty sequence occurs among its conjuncts.
    bool has_lambda = false;
    for (const auto& s : g.seqs)
      if (s.kind == Sequence::Kind::Lambda) { has_lambda = true; break; }
    if (tn) { tn->eq = has_lambda ? "lambda" : "epsilon"; tn->verdict = has_lambda; }
    return has_lambda;
  }

  bool verdict = false;
  for (std::size_t j = 1; j <= k; ++j) {
    const std::string label = "j=" + std::to_string(j) + ": ";
    if (expr_empty(project(g, j), tn, label)) {
      verdict = true;
      for (std::size_t l = j + 1; l <= k; ++l)
        add_pruned(tn, "etype", "j=" + std::to_string(l) + ": " + format_expr(*project(g, l)));
      break;
    }
  }
  if (tn) tn->verdict = verdict;
  return verdict;
}

std::vector<std::string> Engine::functor_intersection(const std::vector<TypeExprPtr>& pos) {
  std::vector<std::string> acc = principal_functors(pos.front());
  for (std::size_t i = 1; i < pos.size() && !acc.empty(); ++i) {
    const auto next = principal_functors(pos[i]);
    std::vector<std::string> merged;
    std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                          std::back_inserter(merged));
    acc = std::move(merged);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Public operations

Engine::Result Engine::check_empty(const TypeExprPtr& e) {
  table_.clear();
  stats_ = EngineStats{};
  depth_ = 0;

  Result res;
  res.trace = cfg_.trace ? std::make_shared<TraceNode>() : nullptr;
  TraceNode* root = res.trace.get();
  if (root) {
    root->kind = "etype";
    root->arg = format_expr(*e);
    root->eq = "init";
  }
  ++stats_.etype_nodes;
  res.empty = expr_empty(e, root, "");
  if (root) root->verdict = res.empty;
  res.stats = stats_;
  return res;
}

bool Engine::subtype(const TypeExprPtr& sub, const TypeExprPtr& super) {
  return check_empty(conj(sub, neg(super))).empty;
}

bool Engine::equivalent(const TypeExprPtr& a, const TypeExprPtr& b) {
  return subtype(a, b) && subtype(b, a);
}

// ---------------------------------------------------------------------------
// Witness extraction: re-walks the falsifying branch. A false verdict never
// comes from a table hit, so a nonempty conjunct always exposes a root
// symbol f and a sequence conjunction all of whose projections are nonempty;
// member terms of the projections assemble into a member term of the
// conjunct.

TermPtr Engine::witness_expr(const TypeExprPtr& e) {
  DepthGuard guard(*this);
  for (const auto& c : dnf_counted(e))
    if (!conj_empty(c, nullptr)) return witness_conj(c);
  throw std::logic_error("witness_expr: expression is empty");
}

TermPtr Engine::witness_conj(const Conjunct& c) {
  DepthGuard guard(*this);
  const auto fs = functor_intersection(c.pos);
  table_.push_back(c);
  for (const auto& f : fs) {
    for (const auto& g : seq_dnf_counted(arg_constraint(c, f))) {
      if (conj_seq_empty(g, nullptr)) continue;
      const std::size_t k = g.dim();
      std::vector<TermPtr> args;
      args.reserve(k);
      for (std::size_t j = 1; j <= k; ++j) args.push_back(witness_expr(project(g, j)));
      table_.pop_back();
      return make_term(f, std::move(args));
    }
  }
  table_.pop_back();
  throw std::logic_error("witness_conj: conjunct is empty");
}

std::optional<TermPtr> Engine::find_witness(const TypeExprPtr& e) {
  if (check_empty(e).empty) return std::nullopt;
  table_.clear();
  depth_ = 0;
  TermPtr w = witness_expr(e);
  if (!oracle::member(*w, *e, defs_))
    throw std::logic_error("engine produced witness " + format_term(*w) +
                           " that fails membership in " + format_expr(*e));
  return w;
}

// ---------------------------------------------------------------------------
// JSON rendering

namespace {

nlohmann::json trace_to_json(const TraceNode& t) {
  nlohmann::json j;
  j["kind"] = t.kind;
  j["arg"] = t.arg;
  j["eq"] = t.eq;
  j["table_size"] = t.table_size;
  j["verdict"] = t.verdict ? nlohmann::json(*t.verdict) : nlohmann::json(nullptr);
  j["pruned"] = t.pruned;
  auto children = nlohmann::json::array();
  for (const auto& c : t.children) children.push_back(trace_to_json(c));
  j["children"] = std::move(children);
  return j;
}

}  // namespace

std::string trace_json(const TraceNode& t) { return trace_to_json(t).dump(1); }

std::string stats_json(const EngineStats& s) {
  nlohmann::json j;
  j["max_table"] = s.max_table;
  j["nodes_by_kind"] = {{"etype", s.etype_nodes},
                        {"etype_conj", s.etype_conj_nodes},
                        {"eseq", s.eseq_nodes},
                        {"eseq_conj", s.eseq_conj_nodes}};
  j["dnf_max"] = s.dnf_max;
  return j.dump();
}

}  // namespace rtypes
