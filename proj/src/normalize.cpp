#include "rtypes/normalize.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace rtypes {

// ---------------------------------------------------------------------------
// Canonical forms

namespace {

void flatten_into(TypeKind k, const TypeExprPtr& e, std::vector<TypeExprPtr>& out) {
  if (e->kind == k) {
    flatten_into(k, e->args[0], out);
    flatten_into(k, e->args[1], out);
  } else {
    out.push_back(e);
  }
}

void sort_unique(std::vector<TypeExprPtr>& v) {
  std::sort(v.begin(), v.end(), expr_less);
  v.erase(std::unique(v.begin(), v.end(),
                      [](const TypeExprPtr& a, const TypeExprPtr& b) {
                        return equal(*a, *b);
                      }),
          v.end());
}

TypeExprPtr rebuild(TypeKind k, const std::vector<TypeExprPtr>& ops) {
  TypeExprPtr acc = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i)
    acc = k == TypeKind::And ? conj(acc, ops[i]) : disj(acc, ops[i]);
  return acc;
}

}  // namespace

TypeExprPtr canonical(const TypeExprPtr& e) {
  switch (e->kind) {
    case TypeKind::Top:
    case TypeKind::Bot:
    case TypeKind::Param:
      return e;
    case TypeKind::Atom: {
      std::vector<TypeExprPtr> args;
      args.reserve(e->args.size());
      for (const auto& a : e->args) args.push_back(canonical(a));
      return atom(e->name, std::move(args));
    }
    case TypeKind::Not: {
      TypeExprPtr inner = canonical(e->args[0]);
      if (inner->kind == TypeKind::Not) return inner->args[0];
      if (inner->kind == TypeKind::Top) return bot();
      if (inner->kind == TypeKind::Bot) return top();
      return neg(std::move(inner));
    }
    case TypeKind::And:
    case TypeKind::Or: {
      std::vector<TypeExprPtr> raw, ops;
      flatten_into(e->kind, e, raw);
      ops.reserve(raw.size());
      for (const auto& o : raw) {
        TypeExprPtr c = canonical(o);
        // canonicalizing an operand may expose another nested chain
        if (c->kind == e->kind) flatten_into(e->kind, c, ops);
        else ops.push_back(std::move(c));
      }
      sort_unique(ops);
      return ops.size() == 1 ? ops.front() : rebuild(e->kind, ops);
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Conjunctive type expressions

namespace {

int cmp_atom_vec(const std::vector<TypeExprPtr>& a, const std::vector<TypeExprPtr>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = cmp(*a[i], *b[i])) return c;
  return 0;
}

bool atom_vec_superset(const std::vector<TypeExprPtr>& big,
                       const std::vector<TypeExprPtr>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end(), expr_less);
}

}  // namespace

int cmp(const Conjunct& a, const Conjunct& b) {
  if (int c = cmp_atom_vec(a.pos, b.pos)) return c;
  return cmp_atom_vec(a.neg, b.neg);
}

bool lit_superset(const Conjunct& big, const Conjunct& small) {
  return atom_vec_superset(big.pos, small.pos) && atom_vec_superset(big.neg, small.neg);
}

TypeExprPtr conjunct_expr(const Conjunct& c) {
  TypeExprPtr acc;
  for (const auto& a : c.pos) acc = acc ? conj(acc, a) : a;
  for (const auto& a : c.neg) {
    TypeExprPtr lit = neg(a);
    acc = acc ? conj(acc, lit) : lit;
  }
  return acc ? acc : top();
}

std::string format_conjunct(const Conjunct& c) {
  std::string out;
  for (const auto& a : c.pos) {
    if (!out.empty()) out += " & ";
    out += format_expr(*a);
  }
  for (const auto& a : c.neg) {
    if (!out.empty()) out += " & ";
    out += '!';
    const bool parens = a->kind == TypeKind::And || a->kind == TypeKind::Or;
    if (parens) out += '(';
    out += format_expr(*a);
    if (parens) out += ')';
  }
  return out;
}

// ---------------------------------------------------------------------------
// DNF of type expressions

namespace {

void insert_atom(std::vector<TypeExprPtr>& v, const TypeExprPtr& a) {
  auto it = std::lower_bound(v.begin(), v.end(), a, expr_less);
  if (it == v.end() || !equal(**it, *a)) v.insert(it, a);
}

// pos never empty: top stands in, and a redundant top is dropped again as
// soon as another positive literal is present. bot stays: the engine
// resolves it through its empty functor set.
void tidy_conjunct(Conjunct& c) {
  if (c.pos.size() > 1 && c.pos.front()->kind == TypeKind::Top)
    c.pos.erase(c.pos.begin());
  if (c.pos.empty()) c.pos.push_back(top());
}

struct DnfBuilder {
  std::size_t limit = 0;
  std::size_t literals = 0;

  void charge(std::size_t n) {
    literals += n;
    if (literals > limit) throw limit_error("dnf size limit exceeded");
  }

  std::vector<Conjunct> literal(TypeExprPtr a, bool positive) {
    Conjunct c;
    if (positive) {
      c.pos.push_back(std::move(a));
    } else {
      c.pos.push_back(top());
      c.neg.push_back(std::move(a));
    }
    charge(c.pos.size() + c.neg.size());
    return {std::move(c)};
  }

  static void sort_conjuncts(std::vector<Conjunct>& v) {
    std::sort(v.begin(), v.end(),
              [](const Conjunct& a, const Conjunct& b) { return cmp(a, b) < 0; });
    v.erase(std::unique(v.begin(), v.end(),
                        [](const Conjunct& a, const Conjunct& b) {
                          return cmp(a, b) == 0;
                        }),
            v.end());
  }

  std::vector<Conjunct> merge_union(std::vector<Conjunct> a, std::vector<Conjunct> b) {
    a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
    sort_conjuncts(a);
    return a;
  }

  std::vector<Conjunct> cross(const std::vector<Conjunct>& a,
                              const std::vector<Conjunct>& b) {
    std::vector<Conjunct> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
      for (const auto& y : b) {
        Conjunct c = x;
        for (const auto& p : y.pos) insert_atom(c.pos, p);
        for (const auto& n : y.neg) insert_atom(c.neg, n);
        tidy_conjunct(c);
        charge(c.pos.size() + c.neg.size());
        out.push_back(std::move(c));
      }
    }
    sort_conjuncts(out);
    return out;
  }

  std::vector<Conjunct> run(const TypeExprPtr& e, bool positive) {
    const auto key = std::make_pair(e.get(), positive);
    auto hit = memo.find(key);
    if (hit != memo.end()) return hit->second;
    std::vector<Conjunct> out;
    switch (e->kind) {
      // !top and !bot fold to positive bot/top literals right away, so
      // negated literals are always constructor atoms.
      case TypeKind::Top: out = literal(positive ? top() : bot(), true); break;
      case TypeKind::Bot: out = literal(positive ? bot() : top(), true); break;
      case TypeKind::Atom: out = literal(canonical(e), positive); break;
      case TypeKind::Param:
        throw semantic_error("parameter '" + e->name + "' in a query expression");
      case TypeKind::Not: out = run(e->args[0], !positive); break;
      case TypeKind::And:
        out = positive ? cross(run(e->args[0], true), run(e->args[1], true))
                       : merge_union(run(e->args[0], false), run(e->args[1], false));
        break;
      case TypeKind::Or:
        out = positive ? merge_union(run(e->args[0], true), run(e->args[1], true))
                       : cross(run(e->args[0], false), run(e->args[1], false));
        break;
    }
    memo.emplace(key, out);
    return out;
  }

  std::map<std::pair<const TypeExpr*, bool>, std::vector<Conjunct>> memo;
};

}  // namespace

std::vector<Conjunct> dnf(const TypeExprPtr& e, std::size_t limit) {
  DnfBuilder b;
  b.limit = limit;
  return b.run(e, true);
}

// ---------------------------------------------------------------------------
// Sequence complement

SeqExprPtr complement_sequences(const std::vector<Sequence>& seqs, std::size_t k) {
  if (seqs.empty()) {
    if (k == 0) return seq_leaf(seq_eps());
    return seq_leaf(seq_items(std::vector<TypeExprPtr>(k, top())));
  }
  SeqExprPtr acc;
  for (const auto& s : seqs) {
    if (s.dim() != k) throw semantic_error("sequence dimension mismatch");
    SeqExprPtr part;
    switch (s.kind) {
      case Sequence::Kind::Eps:
        part = seq_leaf(seq_lambda());
        break;
      case Sequence::Kind::Lambda:
        part = seq_leaf(seq_eps());
        break;
      case Sequence::Kind::Items: {
        for (std::size_t l = 0; l < s.items.size(); ++l) {
          std::vector<TypeExprPtr> items(s.items.size(), top());
          items[l] = neg(s.items[l]);
          SeqExprPtr alt = seq_leaf(seq_items(std::move(items)));
          part = part ? seq_or(part, alt) : alt;
        }
        break;
      }
    }
    acc = acc ? seq_and(acc, part) : part;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// DNF of sequence expressions

int cmp(const ConjSeq& a, const ConjSeq& b) {
  if (a.seqs.size() != b.seqs.size()) return a.seqs.size() < b.seqs.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.seqs.size(); ++i)
    if (int c = cmp(a.seqs[i], b.seqs[i])) return c;
  return 0;
}

std::string format_conj_seq(const ConjSeq& g) {
  std::string out;
  for (const auto& s : g.seqs) {
    if (!out.empty()) out += " & ";
    out += format_seq(s);
  }
  return out;
}

namespace {

void sort_conj_seqs(std::vector<ConjSeq>& v) {
  std::sort(v.begin(), v.end(),
            [](const ConjSeq& a, const ConjSeq& b) { return cmp(a, b) < 0; });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const ConjSeq& a, const ConjSeq& b) { return cmp(a, b) == 0; }),
          v.end());
}

std::vector<ConjSeq> seq_dnf_rec(const SeqExprPtr& e, std::size_t limit, std::size_t& total) {
  auto charge = [&](std::size_t n) {
    total += n;
    if (total > limit) throw limit_error("sequence dnf size limit exceeded");
  };
  switch (e->kind) {
    case SeqExpr::Kind::Leaf: {
      charge(1);
      return {ConjSeq{{e->leaf}}};
    }
    case SeqExpr::Kind::Or: {
      std::vector<ConjSeq> out = seq_dnf_rec(e->lhs, limit, total);
      std::vector<ConjSeq> rhs = seq_dnf_rec(e->rhs, limit, total);
      out.insert(out.end(), std::make_move_iterator(rhs.begin()),
                 std::make_move_iterator(rhs.end()));
      sort_conj_seqs(out);
      return out;
    }
    case SeqExpr::Kind::And: {
      std::vector<ConjSeq> lhs = seq_dnf_rec(e->lhs, limit, total);
      std::vector<ConjSeq> rhs = seq_dnf_rec(e->rhs, limit, total);
      std::vector<ConjSeq> out;
      out.reserve(lhs.size() * rhs.size());
      for (const auto& x : lhs) {
        for (const auto& y : rhs) {
          ConjSeq g = x;
          for (const auto& s : y.seqs) {
            auto it = std::lower_bound(g.seqs.begin(), g.seqs.end(), s, seq_less);
            if (it == g.seqs.end() || !seq_equal(*it, s)) g.seqs.insert(it, s);
          }
          charge(g.seqs.size());
          out.push_back(std::move(g));
        }
      }
      sort_conj_seqs(out);
      return out;
    }
  }
  return {};
}

}  // namespace

std::vector<ConjSeq> seq_dnf(const SeqExprPtr& e, std::size_t limit) {
  std::size_t total = 0;
  return seq_dnf_rec(e, limit, total);
}

// ---------------------------------------------------------------------------
// Top-level and relevant atoms

namespace {

void top_level_atoms_into(const TypeExprPtr& e, std::vector<TypeExprPtr>& out) {
  switch (e->kind) {
    case TypeKind::Top:
    case TypeKind::Bot:
      return;
    case TypeKind::Param:
      throw semantic_error("parameter '" + e->name + "' in a query expression");
    case TypeKind::Atom:
      insert_atom(out, canonical(e));
      return;
    case TypeKind::And:
    case TypeKind::Or:
    case TypeKind::Not:
      for (const auto& a : e->args) top_level_atoms_into(a, out);
      return;
  }
}

}  // namespace

std::vector<TypeExprPtr> top_level_atoms(const TypeExprPtr& e) {
  std::vector<TypeExprPtr> out;
  top_level_atoms_into(e, out);
  return out;
}

TypeExprPtr instantiate_arg(const BodyTerm& arg,
                            const std::vector<std::string>& params,
                            const std::vector<TypeExprPtr>& actuals) {
  switch (arg.kind) {
    case BodyKind::Param: {
      for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i] == arg.name) return actuals[i];
      throw std::logic_error("unbound parameter '" + arg.name + "' in rule body");
    }
    case BodyKind::Ctor: {
      std::vector<TypeExprPtr> args;
      args.reserve(arg.args.size());
      for (const auto& a : arg.args) args.push_back(instantiate_arg(*a, params, actuals));
      return atom(arg.name, std::move(args));
    }
    case BodyKind::FSym:
      throw std::logic_error("function symbol '" + arg.name +
                             "' in a rule argument: definitions are not simplified");
  }
  throw std::logic_error("unreachable");
}

std::vector<TypeExprPtr> relevant_atoms(const TypeExprPtr& e, const TypeDefs& defs) {
  if (!defs.simplified)
    throw semantic_error("relevant_atoms requires simplified definitions");
  std::vector<TypeExprPtr> done = top_level_atoms(e);
  std::deque<TypeExprPtr> work(done.begin(), done.end());
  while (!work.empty()) {
    TypeExprPtr a = work.front();
    work.pop_front();
    if (a->kind != TypeKind::Atom) continue;
    if (!defs.ctors.contains(a->name))
      throw semantic_error("unknown constructor '" + a->name + "'");
    for (std::size_t ri : defs.rules_of(a->name)) {
      const TypeRule& r = defs.rules[ri];
      for (const auto& arg : r.body->args) {
        TypeExprPtr inst = instantiate_arg(*arg, r.params, a->args);
        for (const auto& b : top_level_atoms(inst)) {
          auto it = std::lower_bound(done.begin(), done.end(), b, expr_less);
          if (it == done.end() || !equal(**it, *b)) {
            done.insert(it, b);
            work.push_back(b);
          }
        }
      }
    }
  }
  return done;
}

// ---------------------------------------------------------------------------
// Simplification of definitions

namespace {

// Positional rendering of a body term, used both as the alias-cycle key and
// as the hoisting memo key (parameter names abstracted away).
std::string body_key(const BodyTerm& b, const std::vector<std::string>& params) {
  switch (b.kind) {
    case BodyKind::Param: {
      for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i] == b.name) return "$" + std::to_string(i);
      throw std::logic_error("unbound parameter '" + b.name + "'");
    }
    case BodyKind::FSym:
    case BodyKind::Ctor: {
      std::string out = b.kind == BodyKind::FSym ? "f:" : "c:";
      out += b.name;
      out += '(';
      for (std::size_t i = 0; i < b.args.size(); ++i) {
        if (i) out += ',';
        out += body_key(*b.args[i], params);
      }
      out += ')';
      return out;
    }
  }
  return {};
}

BodyTermPtr substitute_body(const BodyTermPtr& b,
                            const std::vector<std::string>& params,
                            const std::vector<BodyTermPtr>& actuals) {
  if (b->kind == BodyKind::Param) {
    for (std::size_t i = 0; i < params.size(); ++i)
      if (params[i] == b->name) return actuals[i];
    throw std::logic_error("unbound parameter '" + b->name + "'");
  }
  std::vector<BodyTermPtr> args;
  args.reserve(b->args.size());
  for (const auto& a : b->args) args.push_back(substitute_body(a, params, actuals));
  return b->kind == BodyKind::FSym ? body_fsym(b->name, std::move(args))
                                   : body_ctor(b->name, std::move(args));
}

void params_mentioned(const BodyTerm& b, std::vector<std::string>& out) {
  if (b.kind == BodyKind::Param) {
    if (std::find(out.begin(), out.end(), b.name) == out.end()) out.push_back(b.name);
    return;
  }
  for (const auto& a : b.args) params_mentioned(*a, out);
}

bool conforming_arg(const BodyTerm& b) {
  if (b.kind == BodyKind::Param) return true;
  if (b.kind != BodyKind::Ctor) return false;
  for (const auto& a : b.args)
    if (a->kind != BodyKind::Param) return false;
  return true;
}

std::size_t body_size(const BodyTerm& b) {
  std::size_t n = 1;
  for (const auto& a : b.args) n += body_size(*a);
  return n;
}

struct FlatRule {
  std::string ctor;
  std::vector<std::string> params;
  BodyTermPtr body;
};

// Unfolds alias (constructor-rooted) bodies against the original rules until
// every derived body is function-rooted. Cyclic alias chains reach no
// function symbol and contribute nothing, which matches the least-fixpoint
// reading of the definitions.
struct AliasChaser {
  const TypeDefs& defs;
  std::size_t fuel = 2000;

  void chase(const std::string& ctor, const std::vector<std::string>& params,
             const BodyTermPtr& body, std::set<std::string>& visited,
             std::vector<FlatRule>& out) {
    if (body->kind == BodyKind::FSym) {
      out.push_back(FlatRule{ctor, params, body});
      return;
    }
    if (body->kind == BodyKind::Param)
      throw std::logic_error("parameter-rooted rule body");
    // Self-duplicating alias substitutions can grow bodies exponentially;
    // both guards turn such definitions into an error rather than a hang.
    if (body_size(*body) > 4096)
      throw limit_error("alias rules expand without bound (constructor '" + ctor + "')");
    const std::string key = body_key(*body, params);
    if (!visited.insert(key).second) return;
    if (fuel-- == 0)
      throw limit_error("alias rules expand without bound (constructor '" + ctor + "')");
    for (std::size_t ri : defs.rules_of(body->name)) {
      const TypeRule& target = defs.rules[ri];
      chase(ctor, params, substitute_body(target.body, target.params, body->args),
            visited, out);
    }
  }
};

}  // namespace

TypeDefs simplify(const TypeDefs& defs) {
  if (defs.simplified) return defs;

  AliasChaser chaser{defs};
  std::deque<FlatRule> work;
  for (const auto& r : defs.rules) {
    std::set<std::string> visited;
    std::vector<FlatRule> flat;
    chaser.chase(r.ctor, r.params, r.body, visited, flat);
    for (auto& fr : flat) work.push_back(std::move(fr));
  }

  TypeDefs out;
  out.sig = defs.sig;
  out.ctors = defs.ctors;
  out.simplified = true;

  std::map<std::string, std::string> hoisted;  // body key -> aux constructor
  std::set<std::string> emitted;               // per-constructor body dedupe
  std::size_t aux_counter = 0;

  while (!work.empty()) {
    FlatRule r = std::move(work.front());
    work.pop_front();

    if (r.body->kind == BodyKind::Ctor) {
      // An aux constructor hoisted from a constructor-rooted argument: one
      // unfolding step against the already-flattened target rules.
      std::set<std::string> visited;
      std::vector<FlatRule> flat;
      chaser.chase(r.ctor, r.params, r.body, visited, flat);
      for (auto it = flat.rbegin(); it != flat.rend(); ++it)
        work.push_front(std::move(*it));
      continue;
    }

    std::vector<BodyTermPtr> args = r.body->args;
    for (auto& a : args) {
      if (conforming_arg(*a)) continue;
      std::vector<std::string> used;
      params_mentioned(*a, used);
      const std::string key = body_key(*a, used);
      auto it = hoisted.find(key);
      if (it == hoisted.end()) {
        const std::string name = "_aux" + std::to_string(++aux_counter);
        it = hoisted.emplace(key, name).first;
        out.ctors.arity[name] = used.size();
        work.push_back(FlatRule{name, used, a});
      }
      std::vector<BodyTermPtr> actuals;
      actuals.reserve(used.size());
      for (const auto& p : used) actuals.push_back(body_param(p));
      a = body_ctor(it->second, std::move(actuals));
    }
    BodyTermPtr body = body_fsym(r.body->name, std::move(args));
    if (emitted.insert(r.ctor + "|" + body_key(*body, r.params)).second)
      out.rules.push_back(TypeRule{r.ctor, std::move(r.params), std::move(body)});
  }

  out.reindex();
  return out;
}

}  // namespace rtypes
