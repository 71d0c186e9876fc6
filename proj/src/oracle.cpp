#include "rtypes/oracle.hpp"

#include <memory>
#include <set>

#include "json.hpp"
#include "rtypes/engine.hpp"
#include "rtypes/normalize.hpp"

namespace rtypes::oracle {

namespace {

// A type position during evaluation: either a query expression or a rule
// body term closed over the bindings of the rule head it came from.
struct Env;
struct ArgVal {
  const TypeExpr* expr = nullptr;
  const BodyTerm* body = nullptr;
  std::shared_ptr<const Env> env;
};

struct Env {
  std::vector<std::string> names;
  std::vector<ArgVal> vals;

  const ArgVal& lookup(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return vals[i];
    throw std::logic_error("unbound parameter '" + name + "'");
  }
};

class Eval {
 public:
  explicit Eval(const TypeDefs& defs) : defs_(defs) {}

  bool expr_member(const Term& t, const TypeExpr& e) {
    Guard g(*this);
    switch (e.kind) {
      case TypeKind::Top: return true;
      case TypeKind::Bot: return false;
      case TypeKind::And: return expr_member(t, *e.args[0]) && expr_member(t, *e.args[1]);
      case TypeKind::Or: return expr_member(t, *e.args[0]) || expr_member(t, *e.args[1]);
      case TypeKind::Not: return !expr_member(t, *e.args[0]);
      case TypeKind::Param:
        throw semantic_error("parameter '" + e.name + "' in a query expression");
      case TypeKind::Atom: {
        std::vector<ArgVal> actuals;
        actuals.reserve(e.args.size());
        for (const auto& a : e.args) actuals.push_back(ArgVal{a.get(), nullptr, nullptr});
        return ctor_member(t, e.name, std::move(actuals));
      }
    }
    return false;
  }

 private:
  // Depth guard: deep enough for every sane input, and an error rather than
  // a stack overflow on a pathological one.
  struct Guard {
    Eval& ev;
    explicit Guard(Eval& e) : ev(e) {
      if (++ev.depth_ > 100000) throw limit_error("oracle recursion limit exceeded");
    }
    ~Guard() { --ev.depth_; }
  };

  bool ctor_member(const Term& t, const std::string& ctor, std::vector<ArgVal> actuals) {
    if (!defs_.ctors.contains(ctor))
      throw semantic_error("unknown constructor '" + ctor + "'");
    // Unfolding a constructor at the same term twice on one path proves
    // nothing new: under the least-fixpoint reading such loops denote
    // nothing, so the repeat evaluates to false.
    std::string key = format_term(t);
    key += '@';
    key += ctor;
    key += '(';
    for (const auto& a : actuals) {
      render_val(a, key);
      key += ',';
    }
    key += ')';
    if (!path_.insert(key).second) return false;

    bool found = false;
    for (std::size_t ri : defs_.rules_of(ctor)) {
      const TypeRule& r = defs_.rules[ri];
      auto env = std::make_shared<Env>();
      env->names = r.params;
      env->vals = actuals;
      if (body_match(t, *r.body, env)) {
        found = true;
        break;
      }
    }
    path_.erase(key);
    return found;
  }

  bool body_match(const Term& t, const BodyTerm& b, const std::shared_ptr<const Env>& env) {
    Guard g(*this);
    switch (b.kind) {
      case BodyKind::Param: {
        const ArgVal& v = env->lookup(b.name);
        return v.expr ? expr_member(t, *v.expr) : body_match(t, *v.body, v.env);
      }
      case BodyKind::FSym: {
        if (t.root != b.name || t.args.size() != b.args.size()) return false;
        for (std::size_t i = 0; i < t.args.size(); ++i)
          if (!body_match(*t.args[i], *b.args[i], env)) return false;
        return true;
      }
      case BodyKind::Ctor: {
        std::vector<ArgVal> actuals;
        actuals.reserve(b.args.size());
        for (const auto& a : b.args) actuals.push_back(ArgVal{nullptr, a.get(), env});
        return ctor_member(t, b.name, std::move(actuals));
      }
    }
    return false;
  }

  void render_val(const ArgVal& v, std::string& out) const {
    if (v.expr) {
      out += format_expr(*canonical(std::make_shared<TypeExpr>(*v.expr)));
      return;
    }
    render_body(*v.body, v.env, out);
  }

  void render_body(const BodyTerm& b, const std::shared_ptr<const Env>& env,
                   std::string& out) const {
    if (b.kind == BodyKind::Param) {
      render_val(env->lookup(b.name), out);
      return;
    }
    out += b.name;
    if (!b.args.empty()) {
      out += '(';
      for (std::size_t i = 0; i < b.args.size(); ++i) {
        if (i) out += ',';
        render_body(*b.args[i], env, out);
      }
      out += ')';
    }
  }

  const TypeDefs& defs_;
  std::set<std::string> path_;
  std::size_t depth_ = 0;
};

}  // namespace

bool member(const Term& t, const TypeExpr& e, const TypeDefs& defs) {
  defs.check_term(t);
  return Eval(defs).expr_member(t, e);
}

namespace {

// Appends the terms of height exactly h, given that `all` holds every term
// of smaller height and `prev_level_start` indexes the start of height h-1.
void extend_level(const TypeDefs& defs, std::vector<TermPtr>& all, std::size_t h,
                  std::size_t prev_level_start) {
  if (h == 0) {
    for (const auto& [f, k] : defs.sig.arity)
      if (k == 0) all.push_back(make_term(f));
    return;
  }
  const std::size_t pool = all.size();  // terms of height < h
  for (const auto& [f, k] : defs.sig.arity) {
    if (k == 0 || pool == 0) continue;
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      // keep tuples with at least one argument of height exactly h-1
      bool tall = false;
      for (std::size_t i : idx)
        if (i >= prev_level_start) { tall = true; break; }
      if (tall) {
        std::vector<TermPtr> args;
        args.reserve(k);
        for (std::size_t i : idx) args.push_back(all[i]);
        all.push_back(make_term(f, std::move(args)));
      }
      // odometer over the pool of shorter terms
      std::size_t pos = k;
      while (pos > 0) {
        if (++idx[pos - 1] < pool) break;
        idx[pos - 1] = 0;
        --pos;
      }
      if (pos == 0) break;
    }
  }
}

}  // namespace

std::vector<TermPtr> enumerate_terms(const TypeDefs& defs, std::size_t depth) {
  std::vector<TermPtr> all;
  std::size_t prev_level_start = 0;
  for (std::size_t h = 0; h <= depth; ++h) {
    const std::size_t level_start = all.size();
    extend_level(defs, all, h, prev_level_start);
    if (all.size() == level_start && h > 0) break;  // no taller terms exist
    prev_level_start = level_start;
  }
  return all;
}

std::optional<TermPtr> search_member(const TypeExprPtr& e, const TypeDefs& defs,
                                     std::size_t depth) {
  // level by level, so an early member of a deep search space returns
  // without materializing the rest
  std::vector<TermPtr> all;
  std::size_t prev_level_start = 0, scanned = 0;
  for (std::size_t h = 0; h <= depth; ++h) {
    const std::size_t level_start = all.size();
    extend_level(defs, all, h, prev_level_start);
    if (all.size() == level_start && h > 0) break;
    prev_level_start = level_start;
    for (; scanned < all.size(); ++scanned)
      if (member(*all[scanned], *e, defs)) return all[scanned];
  }
  return std::nullopt;
}

std::string CrossReport::to_json() const {
  nlohmann::json j;
  j["verdict_engine"] = verdict_engine;
  j["verdict_oracle"] = verdict_oracle;
  if (witness) j["witness"] = *witness;
  j["depth"] = depth;
  j["contradiction"] = contradiction;
  j["seed"] = seed;
  return j.dump();
}

CrossReport cross_check(const TypeDefs& defs, const TypeExprPtr& e,
                        std::size_t depth, std::uint64_t seed) {
  CrossReport rep;
  rep.depth = depth;
  rep.seed = seed;

  const TypeDefs simplified = defs.simplified ? defs : simplify(defs);
  bool engine_empty = false, engine_ok = false;
  try {
    Engine eng(simplified);
    engine_empty = eng.check_empty(e).empty;
    engine_ok = true;
    rep.verdict_engine = engine_empty ? "empty" : "nonempty";
    if (!engine_empty) {
      auto w = eng.find_witness(e);
      if (!w || !member(**w, *e, defs)) {
        rep.contradiction = true;  // witness invalid against the given defs
      } else {
        rep.witness = format_term(**w);
      }
    }
  } catch (const limit_error& ex) {
    rep.verdict_engine = std::string("error: ") + ex.what();
  } catch (const std::logic_error& ex) {
    rep.verdict_engine = std::string("error: ") + ex.what();
    rep.contradiction = true;  // the engine's own witness validation failed
  }

  auto found = search_member(e, defs, depth);
  rep.verdict_oracle = found ? "nonempty" : "no-member-found";
  if (found && !rep.witness) rep.witness = format_term(**found);
  if (engine_ok && engine_empty && found) rep.contradiction = true;
  return rep;
}

}  // namespace rtypes::oracle
