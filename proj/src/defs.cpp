#include "rtypes/defs.hpp"

#include <set>

namespace rtypes {

const std::vector<std::size_t> TypeDefs::no_rules_{};

const std::vector<std::size_t>& TypeDefs::rules_of(const std::string& ctor) const {
  auto it = rule_index_.find(ctor);
  return it == rule_index_.end() ? no_rules_ : it->second;
}

void TypeDefs::reindex() {
  rule_index_.clear();
  for (std::size_t i = 0; i < rules.size(); ++i)
    rule_index_[rules[i].ctor].push_back(i);
}

void TypeDefs::check_term(const Term& t) const {
  auto it = sig.arity.find(t.root);
  if (it == sig.arity.end())
    throw semantic_error("unknown function symbol '" + t.root + "' in term");
  if (it->second != t.args.size())
    throw semantic_error("function symbol '" + t.root + "' expects " +
                         std::to_string(it->second) + " argument(s), got " +
                         std::to_string(t.args.size()));
  for (const auto& a : t.args) check_term(*a);
}

namespace {

void collect_body_symbols(const BodyTerm& b, std::set<std::string>& used) {
  if (b.kind == BodyKind::FSym) used.insert(b.name);
  for (const auto& a : b.args) collect_body_symbols(*a, used);
}

BodyTermPtr rename_params(const BodyTermPtr& b,
                          const std::map<std::string, std::string>& ren) {
  if (b->kind == BodyKind::Param) {
    auto it = ren.find(b->name);
    return it == ren.end() ? b : body_param(it->second);
  }
  std::vector<BodyTermPtr> args;
  args.reserve(b->args.size());
  for (const auto& a : b->args) args.push_back(rename_params(a, ren));
  return b->kind == BodyKind::FSym ? body_fsym(b->name, std::move(args))
                                   : body_ctor(b->name, std::move(args));
}

}  // namespace

std::string format_defs(const TypeDefs& defs) {
  std::set<std::string> used;
  for (const auto& r : defs.rules) collect_body_symbols(*r.body, used);

  std::string out;
  for (const auto& [name, k] : defs.sig.arity) {
    if (used.count(name)) continue;
    out += "sig " + name;
    if (k > 0) out += "/" + std::to_string(k);
    out += ";\n";
  }

  // Constructors print in declaration-ish order: the order their first rule
  // appears, then ruleless constructors in name order.
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& r : defs.rules)
    if (seen.insert(r.ctor).second) order.push_back(r.ctor);
  for (const auto& [name, _] : defs.ctors.arity)
    if (seen.insert(name).second) order.push_back(name);

  for (const auto& name : order) {
    out += "type " + name;
    const std::size_t arity = defs.ctors.arity.at(name);
    const auto& idx = defs.rules_of(name);
    std::vector<std::string> params;
    if (!idx.empty()) {
      params = defs.rules[idx.front()].params;
    } else {
      for (std::size_t i = 0; i < arity; ++i)
        params.push_back("p" + std::to_string(i + 1));
    }
    if (!params.empty()) {
      out += '(';
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i];
      }
      out += ')';
    }
    if (!idx.empty()) {
      out += " = ";
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += " | ";
        const TypeRule& r = defs.rules[idx[i]];
        std::map<std::string, std::string> ren;
        for (std::size_t j = 0; j < r.params.size(); ++j)
          if (r.params[j] != params[j]) ren[r.params[j]] = params[j];
        out += format_body(ren.empty() ? *r.body : *rename_params(r.body, ren));
      }
    }
    out += ";\n";
  }
  return out;
}

}  // namespace rtypes
