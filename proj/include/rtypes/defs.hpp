#pragma once

// Type definitions: a ranked alphabet of function symbols, a set of
// (possibly parameterized) type constructors, and the production rules
// giving each constructor's alternatives.

#include <map>
#include <string>
#include <vector>

#include "rtypes/ast.hpp"

namespace rtypes {

// Function symbols with fixed arities. Must contain at least one constant.
struct Signature {
  std::map<std::string, std::size_t> arity;

  bool contains(const std::string& name) const { return arity.count(name) != 0; }
  bool has_constant() const {
    for (const auto& [_, k] : arity)
      if (k == 0) return true;
    return false;
  }
};

// Type constructors with their parameter counts.
struct ConstructorSet {
  std::map<std::string, std::size_t> arity;

  bool contains(const std::string& name) const { return arity.count(name) != 0; }
};

// One production: ctor(params...) -> body. In simplified definitions the
// body is rooted at a function symbol and every body argument is a parameter
// or a constructor applied to parameters only.
struct TypeRule {
  std::string ctor;
  std::vector<std::string> params;
  BodyTermPtr body;
};

struct TypeDefs {
  Signature sig;
  ConstructorSet ctors;
  std::vector<TypeRule> rules;
  bool simplified = false;

  // Indices into `rules`, grouped per constructor. Rebuild after mutating.
  const std::vector<std::size_t>& rules_of(const std::string& ctor) const;
  void reindex();

  // Throws semantic_error when t uses a symbol missing from the signature
  // or applied at the wrong arity.
  void check_term(const Term& t) const;

 private:
  std::map<std::string, std::vector<std::size_t>> rule_index_;
  static const std::vector<std::size_t> no_rules_;
};

// Renders definitions in the defs-file concrete syntax (one "type" line per
// constructor, plus "sig" lines for symbols not occurring in any rule body).
std::string format_defs(const TypeDefs& defs);

}  // namespace rtypes
