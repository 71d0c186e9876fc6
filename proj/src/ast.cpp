#include "rtypes/ast.hpp"

#include <algorithm>

namespace rtypes {

// ---------------------------------------------------------------------------
// Terms

TermPtr make_term(std::string root, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->root = std::move(root);
  t->args = std::move(args);
  return t;
}

int cmp(const Term& a, const Term& b) {
  if (int c = a.root.compare(b.root)) return c < 0 ? -1 : 1;
  if (a.args.size() != b.args.size())
    return a.args.size() < b.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (int c = cmp(*a.args[i], *b.args[i])) return c;
  return 0;
}

std::size_t term_height(const Term& t) {
  std::size_t h = 0;
  for (const auto& a : t.args) h = std::max(h, term_height(*a) + 1);
  return h;
}

std::string format_term(const Term& t) {
  std::string out = t.root;
  if (!t.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ',';
      out += format_term(*t.args[i]);
    }
    out += ')';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Type expressions

namespace {

TypeExprPtr make_expr(TypeKind k, std::string name, std::vector<TypeExprPtr> args) {
  auto e = std::make_shared<TypeExpr>();
  e->kind = k;
  e->name = std::move(name);
  e->args = std::move(args);
  return e;
}

const TypeExprPtr k_top = make_expr(TypeKind::Top, "", {});
const TypeExprPtr k_bot = make_expr(TypeKind::Bot, "", {});

}  // namespace

TypeExprPtr top() { return k_top; }
TypeExprPtr bot() { return k_bot; }

TypeExprPtr atom(std::string ctor, std::vector<TypeExprPtr> args) {
  return make_expr(TypeKind::Atom, std::move(ctor), std::move(args));
}

TypeExprPtr param(std::string name) {
  return make_expr(TypeKind::Param, std::move(name), {});
}

TypeExprPtr conj(TypeExprPtr l, TypeExprPtr r) {
  return make_expr(TypeKind::And, "", {std::move(l), std::move(r)});
}

TypeExprPtr disj(TypeExprPtr l, TypeExprPtr r) {
  return make_expr(TypeKind::Or, "", {std::move(l), std::move(r)});
}

TypeExprPtr neg(TypeExprPtr e) {
  return make_expr(TypeKind::Not, "", {std::move(e)});
}

int cmp(const TypeExpr& a, const TypeExpr& b) {
  if (a.kind != b.kind)
    return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
  if (a.args.size() != b.args.size())
    return a.args.size() < b.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (int c = cmp(*a.args[i], *b.args[i])) return c;
  return 0;
}

std::size_t expr_height(const TypeExpr& e) {
  std::size_t h = 0;
  for (const auto& a : e.args) h = std::max(h, expr_height(*a));
  return h + 1;
}

namespace {

// Precedence: '|' < '&' < '!' < atoms. Binary operators print left
// associatively; a right operand of equal precedence keeps its parentheses
// so the output reparses to the same tree.
constexpr int kPrecOr = 1, kPrecAnd = 2, kPrecNot = 3, kPrecAtom = 4;

int precedence(const TypeExpr& e) {
  switch (e.kind) {
    case TypeKind::Or: return kPrecOr;
    case TypeKind::And: return kPrecAnd;
    case TypeKind::Not: return kPrecNot;
    default: return kPrecAtom;
  }
}

void format_into(const TypeExpr& e, std::string& out, int min_prec) {
  const int prec = precedence(e);
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case TypeKind::Top: out += "top"; break;
    case TypeKind::Bot: out += "bot"; break;
    case TypeKind::Param: out += e.name; break;
    case TypeKind::Atom:
      out += e.name;
      if (!e.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i) out += ", ";
          format_into(*e.args[i], out, 0);
        }
        out += ')';
      }
      break;
    case TypeKind::Not:
      out += '!';
      format_into(*e.args[0], out, kPrecNot);
      break;
    case TypeKind::And:
      format_into(*e.args[0], out, kPrecAnd);
      out += " & ";
      format_into(*e.args[1], out, kPrecAnd + 1);
      break;
    case TypeKind::Or:
      format_into(*e.args[0], out, kPrecOr);
      out += " | ";
      format_into(*e.args[1], out, kPrecOr + 1);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string format_expr(const TypeExpr& e) {
  std::string out;
  format_into(e, out, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Rule-body terms

namespace {

BodyTermPtr make_body(BodyKind k, std::string name, std::vector<BodyTermPtr> args) {
  auto b = std::make_shared<BodyTerm>();
  b->kind = k;
  b->name = std::move(name);
  b->args = std::move(args);
  return b;
}

}  // namespace

BodyTermPtr body_fsym(std::string name, std::vector<BodyTermPtr> args) {
  return make_body(BodyKind::FSym, std::move(name), std::move(args));
}

BodyTermPtr body_ctor(std::string name, std::vector<BodyTermPtr> args) {
  return make_body(BodyKind::Ctor, std::move(name), std::move(args));
}

BodyTermPtr body_param(std::string name) {
  return make_body(BodyKind::Param, std::move(name), {});
}

int cmp(const BodyTerm& a, const BodyTerm& b) {
  if (a.kind != b.kind)
    return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
  if (a.args.size() != b.args.size())
    return a.args.size() < b.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (int c = cmp(*a.args[i], *b.args[i])) return c;
  return 0;
}

namespace {

// Nested constant function symbols print as "a()": a bare identifier at an
// argument position reads back as an (undeclared) parameter.
void format_body_into(const BodyTerm& b, std::string& out, bool nested) {
  out += b.name;
  if (!b.args.empty() || (nested && b.kind == BodyKind::FSym)) {
    out += '(';
    for (std::size_t i = 0; i < b.args.size(); ++i) {
      if (i) out += ", ";
      format_body_into(*b.args[i], out, true);
    }
    out += ')';
  }
}

}  // namespace

std::string format_body(const BodyTerm& b) {
  std::string out;
  format_body_into(b, out, false);
  return out;
}

// ---------------------------------------------------------------------------
// Sequences

Sequence seq_eps() { return Sequence{Sequence::Kind::Eps, {}}; }
Sequence seq_lambda() { return Sequence{Sequence::Kind::Lambda, {}}; }

Sequence seq_items(std::vector<TypeExprPtr> items) {
  if (items.empty()) throw std::logic_error("seq_items: empty item list");
  return Sequence{Sequence::Kind::Items, std::move(items)};
}

int cmp(const Sequence& a, const Sequence& b) {
  if (a.kind != b.kind)
    return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  if (a.items.size() != b.items.size())
    return a.items.size() < b.items.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.items.size(); ++i)
    if (int c = cmp(*a.items[i], *b.items[i])) return c;
  return 0;
}

std::string format_seq(const Sequence& s) {
  switch (s.kind) {
    case Sequence::Kind::Eps: return "eps";
    case Sequence::Kind::Lambda: return "lambda";
    case Sequence::Kind::Items: break;
  }
  std::string out = "<";
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i) out += ", ";
    out += format_expr(*s.items[i]);
  }
  out += '>';
  return out;
}

SeqExprPtr seq_leaf(Sequence s) {
  auto e = std::make_shared<SeqExpr>();
  e->kind = SeqExpr::Kind::Leaf;
  e->dimension = s.dim();
  e->leaf = std::move(s);
  return e;
}

namespace {

SeqExprPtr seq_binary(SeqExpr::Kind k, SeqExprPtr l, SeqExprPtr r) {
  if (l->dimension != r->dimension)
    throw std::logic_error("sequence expression dimension mismatch");
  auto e = std::make_shared<SeqExpr>();
  e->kind = k;
  e->dimension = l->dimension;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

}  // namespace

SeqExprPtr seq_and(SeqExprPtr l, SeqExprPtr r) {
  return seq_binary(SeqExpr::Kind::And, std::move(l), std::move(r));
}

SeqExprPtr seq_or(SeqExprPtr l, SeqExprPtr r) {
  return seq_binary(SeqExpr::Kind::Or, std::move(l), std::move(r));
}

std::string format_seq_expr(const SeqExpr& e) {
  switch (e.kind) {
    case SeqExpr::Kind::Leaf: return format_seq(e.leaf);
    case SeqExpr::Kind::And:
      return "(" + format_seq_expr(*e.lhs) + " & " + format_seq_expr(*e.rhs) + ")";
    case SeqExpr::Kind::Or:
      return "(" + format_seq_expr(*e.lhs) + " | " + format_seq_expr(*e.rhs) + ")";
  }
  return {};
}

}  // namespace rtypes
