#include "rtypes/parse.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace rtypes {

namespace {

// ---------------------------------------------------------------------------
// Lexer

struct Token {
  enum class Kind {
    Ident, KwType, KwSig, KwTop, KwBot,
    LParen, RParen, Comma, Semi, Eq, Pipe, Amp, Bang, Slash, End
  };
  Kind kind;
  std::string text;
  int line, col;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) { advance(1); continue; }
    const int tl = line, tc = col;
    auto punct = [&](Token::Kind k) {
      out.push_back({k, std::string(1, c), tl, tc});
      advance(1);
    };
    switch (c) {
      case '(': punct(Token::Kind::LParen); continue;
      case ')': punct(Token::Kind::RParen); continue;
      case ',': punct(Token::Kind::Comma); continue;
      case ';': punct(Token::Kind::Semi); continue;
      case '=': punct(Token::Kind::Eq); continue;
      case '|': punct(Token::Kind::Pipe); continue;
      case '&': punct(Token::Kind::Amp); continue;
      case '!': punct(Token::Kind::Bang); continue;
      case '/': punct(Token::Kind::Slash); continue;
      default: break;
    }
    if (ident_char(c)) {
      if (c == '_')
        throw syntax_error("identifiers must not start with '_' (reserved for generated names)", tl, tc);
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word = text.substr(i, j - i);
      advance(j - i);
      Token::Kind k = Token::Kind::Ident;
      if (word == "type") k = Token::Kind::KwType;
      else if (word == "sig") k = Token::Kind::KwSig;
      else if (word == "top") k = Token::Kind::KwTop;
      else if (word == "bot") k = Token::Kind::KwBot;
      out.push_back({k, std::move(word), tl, tc});
      continue;
    }
    throw syntax_error(std::string("unexpected character '") + c + "'", tl, tc);
  }
  out.push_back({Token::Kind::End, "", line, col});
  return out;
}

// ---------------------------------------------------------------------------
// Raw expression trees: shared between rule bodies and queries, resolved
// against the declarations afterwards.

struct RawNode {
  enum class Kind { Top, Bot, Ident, And, Or, Not };
  Kind kind;
  std::string name;
  bool applied = false;  // Ident: parentheses were present (possibly empty)
  std::vector<RawNode> args;
  int line = 0, col = 0;
};

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at(Token::Kind k) const { return peek().kind == k; }
  bool accept(Token::Kind k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }
  Token expect(Token::Kind k, const std::string& what) {
    if (!at(k)) {
      const Token& t = peek();
      throw syntax_error("expected " + what + ", got '" +
                             (t.kind == Token::Kind::End ? "end of input" : t.text) + "'",
                         t.line, t.col);
    }
    return next();
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Grammar (precedence ! > & > |, binary operators left associative):
//   or_expr  := and_expr ('|' and_expr)*
//   and_expr := not_expr ('&' not_expr)*
//   not_expr := '!' not_expr | primary
//   primary  := 'top' | 'bot' | IDENT ['(' [or_expr (',' or_expr)*] ')']
//             | '(' or_expr ')'
RawNode parse_or(TokenStream& ts);

RawNode parse_primary(TokenStream& ts) {
  const Token t = ts.next();
  RawNode n;
  n.line = t.line;
  n.col = t.col;
  switch (t.kind) {
    case Token::Kind::KwTop: n.kind = RawNode::Kind::Top; return n;
    case Token::Kind::KwBot: n.kind = RawNode::Kind::Bot; return n;
    case Token::Kind::LParen: {
      RawNode inner = parse_or(ts);
      ts.expect(Token::Kind::RParen, "')'");
      return inner;
    }
    case Token::Kind::Ident: {
      n.kind = RawNode::Kind::Ident;
      n.name = t.text;
      if (ts.accept(Token::Kind::LParen)) {
        n.applied = true;
        if (!ts.accept(Token::Kind::RParen)) {
          n.args.push_back(parse_or(ts));
          while (ts.accept(Token::Kind::Comma)) n.args.push_back(parse_or(ts));
          ts.expect(Token::Kind::RParen, "')'");
        }
      }
      return n;
    }
    default:
      throw syntax_error("expected a type expression, got '" +
                             (t.kind == Token::Kind::End ? "end of input" : t.text) + "'",
                         t.line, t.col);
  }
}

RawNode parse_not(TokenStream& ts) {
  if (ts.at(Token::Kind::Bang)) {
    const Token t = ts.next();
    RawNode n;
    n.kind = RawNode::Kind::Not;
    n.line = t.line;
    n.col = t.col;
    n.args.push_back(parse_not(ts));
    return n;
  }
  return parse_primary(ts);
}

RawNode parse_and(TokenStream& ts) {
  RawNode lhs = parse_not(ts);
  while (ts.at(Token::Kind::Amp)) {
    const Token t = ts.next();
    RawNode n;
    n.kind = RawNode::Kind::And;
    n.line = t.line;
    n.col = t.col;
    n.args.push_back(std::move(lhs));
    n.args.push_back(parse_not(ts));
    lhs = std::move(n);
  }
  return lhs;
}

RawNode parse_or(TokenStream& ts) {
  RawNode lhs = parse_and(ts);
  while (ts.at(Token::Kind::Pipe)) {
    const Token t = ts.next();
    RawNode n;
    n.kind = RawNode::Kind::Or;
    n.line = t.line;
    n.col = t.col;
    n.args.push_back(std::move(lhs));
    n.args.push_back(parse_and(ts));
    lhs = std::move(n);
  }
  return lhs;
}

// ---------------------------------------------------------------------------
// Declarations and resolution

struct RawDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<RawNode> alts;
  int line, col;
};

class DefsBuilder {
 public:
  TypeDefs build(const std::string& text) {
    TokenStream ts(lex(text));
    std::vector<RawDef> defs_raw;
    while (!ts.at(Token::Kind::End)) {
      if (ts.at(Token::Kind::KwSig)) parse_sig(ts);
      else if (ts.at(Token::Kind::KwType)) defs_raw.push_back(parse_def(ts));
      else {
        const Token& t = ts.peek();
        throw syntax_error("expected 'type' or 'sig' declaration, got '" + t.text + "'",
                           t.line, t.col);
      }
    }
    for (const auto& [name, decl] : sig_decls_)
      if (out_.ctors.contains(name))
        throw semantic_error("'" + name + "' is declared both as a function symbol and a constructor",
                             decl.line, decl.col);
    for (const auto& d : defs_raw) resolve_def(d);
    for (const auto& [name, decl] : sig_decls_) register_fsym(name, decl.arity, decl.line, decl.col);
    if (!out_.sig.has_constant())
      throw semantic_error("signature contains no constant (a function symbol of arity 0 is required)", 1, 1);
    out_.reindex();
    return std::move(out_);
  }

 private:
  struct SigDecl { std::size_t arity; int line, col; };

  void parse_sig(TokenStream& ts) {
    ts.next();  // 'sig'
    do {
      const Token t = ts.expect(Token::Kind::Ident, "function symbol name");
      std::size_t arity = 0;
      if (ts.accept(Token::Kind::Slash)) {
        const Token n = ts.expect(Token::Kind::Ident, "arity");
        for (char c : n.text)
          if (!std::isdigit(static_cast<unsigned char>(c)))
            throw syntax_error("arity must be a number", n.line, n.col);
        arity = static_cast<std::size_t>(std::stoul(n.text));
      }
      auto [it, fresh] = sig_decls_.emplace(t.text, SigDecl{arity, t.line, t.col});
      if (!fresh && it->second.arity != arity)
        throw semantic_error("conflicting arities for function symbol '" + t.text + "'",
                             t.line, t.col);
    } while (ts.accept(Token::Kind::Comma));
    ts.accept(Token::Kind::Semi);
  }

  RawDef parse_def(TokenStream& ts) {
    ts.next();  // 'type'
    const Token name = ts.expect(Token::Kind::Ident, "constructor name");
    RawDef d;
    d.name = name.text;
    d.line = name.line;
    d.col = name.col;
    if (ts.accept(Token::Kind::LParen)) {
      do {
        const Token p = ts.expect(Token::Kind::Ident, "parameter name");
        for (const auto& q : d.params)
          if (q == p.text)
            throw semantic_error("duplicate parameter '" + p.text + "'", p.line, p.col);
        d.params.push_back(p.text);
      } while (ts.accept(Token::Kind::Comma));
      ts.expect(Token::Kind::RParen, "')'");
    }
    if (ts.accept(Token::Kind::Eq)) {
      d.alts.push_back(parse_and(ts));
      while (ts.accept(Token::Kind::Pipe)) d.alts.push_back(parse_and(ts));
    }
    ts.accept(Token::Kind::Semi);
    if (out_.ctors.contains(d.name))
      throw semantic_error("duplicate definition of constructor '" + d.name + "'",
                           d.line, d.col);
    out_.ctors.arity[d.name] = d.params.size();
    return d;
  }

  void resolve_def(const RawDef& d) {
    std::set<std::string> params(d.params.begin(), d.params.end());
    for (const auto& p : d.params)
      if (out_.ctors.contains(p))
        throw semantic_error("parameter '" + p + "' collides with a constructor name",
                             d.line, d.col);
    for (const auto& alt : d.alts) {
      BodyTermPtr body = resolve_body(alt, params, /*root=*/true);
      if (body->kind == BodyKind::Param)
        throw semantic_error("a rule body cannot be a bare parameter", alt.line, alt.col);
      out_.rules.push_back(TypeRule{d.name, d.params, std::move(body)});
    }
  }

  // Identifier resolution inside rule bodies: parameters and declared
  // constructors win; anything else applied to parentheses is a function
  // symbol; a bare unknown name is rejected (use 'a()' for a constant).
  BodyTermPtr resolve_body(const RawNode& n, const std::set<std::string>& params, bool root) {
    switch (n.kind) {
      case RawNode::Kind::Top:
      case RawNode::Kind::Bot:
      case RawNode::Kind::And:
      case RawNode::Kind::Or:
      case RawNode::Kind::Not:
        throw semantic_error("set operators and top/bot are not permitted in rule bodies",
                             n.line, n.col);
      case RawNode::Kind::Ident: break;
    }
    if (params.count(n.name)) {
      if (n.applied)
        throw semantic_error("parameter '" + n.name + "' cannot take arguments", n.line, n.col);
      return with_pos(body_param(n.name), n);
    }
    std::vector<BodyTermPtr> args;
    args.reserve(n.args.size());
    for (const auto& a : n.args) args.push_back(resolve_body(a, params, false));
    if (out_.ctors.contains(n.name)) {
      check_ctor_arity(n.name, args.size(), n.line, n.col);
      return with_pos(body_ctor(n.name, std::move(args)), n);
    }
    if (!root && !n.applied)
      throw semantic_error("undeclared parameter '" + n.name +
                               "' in rule body (declare it in the head, or write '" +
                               n.name + "()' for a constant function symbol)",
                           n.line, n.col);
    register_fsym(n.name, args.size(), n.line, n.col);
    return with_pos(body_fsym(n.name, std::move(args)), n);
  }

  void check_ctor_arity(const std::string& name, std::size_t got, int line, int col) {
    const std::size_t want = out_.ctors.arity.at(name);
    if (want != got)
      throw semantic_error("constructor '" + name + "' expects " + std::to_string(want) +
                               " argument(s), got " + std::to_string(got),
                           line, col);
  }

  void register_fsym(const std::string& name, std::size_t arity, int line, int col) {
    if (out_.ctors.contains(name))
      throw semantic_error("'" + name + "' is declared both as a function symbol and a constructor",
                           line, col);
    auto [it, fresh] = out_.sig.arity.emplace(name, arity);
    if (!fresh && it->second != arity)
      throw semantic_error("function symbol '" + name + "' used with arity " +
                               std::to_string(arity) + " but previously with " +
                               std::to_string(it->second),
                           line, col);
  }

  static BodyTermPtr with_pos(BodyTermPtr b, const RawNode& n) {
    auto copy = std::make_shared<BodyTerm>(*b);
    copy->line = n.line;
    copy->col = n.col;
    return copy;
  }

  TypeDefs out_;
  std::map<std::string, SigDecl> sig_decls_;
};

// Query resolution: only declared constructors, top, bot and set operators.
TypeExprPtr resolve_query(const RawNode& n, const TypeDefs& defs) {
  switch (n.kind) {
    case RawNode::Kind::Top: return top();
    case RawNode::Kind::Bot: return bot();
    case RawNode::Kind::Not: return neg(resolve_query(n.args[0], defs));
    case RawNode::Kind::And:
      return conj(resolve_query(n.args[0], defs), resolve_query(n.args[1], defs));
    case RawNode::Kind::Or:
      return disj(resolve_query(n.args[0], defs), resolve_query(n.args[1], defs));
    case RawNode::Kind::Ident: break;
  }
  if (!defs.ctors.contains(n.name))
    throw semantic_error("unknown constructor '" + n.name + "'", n.line, n.col);
  const std::size_t want = defs.ctors.arity.at(n.name);
  if (want != n.args.size())
    throw semantic_error("constructor '" + n.name + "' expects " + std::to_string(want) +
                             " argument(s), got " + std::to_string(n.args.size()),
                         n.line, n.col);
  std::vector<TypeExprPtr> args;
  args.reserve(n.args.size());
  for (const auto& a : n.args) args.push_back(resolve_query(a, defs));
  return atom(n.name, std::move(args));
}

}  // namespace

TypeDefs parse_definitions(const std::string& text) {
  return DefsBuilder().build(text);
}

TypeExprPtr parse_type_expr(const std::string& text, const TypeDefs& defs) {
  TokenStream ts(lex(text));
  RawNode n = parse_or(ts);
  const Token& t = ts.peek();
  if (t.kind != Token::Kind::End)
    throw syntax_error("unexpected trailing input '" + t.text + "'", t.line, t.col);
  return resolve_query(n, defs);
}

}  // namespace rtypes
