// Command-line front end: emptiness, inclusion and equivalence checks,
// witness extraction, definition normalization, and the engine/oracle cross
// check. Verdicts go to stdout as a single line; diagnostics go to stderr.
//
// Exit codes: 0 the property holds (empty / subtype / equiv / no witness),
// 1 it does not, 2 usage or input errors, 3 resource-limit or internal
// errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rtypes/engine.hpp"
#include "rtypes/normalize.hpp"
#include "rtypes/oracle.hpp"
#include "rtypes/parse.hpp"

namespace {

struct Options {
  std::string defs_file;
  std::string expr1, expr2;
  std::string trace_file;
  bool stats = false;
  std::size_t dnf_limit = 1000000;
  std::size_t depth = 4;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rtypes::semantic_error("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rtypes::semantic_error("cannot write file '" + path + "'");
  out << content;
}

void emit_artifacts(const Options& opt, const rtypes::Engine::Result& res) {
  if (!opt.trace_file.empty() && res.trace)
    write_file(opt.trace_file, rtypes::trace_json(*res.trace));
  if (opt.stats) std::cout << rtypes::stats_json(res.stats) << "\n";
}

int run_check_empty(const Options& opt) {
  const rtypes::TypeDefs defs = rtypes::parse_definitions(read_file(opt.defs_file));
  const rtypes::TypeDefs simplified = rtypes::simplify(defs);
  const rtypes::TypeExprPtr e = rtypes::parse_type_expr(opt.expr1, defs);
  rtypes::EngineConfig cfg;
  cfg.dnf_limit = opt.dnf_limit;
  cfg.trace = !opt.trace_file.empty();
  rtypes::Engine eng(simplified, cfg);
  const auto res = eng.check_empty(e);
  std::cout << (res.empty ? "empty" : "nonempty") << "\n";
  emit_artifacts(opt, res);
  return res.empty ? 0 : 1;
}

int run_check_subtype(const Options& opt) {
  const rtypes::TypeDefs defs = rtypes::parse_definitions(read_file(opt.defs_file));
  const rtypes::TypeDefs simplified = rtypes::simplify(defs);
  const rtypes::TypeExprPtr sub = rtypes::parse_type_expr(opt.expr1, defs);
  const rtypes::TypeExprPtr super = rtypes::parse_type_expr(opt.expr2, defs);
  rtypes::EngineConfig cfg;
  cfg.dnf_limit = opt.dnf_limit;
  cfg.trace = !opt.trace_file.empty();
  rtypes::Engine eng(simplified, cfg);
  const rtypes::TypeExprPtr gap = rtypes::conj(sub, rtypes::neg(super));
  const auto res = eng.check_empty(gap);
  if (res.empty) {
    std::cout << "subtype\n";
    emit_artifacts(opt, res);
    return 0;
  }
  const auto w = eng.find_witness(gap);
  std::cout << "not-subtype " << rtypes::format_term(**w) << "\n";
  emit_artifacts(opt, res);
  return 1;
}

int run_check_equiv(const Options& opt) {
  const rtypes::TypeDefs defs = rtypes::parse_definitions(read_file(opt.defs_file));
  const rtypes::TypeDefs simplified = rtypes::simplify(defs);
  const rtypes::TypeExprPtr a = rtypes::parse_type_expr(opt.expr1, defs);
  const rtypes::TypeExprPtr b = rtypes::parse_type_expr(opt.expr2, defs);
  rtypes::EngineConfig cfg;
  cfg.dnf_limit = opt.dnf_limit;
  cfg.trace = !opt.trace_file.empty();
  rtypes::Engine eng(simplified, cfg);
  for (const auto& [lhs, rhs] : {std::make_pair(a, b), std::make_pair(b, a)}) {
    const rtypes::TypeExprPtr gap = rtypes::conj(lhs, rtypes::neg(rhs));
    const auto res = eng.check_empty(gap);
    if (!res.empty) {
      const auto w = eng.find_witness(gap);
      std::cout << "not-equiv " << rtypes::format_term(**w) << "\n";
      emit_artifacts(opt, res);
      return 1;
    }
  }
  std::cout << "equiv\n";
  return 0;
}

int run_witness(const Options& opt) {
  const rtypes::TypeDefs defs = rtypes::parse_definitions(read_file(opt.defs_file));
  const rtypes::TypeDefs simplified = rtypes::simplify(defs);
  const rtypes::TypeExprPtr e = rtypes::parse_type_expr(opt.expr1, defs);
  rtypes::EngineConfig cfg;
  cfg.dnf_limit = opt.dnf_limit;
  rtypes::Engine eng(simplified, cfg);
  const auto w = eng.find_witness(e);
  if (!w) {
    std::cout << "none\n";
    return 0;
  }
  std::cout << rtypes::format_term(**w) << "\n";
  return 1;
}

int run_normalize(const Options& opt) {
  const rtypes::TypeDefs defs = rtypes::parse_definitions(read_file(opt.defs_file));
  std::cout << rtypes::format_defs(rtypes::simplify(defs));
  return 0;
}

int run_oracle(const Options& opt) {
  const rtypes::TypeDefs defs = rtypes::parse_definitions(read_file(opt.defs_file));
  const rtypes::TypeExprPtr e = rtypes::parse_type_expr(opt.expr1, defs);
  const auto rep = rtypes::oracle::cross_check(defs, e, opt.depth);
  std::cout << rep.to_json() << "\n";
  return rep.contradiction ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision procedures for regular types with set operators"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, int exprs, bool depth_opt = false) {
    sub->add_option("--defs", opt.defs_file, "type definitions file")->required();
    if (exprs >= 1) sub->add_option("expr", opt.expr1, "type expression")->required();
    if (exprs >= 2) sub->add_option("expr2", opt.expr2, "second type expression")->required();
    sub->add_option("--dnf-limit", opt.dnf_limit, "max literals per DNF");
    sub->add_option("--trace", opt.trace_file, "write the evaluation trace as JSON");
    sub->add_flag("--stats", opt.stats, "print evaluation statistics as JSON");
    if (depth_opt) sub->add_option("--depth", opt.depth, "term enumeration depth");
  };

  auto* c_empty = app.add_subcommand("check-empty", "decide whether an expression denotes no term");
  add_common(c_empty, 1);
  auto* c_sub = app.add_subcommand("check-subtype", "decide inclusion of one expression in another");
  add_common(c_sub, 2);
  auto* c_equiv = app.add_subcommand("check-equiv", "decide equivalence of two expressions");
  add_common(c_equiv, 2);
  auto* c_wit = app.add_subcommand("witness", "produce a member term, or 'none'");
  add_common(c_wit, 1);
  auto* c_norm = app.add_subcommand("normalize", "print the simplified definitions");
  c_norm->add_option("--defs", opt.defs_file, "type definitions file")->required();
  auto* c_oracle = app.add_subcommand("oracle", "cross-check the engine against bounded enumeration");
  add_common(c_oracle, 1, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_empty->parsed()) return run_check_empty(opt);
    if (c_sub->parsed()) return run_check_subtype(opt);
    if (c_equiv->parsed()) return run_check_equiv(opt);
    if (c_wit->parsed()) return run_witness(opt);
    if (c_norm->parsed()) return run_normalize(opt);
    if (c_oracle->parsed()) return run_oracle(opt);
  } catch (const rtypes::syntax_error& e) {
    std::cerr << "error:" << e.line << ":" << e.col << ": " << e.what() << "\n";
    return 2;
  } catch (const rtypes::semantic_error& e) {
    if (e.line > 0)
      std::cerr << "error:" << e.line << ":" << e.col << ": " << e.what() << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rtypes::limit_error& e) {
    std::cerr << "limit exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
