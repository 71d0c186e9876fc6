// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Criteria 1-5 drive the installed CLI binary end to end; 6-9 run the
// randomized cross-validation and fidelity suites through the library.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "gen.hpp"
#include "json.hpp"
#include "rtypes/engine.hpp"
#include "rtypes/normalize.hpp"
#include "rtypes/oracle.hpp"
#include "rtypes/parse.hpp"

using namespace rtypes;
using nlohmann::json;

namespace {

int failures = 0;

std::string data_path(const std::string& name) {
  return std::string(RTYPES_TEST_DATA_DIR) + "/" + name;
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TypeDefs load_defs(const std::string& name) {
  return parse_definitions(slurp_file(data_path(name)));
}

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(RTYPES_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string first_line(const std::string& s) {
  const auto nl = s.find('\n');
  return nl == std::string::npos ? s : s.substr(0, nl);
}

bool json_has_node(const json& node, const std::function<bool(const json&)>& pred) {
  if (pred(node)) return true;
  if (node.contains("children"))
    for (const auto& c : node["children"])
      if (json_has_node(c, pred)) return true;
  return false;
}

void criterion(int number, const std::string& name, double budget_ms,
               const std::function<void(std::string&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string note;
  bool pass = true;
  try {
    body(note);
    pass = note.empty();
  } catch (const std::exception& e) {
    pass = false;
    note = std::string("exception: ") + e.what();
  }
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  if (ms >= budget_ms) {
    pass = false;
    note += (note.empty() ? "" : "; ") + std::string("over time budget");
  }
  std::printf("criterion %d: %s (%.0f ms) - %s%s%s\n", number,
              pass ? "PASS" : "FAIL", ms, name.c_str(),
              note.empty() ? "" : ": ", note.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void expect(std::string& note, bool cond, const std::string& what) {
  if (!cond && note.empty()) note = what;
}

// ---------------------------------------------------------------------------

void criterion1(std::string& note) {
  const std::string trace_path = "acc1_trace.json";
  const auto r = run_cli("check-empty --defs " + data_path("ex1.rt") +
                         " --trace " + trace_path + " \"Nat & !Even & !Odd\"");
  expect(note, r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
  expect(note, first_line(r.out) == "empty", "stdout was '" + first_line(r.out) + "'");

  const json trace = json::parse(slurp_file(trace_path));
  const bool hit = json_has_node(trace, [](const json& n) {
    return n.value("kind", "") == "etype_conj" && n.value("eq", "") == "table-hit" &&
           n.value("verdict", false) == true &&
           n.value("arg", "") == "Nat & !Even & !Odd";
  });
  expect(note, hit, "no table-hit node with the tabled literal set in the trace");
  std::remove(trace_path.c_str());
}

void criterion2(std::string& note) {
  auto r = run_cli("check-empty --defs " + data_path("ex1.rt") +
                   " \"List(Even & !Nat)\"");
  expect(note, r.exit_code == 1 && first_line(r.out) == "nonempty",
         "check-empty: '" + first_line(r.out) + "' exit " + std::to_string(r.exit_code));

  r = run_cli("witness --defs " + data_path("ex1.rt") + " \"List(Even & !Nat)\"");
  expect(note, first_line(r.out) == "nil", "witness was '" + first_line(r.out) + "'");

  const TypeDefs defs = load_defs("ex1.rt");
  const TypeExprPtr e = parse_type_expr("List(Even & !Nat)", defs);
  expect(note, oracle::member(*make_term("nil"), *e, defs), "member(nil, expr) failed");
}

void criterion3(std::string& note) {
  const TypeDefs defs = load_defs("ex3.rt");
  const TypeDefs simp = simplify(defs);
  const TypeExprPtr alpha = parse_type_expr("alpha", defs);
  const TypeExprPtr beta = parse_type_expr("beta", defs);

  Engine eng(simp);
  const TypeExprPtr gap = conj(alpha, neg(beta));
  const auto w = eng.find_witness(gap);
  expect(note, w.has_value(), "no witness for alpha & !beta");
  if (w) {
    expect(note, oracle::member(**w, *alpha, defs), "witness not in alpha");
    expect(note, !oracle::member(**w, *beta, defs), "witness in beta");
  }

  const auto r = run_cli("check-subtype --defs " + data_path("ex3.rt") + " alpha beta");
  expect(note, r.exit_code == 1, "exit code " + std::to_string(r.exit_code));
  expect(note, w && first_line(r.out) == "not-subtype " + format_term(**w),
         "stdout was '" + first_line(r.out) + "'");

  // a term that mixes leaf kinds across levels separates the two types
  const TermPtr t = make_term(
      "g", {make_term("h", {make_term("h", {make_term("a"), make_term("b")}),
                            make_term("a")})});
  expect(note, oracle::member(*t, *alpha, defs), "g(h(h(a,b),a)) not in alpha");
  expect(note, !oracle::member(*t, *beta, defs), "g(h(h(a,b),a)) in beta");
}

void criterion4(std::string& note) {
  const std::string trace_path = "acc4_trace.json";
  const auto r = run_cli("check-empty --defs " + data_path("null.rt") +
                         " --trace " + trace_path + " Null");
  expect(note, r.exit_code == 0 && first_line(r.out) == "empty",
         "'" + first_line(r.out) + "' exit " + std::to_string(r.exit_code));

  const json trace = json::parse(slurp_file(trace_path));
  const bool hit = json_has_node(trace, [](const json& n) {
    return n.value("kind", "") == "etype_conj" && n.value("eq", "") == "table-hit" &&
           n.value("arg", "") == "Null";
  });
  expect(note, hit, "no table hit breaking the Null loop in the trace");
  std::remove(trace_path.c_str());
}

void criterion5(std::string& note) {
  auto r = run_cli("check-empty --defs " + data_path("ex1.rt") + " \"List(bot)\"");
  expect(note, r.exit_code == 1 && first_line(r.out) == "nonempty",
         "List(bot): '" + first_line(r.out) + "'");
  r = run_cli("witness --defs " + data_path("ex1.rt") + " \"List(bot)\"");
  expect(note, first_line(r.out) == "nil", "witness was '" + first_line(r.out) + "'");
  r = run_cli("check-empty --defs " + data_path("ex1.rt") + " bot");
  expect(note, r.exit_code == 0 && first_line(r.out) == "empty",
         "bot: '" + first_line(r.out) + "'");
}

// Instances generated for criterion 6, reused by criterion 8.
std::vector<std::pair<TypeDefs, TypeExprPtr>> random_instances;

void criterion6(std::string& note) {
  testgen::Rng rng(0xACCE55ull);
  int contradictions = 0, engine_errors = 0, made = 0, attempts = 0;
  while (made < 500 && attempts < 600) {
    ++attempts;
    const std::uint64_t seed = rng.state;
    TypeDefs defs = testgen::random_defs(rng);
    const TypeExprPtr e = testgen::random_expr(rng, defs, 4);
    oracle::CrossReport rep;
    try {
      rep = oracle::cross_check(defs, e, 4, seed);
    } catch (const limit_error&) {
      continue;  // divergent alias shape rejected by simplify
    }
    ++made;
    if (rep.contradiction) {
      ++contradictions;
      if (contradictions == 1)
        note = "first contradiction (seed " + std::to_string(seed) + "): " +
               rep.to_json();
    }
    if (rep.verdict_engine.rfind("error", 0) == 0) ++engine_errors;
    random_instances.emplace_back(std::move(defs), e);
  }
  expect(note, made == 500, "only " + std::to_string(made) + " instances");
  expect(note, contradictions == 0,
         std::to_string(contradictions) + " contradictions");
  expect(note, engine_errors == 0, std::to_string(engine_errors) + " engine errors");
}

void criterion7(std::string& note) {
  testgen::Rng rng(0x5EED7ull);
  int bad = 0;

  // simplify preserves membership
  for (int i = 0; i < 200 && bad == 0; ++i) {
    TypeDefs d = testgen::random_defs(rng);
    TypeDefs s;
    try {
      s = simplify(d);
    } catch (const limit_error&) {
      --i;
      continue;
    }
    const TypeExprPtr e = testgen::random_expr(rng, d, 4);
    for (const auto& t : oracle::enumerate_terms(d, 4)) {
      if (oracle::member(*t, *e, d) != oracle::member(*t, *e, s)) {
        ++bad;
        note = "simplify changed membership of " + format_term(*t) + " in " +
               format_expr(*e);
        break;
      }
    }
  }

  // dnf preserves membership
  for (int i = 0; i < 200 && bad == 0; ++i) {
    const TypeDefs d = testgen::random_defs(rng);
    const TypeExprPtr e = testgen::random_expr(rng, d, 4);
    const auto cs = dnf(e);
    for (const auto& t : oracle::enumerate_terms(d, 4)) {
      bool via = false;
      for (const auto& c : cs)
        if (oracle::member(*t, *conjunct_expr(c), d)) { via = true; break; }
      if (via != oracle::member(*t, *e, d)) {
        ++bad;
        note = "dnf changed membership of " + format_term(*t);
        break;
      }
    }
  }

  // complement_sequences complements tuple membership
  testgen::GenOptions tiny;
  tiny.tiny_terms = true;
  for (int i = 0; i < 200 && bad == 0; ++i) {
    const TypeDefs d = testgen::random_defs(rng, tiny);
    const std::size_t k = 1 + rng.below(3);
    const std::size_t nseqs = rng.below(3);
    std::vector<Sequence> seqs;
    for (std::size_t s = 0; s < nseqs; ++s) {
      std::vector<TypeExprPtr> items;
      for (std::size_t j = 0; j < k; ++j) items.push_back(testgen::random_expr(rng, d, 2));
      seqs.push_back(seq_items(std::move(items)));
    }
    const SeqExprPtr comp = complement_sequences(seqs, k);
    const auto pool = oracle::enumerate_terms(d, 3);
    testgen::for_each_tuple(pool, k, [&](const std::vector<TermPtr>& tuple) {
      if (bad) return;
      bool in_union = false;
      for (const auto& s : seqs)
        if (testgen::tuple_in_seq(tuple, s, d)) { in_union = true; break; }
      if (testgen::tuple_in_seq_expr(tuple, *comp, d) == in_union) {
        ++bad;
        note = "complement failed on a width-" + std::to_string(k) + " tuple";
      }
    });
  }

  // atom canonicalization preserves membership
  for (int i = 0; i < 200 && bad == 0; ++i) {
    const TypeDefs d = testgen::random_defs(rng);
    const TypeExprPtr e = testgen::random_expr(rng, d, 4);
    const TypeExprPtr c = canonical(e);
    for (const auto& t : oracle::enumerate_terms(d, 4)) {
      if (oracle::member(*t, *e, d) != oracle::member(*t, *c, d)) {
        ++bad;
        note = "canonicalization changed membership of " + format_term(*t);
        break;
      }
    }
  }
}

void criterion8(std::string& note) {
  // the worked examples first
  struct Fixed {
    const char* file;
    const char* expr;
  };
  for (const Fixed& c : {Fixed{"ex1.rt", "Nat & !Even & !Odd"},
                         Fixed{"ex1.rt", "List(Even & !Nat)"},
                         Fixed{"ex1.rt", "List(bot)"},
                         Fixed{"ex1.rt", "bot"},
                         Fixed{"ex3.rt", "alpha & !beta"},
                         Fixed{"null.rt", "Null"}}) {
    const TypeDefs raw = load_defs(c.file);
    const TypeDefs d = simplify(raw);
    const TypeExprPtr e = parse_type_expr(c.expr, raw);
    Engine eng(d);
    const auto res = eng.check_empty(e);
    const auto rta = relevant_atoms(e, d);
    if (res.stats.max_table > (std::size_t{1} << rta.size())) {
      note = std::string("bound violated on ") + c.expr;
      return;
    }
  }

  // every randomized instance from criterion 6
  if (random_instances.empty()) {
    note = "criterion 6 produced no instances";
    return;
  }
  for (const auto& [defs, e] : random_instances) {
    const TypeDefs d = simplify(defs);
    Engine eng(d);
    EngineStats stats;
    try {
      stats = eng.check_empty(e).stats;
    } catch (const limit_error&) {
      note = "engine limit hit while re-running an instance";
      return;
    }
    const auto rta = relevant_atoms(e, d);
    if (rta.size() < 63 && stats.max_table > (std::size_t{1} << rta.size())) {
      note = "bound violated on randomized instance " + format_expr(*e);
      return;
    }
  }
}

void criterion9(std::string& note) {
  testgen::Rng rng(0xF1DE11ull);
  testgen::GenOptions tiny;
  tiny.tiny_terms = true;

  // conjunct-to-sequence reduction fidelity, exact over depth-3 tuples
  for (int i = 0; i < 100 && note.empty(); ++i) {
    TypeDefs d;
    try {
      d = simplify(testgen::random_defs(rng, tiny));
    } catch (const limit_error&) {
      --i;
      continue;
    }
    Engine eng(d);
    const Conjunct c = testgen::random_conjunct(rng, d);
    std::vector<std::string> fs = eng.principal_functors(c.pos.front());
    for (std::size_t p = 1; p < c.pos.size(); ++p) {
      const auto other = eng.principal_functors(c.pos[p]);
      std::vector<std::string> merged;
      std::set_intersection(fs.begin(), fs.end(), other.begin(), other.end(),
                            std::back_inserter(merged));
      fs = std::move(merged);
    }
    const TypeExprPtr ce = conjunct_expr(c);
    const auto pool = oracle::enumerate_terms(d, 3);
    for (const auto& f : fs) {
      const SeqExprPtr b = eng.arg_constraint(c, f);
      testgen::for_each_tuple(pool, d.sig.arity.at(f),
                              [&](const std::vector<TermPtr>& tuple) {
        if (!note.empty()) return;
        if (testgen::tuple_in_seq_expr(tuple, *b, d) !=
            oracle::member(*make_term(f, tuple), *ce, d))
          note = "argument constraint mismatch for f=" + f + " on " +
                 format_conjunct(c);
      });
      if (!note.empty()) break;
    }
  }

  // projection reduction fidelity on conjunctive sequence expressions
  for (int i = 0; i < 100 && note.empty(); ++i) {
    TypeDefs d;
    try {
      d = simplify(testgen::random_defs(rng, tiny));
    } catch (const limit_error&) {
      --i;
      continue;
    }
    Engine eng(d);
    const std::size_t dim = 1 + rng.below(3);
    const std::size_t tuple_depth = dim == 3 ? 2 : 3;
    const ConjSeq g = testgen::random_conj_seq(rng, d, dim, 1 + rng.below(3));

    bool some_projection_empty = false;
    for (std::size_t j = 1; j <= dim; ++j)
      if (eng.check_empty(Engine::project(g, j)).empty) {
        some_projection_empty = true;
        break;
      }

    bool tuple_found = false;
    testgen::for_each_tuple(oracle::enumerate_terms(d, tuple_depth), dim,
                            [&](const std::vector<TermPtr>& tuple) {
      if (tuple_found) return;
      for (const auto& s : g.seqs)
        if (!testgen::tuple_in_seq(tuple, s, d)) return;
      tuple_found = true;
    });

    if (tuple_found && some_projection_empty) {
      note = "projection claimed empty but a member tuple exists: " +
             format_conj_seq(g);
      break;
    }
    if (!some_projection_empty) {
      // all projections nonempty: their witnesses assemble into a member
      std::vector<TermPtr> tuple;
      for (std::size_t j = 1; j <= dim; ++j) {
        const auto w = eng.find_witness(Engine::project(g, j));
        if (!w) {
          note = "projection witness missing";
          break;
        }
        tuple.push_back(*w);
      }
      for (const auto& s : g.seqs) {
        if (!note.empty()) break;
        if (!testgen::tuple_in_seq(tuple, s, d))
          note = "assembled tuple fails a sequence conjunct: " + format_conj_seq(g);
      }
    }
  }
}

}  // namespace

int main() {
  criterion(1, "table hit closes the even/odd gap", 1000, criterion1);
  criterion(2, "List(Even & !Nat) is inhabited by nil", 1000, criterion2);
  criterion(3, "alpha is not included in beta", 1000, criterion3);
  criterion(4, "self-recursive Null terminates as empty", 1000, criterion4);
  criterion(5, "List(bot) is nonempty while bot is empty", 1000, criterion5);
  criterion(6, "500 randomized engine/oracle cross checks", 300000, criterion6);
  criterion(7, "normalization preserves membership (4 x 200 instances)", 300000,
            criterion7);
  criterion(8, "table size within the relevant-atom bound", 300000, criterion8);
  criterion(9, "reduction fidelity suites (2 x 100 instances)", 300000, criterion9);
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
