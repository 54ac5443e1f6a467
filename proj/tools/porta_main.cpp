// porta — series-rational expressions and pomset automata:
// equivalence, membership, compilation, extraction, normalization.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "porta/equiv.hpp"
#include "porta/expr.hpp"
#include "porta/kleene.hpp"
#include "porta/oracle.hpp"
#include "porta/pa.hpp"
#include "porta/pa_io.hpp"
#include "porta/pomset.hpp"
#include "porta/wellstruct.hpp"

namespace {

using nlohmann::ordered_json;
using namespace porta;

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;

struct Output {
  bool json = false;
  ordered_json doc;

  void begin(const std::string& command, ordered_json inputs) {
    doc["command"] = command;
    doc["inputs"] = std::move(inputs);
  }
  void finish() {
    if (json) std::cout << doc.dump(2) << "\n";
  }
  void line(const std::string& text) {
    if (!json) std::cout << text << "\n";
  }
};

int run_equiv(Output& out, const std::string& lhs, const std::string& rhs,
              int oracle_bound) {
  Expr e = parse_expr(lhs), f = parse_expr(rhs);
  out.begin("equiv", {{"lhs", lhs}, {"rhs", rhs}});
  bool decision = expr_equiv(e, f);
  out.doc["result"] = decision ? "equivalent" : "inequivalent";
  out.line(decision ? "equivalent" : "inequivalent");
  if (oracle_bound >= 0) {
    bool bounded = oracle_equiv(e, f, oracle_bound);
    out.doc["details"]["oracle_bound"] = oracle_bound;
    out.doc["details"]["oracle_result"] = bounded;
    if (decision && !bounded) {
      // The bounded oracle refuting a positive decision indicates a bug.
      std::cerr << "warning: decided equivalent, but the bounded oracle found "
                   "a difference within "
                << oracle_bound << " events\n";
      out.finish();
      return kError;
    }
    if (!decision && bounded) {
      out.line("note: languages agree up to " + std::to_string(oracle_bound) +
               " events; the difference lies beyond the oracle bound");
    }
  }
  out.finish();
  return decision ? kTrue : kFalse;
}

int run_member(Output& out, const std::string& expr_text_in,
               const std::string& pa_file, const std::string& state,
               const std::string& pomset_text_in) {
  SpTerm u = parse_pomset(pomset_text_in);
  bool result;
  if (!expr_text_in.empty()) {
    out.begin("member", {{"expr", expr_text_in}, {"pomset", pomset_text_in}});
    Expr e = parse_expr(expr_text_in);
    CompileResult c = compile(e);
    result = membership(c.pa, c.state_of.at(e), u);
  } else {
    out.begin("member", {{"pa", pa_file}, {"state", state}, {"pomset", pomset_text_in}});
    Pa pa = load_pa_file(pa_file);
    result = membership(pa, state, u);
  }
  out.doc["result"] = result ? "member" : "not a member";
  out.line(result ? "member" : "not a member");
  out.finish();
  return result ? kTrue : kFalse;
}

int run_compile(Output& out, const std::string& expr_text_in,
                const std::string& out_file) {
  Expr e = parse_expr(expr_text_in);
  out.begin("compile", {{"expr", expr_text_in}, {"output", out_file}});
  CompileResult c = compile(e);
  save_pa_file(c.pa, out_file);
  out.doc["result"] = c.state_of.at(e);
  out.doc["details"]["states"] = c.pa.states.size();
  out.line("wrote " + out_file + " (" + std::to_string(c.pa.states.size()) +
           " states); start state: " + c.state_of.at(e));
  out.finish();
  return kTrue;
}

int run_extract(Output& out, const std::string& pa_file, const std::string& state) {
  out.begin("extract", {{"pa", pa_file}, {"state", state}});
  Pa pa = load_pa_file(pa_file);
  Expr e = extract(pa, state);
  out.doc["result"] = expr_text(e);
  out.line(expr_text(e));
  out.finish();
  return kTrue;
}

int run_atoms(Output& out, const std::string& pa_file) {
  out.begin("atoms", {{"pa", pa_file}});
  Pa pa = load_pa_file(pa_file);
  std::set<StateId> fork_targets;
  for (std::size_t q = 0; q < pa.states.size(); ++q)
    for (const Fork& fork : pa.gamma[q])
      for (const auto& [m, count] : fork.members.entries())
        fork_targets.insert(pa.states[m]);
  ordered_json atoms_json = ordered_json::array();
  for (const Atom& atom : pa_atoms(pa)) {
    std::string text = "{";
    bool flagged = false, first = true;
    for (const StateId& q : atom) {
      if (!first) text += ", ";
      first = false;
      text += q;
      if (fork_targets.count(q)) flagged = true;
    }
    text += "}";
    ordered_json entry;
    entry["members"] = atom;
    entry["has_fork_target"] = flagged;
    atoms_json.push_back(std::move(entry));
    out.line(flagged ? text + " [fork-target]" : text);
  }
  out.doc["result"] = std::move(atoms_json);
  out.finish();
  return kTrue;
}

int run_normalize(Output& out, const std::string& pa_file,
                  const std::string& out_file, std::vector<std::string> track) {
  out.begin("normalize", {{"pa", pa_file}, {"output", out_file}, {"track", track}});
  Pa pa = load_pa_file(pa_file);
  std::set<StateId> tracked(track.begin(), track.end());
  if (tracked.empty()) tracked.insert(pa.states.begin(), pa.states.end());
  auto [ws, embedding] = well_structure(pa, tracked);
  save_pa_file(ws, out_file);
  out.doc["result"] = "ok";
  out.doc["details"]["states"] = ws.states.size();
  ordered_json emb;
  for (const auto& [from, to] : embedding) emb[from] = to;
  out.doc["details"]["tracked"] = std::move(emb);
  out.line("wrote " + out_file + " (" + std::to_string(ws.states.size()) +
           " states, " + std::to_string(tracked.size()) + " tracked)");
  out.finish();
  return kTrue;
}

int run_check(Output& out, const std::string& pa_file) {
  out.begin("check", {{"pa", pa_file}});
  Pa pa = load_pa_file(pa_file);
  ForkAcyclicity fa = is_fork_acyclic(pa);
  StructureReport report = check_structure(pa);
  SupportAnalysis supp = support_analysis(pa);
  std::string n_min =
      report.n_forking_min ? std::to_string(*report.n_forking_min) : "inf";
  out.line("fork_acyclic=" + std::string(fa.ok ? "true" : "false"));
  if (!fa.ok)
    out.line("  witness: " + fa.witness->first + " supported by fork member " +
             fa.witness->second);
  out.line("depth=" + std::to_string(supp.depth));
  out.line("n_forking_min=" + n_min);
  out.line("parsimonious=" + std::string(report.parsimonious ? "true" : "false"));
  out.line("flat_branching=" + std::string(report.flat_branching ? "true" : "false"));
  out.line("well_structured=" + std::string(report.well_structured ? "true" : "false"));
  out.doc["result"] = report.well_structured && fa.ok;
  out.doc["details"] = {{"fork_acyclic", fa.ok},
                        {"depth", supp.depth},
                        {"n_forking_min", n_min},
                        {"parsimonious", report.parsimonious},
                        {"flat_branching", report.flat_branching},
                        {"well_structured", report.well_structured}};
  out.finish();
  return kTrue;
}

int run_lang(Output& out, const std::string& expr_text_in, int max_size) {
  Expr e = parse_expr(expr_text_in);
  out.begin("lang", {{"expr", expr_text_in}, {"max_size", max_size}});
  ordered_json items = ordered_json::array();
  for (const SpTerm& u : lang_up_to(e, max_size)) {
    out.line(pomset_text(u));
    items.push_back(pomset_text(u));
  }
  out.doc["result"] = std::move(items);
  out.finish();
  return kTrue;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"series-rational expression / pomset automaton toolkit"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("--json", out.json, "machine-readable output");

  std::string lhs, rhs, expr_arg, pa_file, state, pomset_arg, out_file;
  std::vector<std::string> track;
  int oracle_bound = -1, max_size = 5;

  CLI::App* equiv = app.add_subcommand("equiv", "decide language equivalence of two expressions");
  equiv->add_option("lhs", lhs, "first expression")->required();
  equiv->add_option("rhs", rhs, "second expression")->required();
  equiv->add_option("--oracle", oracle_bound, "cross-check against the bounded enumeration oracle");

  CLI::App* member = app.add_subcommand("member", "decide pomset membership");
  member->add_option("--expr", expr_arg, "expression to test against");
  member->add_option("--pa", pa_file, "automaton file to test against");
  member->add_option("--state", state, "state of the automaton");
  member->add_option("pomset", pomset_arg, "pomset literal")->required();

  CLI::App* compile_cmd = app.add_subcommand("compile", "compile an expression to an automaton file");
  compile_cmd->add_option("expr", expr_arg, "expression")->required();
  compile_cmd->add_option("-o,--output", out_file, "output file")->required();

  CLI::App* extract_cmd = app.add_subcommand("extract", "extract an expression for a state");
  extract_cmd->add_option("pa", pa_file, "automaton file")->required();
  extract_cmd->add_option("--state", state, "state to extract")->required();

  CLI::App* atoms_cmd = app.add_subcommand("atoms", "print the atoms of a well-structured automaton");
  atoms_cmd->add_option("pa", pa_file, "automaton file")->required();

  CLI::App* normalize = app.add_subcommand("normalize", "well-structure an automaton");
  normalize->add_option("pa", pa_file, "automaton file")->required();
  normalize->add_option("-o,--output", out_file, "output file")->required();
  normalize->add_option("--track", track, "states whose language must be preserved")
      ->delimiter(',');

  CLI::App* check = app.add_subcommand("check", "report structural properties");
  check->add_option("pa", pa_file, "automaton file")->required();

  CLI::App* lang = app.add_subcommand("lang", "enumerate an expression's language");
  lang->add_option("expr", expr_arg, "expression")->required();
  lang->add_option("--max-size", max_size, "event-count bound")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (equiv->parsed()) return run_equiv(out, lhs, rhs, oracle_bound);
    if (member->parsed()) {
      if (expr_arg.empty() == (pa_file.empty() || state.empty()))
        throw std::invalid_argument(
            "member needs either --expr or both --pa and --state");
      return run_member(out, expr_arg, pa_file, state, pomset_arg);
    }
    if (compile_cmd->parsed()) return run_compile(out, expr_arg, out_file);
    if (extract_cmd->parsed()) return run_extract(out, pa_file, state);
    if (atoms_cmd->parsed()) return run_atoms(out, pa_file);
    if (normalize->parsed()) return run_normalize(out, pa_file, out_file, track);
    if (check->parsed()) return run_check(out, pa_file);
    if (lang->parsed()) return run_lang(out, expr_arg, max_size);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
