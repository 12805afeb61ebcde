// Command-line front end: decide definability of a regular forest/tree
// language in the two-way unary temporal logic, evaluate and compile
// formulas, dump syntactic algebras, play the game, and run the
// enumeration oracles.
//
// Exit codes: 0 success/definable/agree; 1 negative-but-successful analysis
// (not definable, counterexample found); 2 usage or parse error; 3 invalid
// automaton document; 4 resource bound exceeded.

#include <fstream>
#include <iostream>
#include <optional>
#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <efpast/efpast.hpp>

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw efpast::validation_error("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Arguments may be given inline or as @path indirection.
std::string arg_text(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return slurp(arg.substr(1));
  return arg;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw efpast::validation_error("cannot write file '" + out_path + "'");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  }
}

efpast::alphabet alphabet_from_csv(const std::string& leaves, const std::string& inners) {
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else if (c != ' ') {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  };
  return efpast::alphabet(split(leaves), split(inners));
}

struct options {
  std::string automaton_path;
  std::string formula_arg;
  std::string input_arg;
  std::string left_arg, right_arg;
  std::string leaves_csv, inners_csv;
  std::string out_path;
  unsigned rounds = 0;
  std::size_t max_nodes = 5;
  unsigned pump = 2;
  unsigned jobs = 1;
  bool json = false;
  bool witnesses = false;
  bool dashv = false;
  bool nodes = false;
};

int run_decide(const options& opt) {
  efpast::semigroup_automaton aut = efpast::load_automaton(slurp(opt.automaton_path));
  efpast::decision_result res = efpast::decide_definable(aut, {}, opt.jobs);
  std::optional<efpast::separating_pair> pair;
  if (opt.witnesses && res.failure) {
    for (const auto& sub : res.subs) {
      if (auto f = sub.report.first_failure()) {
        pair = efpast::separating_witnesses(sub.syntactic, *f, opt.pump);
        break;
      }
    }
  }
  if (opt.json)
    emit(efpast::decision_to_json(res, pair ? &*pair : nullptr).dump(2), opt.out_path);
  else
    emit(efpast::decision_to_text(res, pair ? &*pair : nullptr), opt.out_path);
  return res.definable ? 0 : 1;
}

int run_eval(const options& opt) {
  efpast::forest f = efpast::parse_forest(arg_text(opt.input_arg));
  std::string text = arg_text(opt.formula_arg);
  if (opt.nodes) {
    efpast::formula phi = efpast::parse_node_formula(text);
    std::string out;
    for (const auto& id : efpast::eval_nodes(phi, f)) {
      if (!out.empty()) out += ' ';
      out += efpast::to_string(id);
    }
    emit(out.empty() ? "(none)" : out, opt.out_path);
    return 0;
  }
  bool ok;
  try {
    efpast::forest_formula psi = efpast::parse_forest_formula(text);
    ok = efpast::forest_accepts(psi, f);
  } catch (const efpast::parse_error& forest_err) {
    // A bare node formula is read as a boolean query: true in the root.
    efpast::formula phi = [&] {
      try {
        return efpast::parse_node_formula(text);
      } catch (const efpast::parse_error&) {
        throw forest_err;
      }
    }();
    if (f.trees().size() != 1)
      throw efpast::validation_error(
          "a node formula used as a boolean query needs a single-tree input");
    auto sel = efpast::eval_nodes(phi, f);
    ok = std::find(sel.begin(), sel.end(), efpast::node_id{{0}}) != sel.end();
  }
  emit(ok ? "accept" : "reject", opt.out_path);
  return ok ? 0 : 1;
}

int run_compile(const options& opt) {
  efpast::forest_formula psi = efpast::parse_forest_formula(arg_text(opt.formula_arg));
  efpast::alphabet sigma;
  if (!opt.leaves_csv.empty() || !opt.inners_csv.empty()) {
    sigma = alphabet_from_csv(opt.leaves_csv, opt.inners_csv);
  } else {
    // Default alphabet: every atom may serve both roles.
    std::set<std::string> atoms;
    efpast::detail::collect_atoms(psi, atoms);
    std::vector<std::string> labels(atoms.begin(), atoms.end());
    if (labels.empty()) labels.push_back("a");
    sigma = efpast::alphabet(labels, labels);
  }
  efpast::semigroup_automaton aut = efpast::compile_forest_formula(psi, sigma);
  emit(efpast::automaton_to_json(aut).dump(2), opt.out_path);
  return 0;
}

int run_algebra(const options& opt) {
  efpast::semigroup_automaton aut = efpast::load_automaton(slurp(opt.automaton_path));
  if (aut.kind != efpast::semigroup_automaton::language_kind::forest) {
    std::cerr << "error: the algebra dump is defined for forest-kind automata; "
                 "tree languages go through the per-label reduction\n";
    return 2;
  }
  efpast::morphism syn = efpast::syntactic_quotient(efpast::generate_algebra(aut));
  std::optional<efpast::dashv_set> dv;
  if (opt.dashv) dv = efpast::dashv_relation(syn.alg);
  emit(efpast::algebra_to_json(syn, aut.name, dv ? &*dv : nullptr).dump(2), opt.out_path);
  return 0;
}

int run_game(const options& opt) {
  efpast::forest left = efpast::parse_forest(arg_text(opt.left_arg));
  efpast::forest right = efpast::parse_forest(arg_text(opt.right_arg));
  efpast::player w = efpast::ef_game_winner(opt.rounds, left, right);
  emit(w == efpast::player::spoiler ? "Spoiler" : "Duplicator", opt.out_path);
  return 0;
}

int run_cross_check(const options& opt) {
  efpast::semigroup_automaton aut = efpast::load_automaton(slurp(opt.automaton_path));
  efpast::forest_formula psi = efpast::parse_forest_formula(arg_text(opt.formula_arg));
  auto cex = efpast::cross_check(psi, aut, opt.max_nodes);
  if (cex) {
    emit("counterexample: " + efpast::render(*cex), opt.out_path);
    return 1;
  }
  emit("agree (all forests with at most " + std::to_string(opt.max_nodes) + " nodes)",
       opt.out_path);
  return 0;
}

int run_search(const options& opt) {
  efpast::semigroup_automaton aut = efpast::load_automaton(slurp(opt.automaton_path));
  auto pair = efpast::bounded_indefinability_search(aut, opt.rounds, opt.max_nodes);
  if (pair) {
    emit("witness pair: " + efpast::render(pair->first) + " (in the language), " +
             efpast::render(pair->second) + " (not in the language); Duplicator wins " +
             std::to_string(opt.rounds) + " rounds",
         opt.out_path);
    return 1;
  }
  emit("no witness found up to bounds", opt.out_path);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Definability of regular forest languages in two-way unary temporal logic"};
  app.require_subcommand(1);
  options opt;

  auto add_common = [&](CLI::App* c) {
    c->add_option("-o", opt.out_path, "write output to a file instead of stdout");
    c->add_option("--jobs", opt.jobs, "parallel workers for the identity loops");
  };

  CLI::App* decide = app.add_subcommand("decide", "decide definability of an automaton's language");
  decide->add_option("--automaton", opt.automaton_path, "automaton JSON document")->required();
  decide->add_flag("--json", opt.json, "machine-readable output");
  decide->add_flag("--witnesses", opt.witnesses, "include a concrete separating pair");
  decide->add_option("--pump", opt.pump, "pump count for identity-3 witnesses");
  add_common(decide);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a formula on a forest");
  eval->add_option("--formula", opt.formula_arg, "forest formula (or node formula with --nodes)")
      ->required();
  eval->add_option("--input", opt.input_arg, "forest term, or @path")->required();
  eval->add_flag("--nodes", opt.nodes, "treat the formula as a node formula and list nodes");
  add_common(eval);

  CLI::App* compile = app.add_subcommand("compile", "compile a forest formula to an automaton");
  compile->add_option("--formula", opt.formula_arg, "forest formula, or @path")->required();
  compile->add_option("--leaves", opt.leaves_csv, "comma-separated leaf labels");
  compile->add_option("--inners", opt.inners_csv, "comma-separated inner labels");
  add_common(compile);

  CLI::App* algebra = app.add_subcommand("algebra", "dump the syntactic forest algebra");
  algebra->add_option("--automaton", opt.automaton_path, "automaton JSON document")->required();
  algebra->add_flag("--dashv", opt.dashv, "include the dashv relation");
  add_common(algebra);

  CLI::App* game = app.add_subcommand("game", "play the n-round game on two forests");
  game->add_option("--rounds", opt.rounds, "number of rounds")->required();
  game->add_option("--left", opt.left_arg, "left forest")->required();
  game->add_option("--right", opt.right_arg, "right forest")->required();
  add_common(game);

  CLI::App* oracle = app.add_subcommand("oracle", "enumeration-based ground truth");
  oracle->require_subcommand(1);
  CLI::App* cross = oracle->add_subcommand("cross-check", "formula vs automaton by enumeration");
  cross->add_option("--formula", opt.formula_arg, "forest formula, or @path")->required();
  cross->add_option("--automaton", opt.automaton_path, "automaton JSON document")->required();
  cross->add_option("--max-nodes", opt.max_nodes, "enumeration bound")->required();
  add_common(cross);
  CLI::App* search = oracle->add_subcommand("search", "game-based indefinability witnesses");
  search->add_option("--automaton", opt.automaton_path, "automaton JSON document")->required();
  search->add_option("--rounds", opt.rounds, "game rounds")->required();
  search->add_option("--max-nodes", opt.max_nodes, "enumeration bound")->required();
  add_common(search);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(decide)) return run_decide(opt);
    if (app.got_subcommand(eval)) return run_eval(opt);
    if (app.got_subcommand(compile)) return run_compile(opt);
    if (app.got_subcommand(algebra)) return run_algebra(opt);
    if (app.got_subcommand(game)) return run_game(opt);
    if (app.got_subcommand(oracle)) {
      if (oracle->got_subcommand(cross)) return run_cross_check(opt);
      if (oracle->got_subcommand(search)) return run_search(opt);
    }
  } catch (const efpast::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.get_name() << "\n";
    return 2;
  } catch (const efpast::resource_limit_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const efpast::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
