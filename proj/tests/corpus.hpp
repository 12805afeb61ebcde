#pragma once

// Shared fixtures for the test suites: the bundled automata, the formula
// corpus, direct language predicates, and a deterministic random formula
// generator.

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <efpast/efpast.hpp>

namespace corpus {

inline std::string data_file(const std::string& name) {
  std::string path = std::string(TEST_DATA_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing test data file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline efpast::semigroup_automaton load(const std::string& name) {
  return efpast::load_automaton(data_file(name));
}

// Direct predicate for ex3.json: every node with an a1 child has a proper
// ancestor with an a2 child.
inline bool ex3_member(const efpast::forest& f) {
  struct walk {
    static bool go(const efpast::tree& t, bool anc_has_a2_child) {
      if (!t.is_inner()) return true;
      bool has_a1 = false, has_a2 = false;
      for (const auto& c : t.children()) {
        if (c.is_leaf() && c.label() == "a1") has_a1 = true;
        if (c.is_leaf() && c.label() == "a2") has_a2 = true;
      }
      if (has_a1 && !anc_has_a2_child) return false;
      for (const auto& c : t.children())
        if (!go(c, anc_has_a2_child || has_a2)) return false;
      return true;
    }
  };
  for (const auto& t : f.trees())
    if (!walk::go(t, false)) return false;
  return true;
}

// Direct predicate for sibling.json: not both leaf labels present, and every
// b node has a sibling leaf labeled a1 or a2.
inline bool sibling_member(const efpast::forest& f) {
  struct scan {
    static void labels(const efpast::tree& t, bool& a1, bool& a2) {
      if (t.is_leaf()) {
        if (t.label() == "a1") a1 = true;
        if (t.label() == "a2") a2 = true;
      }
      for (const auto& c : t.children()) labels(c, a1, a2);
    }
    static bool roots_ok(const efpast::tree_seq& ts) {
      bool has_b = false, has_a = false;
      for (const auto& t : ts) {
        if (t.label() == "b") has_b = true;
        if (t.is_leaf() && (t.label() == "a1" || t.label() == "a2")) has_a = true;
      }
      if (has_b && !has_a) return false;
      for (const auto& t : ts)
        if (t.is_inner() && !roots_ok(t.children())) return false;
      return true;
    }
  };
  bool a1 = false, a2 = false;
  for (const auto& t : f.trees()) scan::labels(t, a1, a2);
  if (a1 && a2) return false;
  return scan::roots_ok(f.trees());
}

// Direct predicate for child_of_root.json (tree language): a single tree
// with some child of the root labeled a.
inline bool child_of_root_member(const efpast::forest& f) {
  if (f.trees().size() != 1 || !f.trees()[0].is_inner()) return false;
  for (const auto& c : f.trees()[0].children())
    if (c.label() == "a") return true;
  return false;
}

struct corpus_formula {
  std::string name;
  std::string text;
  efpast::alphabet sigma;
};

// Formulas exercised across the cross-check and adequacy tests. The first
// three are the worked formulas from the source material.
inline std::vector<corpus_formula> corpus_formulas() {
  efpast::alphabet acb({"a", "c"}, {"b"});
  return {
      {"guard", "E(EF(a & !FP(!b)))", acb},
      {"child_of_root", "E(EF(a & FP true & !FP FP true))", acb},
      {"no_root_leaf", "!E(!EF true)", acb},
      {"some_a", "E(a | EF a)", acb},
      {"root_a", "E(a)", acb},
      {"minimal_b", "E(b & !FP b)", acb},
      {"leaf_only", "E(!EF true & a) & !E(b)", acb},
      {"deep_guard", "E(EF(EF a) | c)", acb},
      {"no_c_anywhere", "!E(c | EF c)", acb},
      {"b_over_a", "E(b & EF a & !EF c)", acb},
  };
}

// Depth-2 formulas over a one-letter alphabet pair, for the game adequacy
// sweeps.
inline std::vector<std::string> adequacy_formulas() {
  return {
      "E(a)",
      "E(b)",
      "E(EF true)",
      "!E(!EF true)",
      "E(EF(a & !FP(!b)))",
      "E(b & EF a)",
      "E(EF EF true)",
      "E(a & FP true)",
      "E(EF a) & !E(EF b)",
      "E(b & !FP b)",
  };
}

// Deterministic random forest formulas of bounded nesting depth.
class formula_generator {
public:
  formula_generator(std::uint64_t seed, std::vector<std::string> labels)
      : rng_(seed), labels_(std::move(labels)) {}

  efpast::forest_formula next(unsigned max_depth) {
    unsigned exists_count = 1 + pick(2);
    efpast::forest_formula f = one_exists(max_depth);
    for (unsigned i = 0; i < exists_count; ++i) {
      efpast::forest_formula g = one_exists(max_depth);
      switch (pick(3)) {
        case 0: f = f && g; break;
        case 1: f = f || g; break;
        default: f = f && !g; break;
      }
    }
    return f;
  }

private:
  efpast::forest_formula one_exists(unsigned max_depth) {
    return efpast::forest_formula::exists(node(max_depth, 5));
  }

  efpast::formula node(unsigned depth, unsigned budget) {
    if (budget == 0) return leaf_case();
    unsigned r = pick(depth == 0 ? 5 : 8);
    switch (r) {
      case 0:
      case 1: return leaf_case();
      case 2: return !node(depth, budget - 1);
      case 3: return node(depth, budget / 2) && node(depth, budget / 2);
      case 4: return node(depth, budget / 2) || node(depth, budget / 2);
      case 5: return efpast::formula::ef(node(depth - 1, budget - 1));
      case 6: return efpast::formula::fp(node(depth - 1, budget - 1));
      default: return efpast::formula::ef(node(depth - 1, budget - 1));
    }
  }

  efpast::formula leaf_case() {
    unsigned r = pick(static_cast<unsigned>(labels_.size()) + 1);
    if (r == labels_.size()) return efpast::formula::constant(true);
    return efpast::formula::atom(labels_[r]);
  }

  unsigned pick(unsigned n) { return static_cast<unsigned>(rng_() % n); }

  std::mt19937_64 rng_;
  std::vector<std::string> labels_;
};

// A 200-element aperiodic vertical monoid: counting up to a threshold.
// H = {1..200} with capped addition, one leaf letter worth 1, one neutral
// inner letter; accept = {200}.
inline efpast::semigroup_automaton counting_automaton(int cap) {
  efpast::semigroup_automaton a;
  a.name = "counting";
  a.sigma = efpast::alphabet({"a"}, {"b"});
  a.kind = efpast::semigroup_automaton::language_kind::forest;
  a.elements.resize(static_cast<std::size_t>(cap));
  for (int i = 0; i < cap; ++i) a.elements[static_cast<std::size_t>(i)] = std::to_string(i + 1);
  a.add.assign(static_cast<std::size_t>(cap), std::vector<int>(static_cast<std::size_t>(cap)));
  for (int i = 0; i < cap; ++i)
    for (int j = 0; j < cap; ++j)
      a.add[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          std::min(i + j + 1, cap - 1);
  a.leaf_map["a"] = 0;
  std::vector<int> idrow(static_cast<std::size_t>(cap));
  for (int i = 0; i < cap; ++i) idrow[static_cast<std::size_t>(i)] = i;
  a.inner_map["b"] = idrow;
  a.accept = {cap - 1};
  return a;
}

} // namespace corpus
