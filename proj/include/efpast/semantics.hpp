#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include <efpast/detail/node_table.hpp>
#include <efpast/formula.hpp>
#include <efpast/terms.hpp>

namespace efpast {

namespace detail {

// Truth of `phi` per preorder node. EF is a bottom-up sweep, FP a top-down
// one; both stay inside the node's own tree.
inline std::vector<char> eval_bits(const formula& phi, const node_table& t) {
  const std::size_t n = t.size();
  switch (phi.k()) {
    case formula::kind::truth: return std::vector<char>(n, 1);
    case formula::kind::falsity: return std::vector<char>(n, 0);
    case formula::kind::atom: {
      std::vector<char> out(n, 0);
      for (std::size_t i = 0; i < n; ++i) out[i] = t.nodes[i].label == phi.label();
      return out;
    }
    case formula::kind::negation: {
      std::vector<char> out = eval_bits(phi.lhs(), t);
      for (auto& b : out) b = !b;
      return out;
    }
    case formula::kind::conjunction: {
      std::vector<char> a = eval_bits(phi.lhs(), t);
      std::vector<char> b = eval_bits(phi.rhs(), t);
      for (std::size_t i = 0; i < n; ++i) a[i] = a[i] && b[i];
      return a;
    }
    case formula::kind::disjunction: {
      std::vector<char> a = eval_bits(phi.lhs(), t);
      std::vector<char> b = eval_bits(phi.rhs(), t);
      for (std::size_t i = 0; i < n; ++i) a[i] = a[i] || b[i];
      return a;
    }
    case formula::kind::ef: {
      std::vector<char> b = eval_bits(phi.lhs(), t);
      std::vector<char> out(n, 0);
      for (std::size_t i = n; i-- > 0;) {
        int p = t.nodes[i].parent;
        if (p >= 0) {
          std::size_t pp = static_cast<std::size_t>(p);
          out[pp] = out[pp] || b[i] || out[i];
        }
      }
      return out;
    }
    case formula::kind::fp: {
      std::vector<char> b = eval_bits(phi.lhs(), t);
      std::vector<char> out(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        int p = t.nodes[i].parent;
        if (p >= 0) {
          std::size_t pp = static_cast<std::size_t>(p);
          out[i] = b[pp] || out[pp];
        }
      }
      return out;
    }
  }
  throw internal_error("bad formula kind");
}

} // namespace detail

/// Exactly the nodes of `f` where `phi` holds, in preorder.
inline std::vector<node_id> eval_nodes(const formula& phi, const forest& f) {
  detail::node_table t = detail::node_table::build(f.trees());
  std::vector<char> bits = detail::eval_bits(phi, t);
  std::vector<node_id> out;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (bits[i]) out.push_back(t.nodes[i].id);
  return out;
}

inline bool forest_accepts(const forest_formula& psi, const forest& f) {
  detail::node_table t = detail::node_table::build(f.trees());
  std::function<bool(const forest_formula&)> go = [&](const forest_formula& g) -> bool {
    switch (g.k()) {
      case forest_formula::kind::truth: return true;
      case forest_formula::kind::falsity: return false;
      case forest_formula::kind::exists: {
        std::vector<char> bits = detail::eval_bits(g.body(), t);
        for (std::size_t r : t.roots)
          if (bits[r]) return true;
        return false;
      }
      case forest_formula::kind::negation: return !go(g.lhs());
      case forest_formula::kind::conjunction: return go(g.lhs()) && go(g.rhs());
      case forest_formula::kind::disjunction: return go(g.lhs()) || go(g.rhs());
    }
    throw internal_error("bad forest formula kind");
  };
  return go(psi);
}

/// True iff the satisfying nodes are pairwise incomparable under the
/// ancestor order.
inline bool check_antichain_on(const formula& phi, const forest& f) {
  detail::node_table t = detail::node_table::build(f.trees());
  std::vector<char> bits = detail::eval_bits(phi, t);
  std::vector<char> anc(t.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    int p = t.nodes[i].parent;
    if (p >= 0) {
      std::size_t pp = static_cast<std::size_t>(p);
      anc[i] = bits[pp] || anc[pp];
    }
    if (bits[i] && anc[i]) return false;
  }
  return true;
}

/// Classifier for a subtree at a selected node; matching subtrees are
/// replaced by a fresh leaf.
struct subtree_classifier {
  std::function<bool(const tree&)> contains;
  std::string leaf_label;
};

/// Simultaneously replaces every phi-node whose subtree matches exactly one
/// classifier by the classifier's leaf. Requires phi antichain on f.
inline forest antichain_substitute(const forest& f, const formula& phi,
                                   const std::vector<subtree_classifier>& classifiers) {
  if (!check_antichain_on(phi, f))
    throw validation_error("formula is not antichain on the given forest");
  std::set<node_id> selected;
  for (const auto& id : eval_nodes(phi, f)) selected.insert(id);

  std::function<tree_seq(const tree_seq&, node_id&)> rebuild =
      [&](const tree_seq& ts, node_id& cur) -> tree_seq {
    tree_seq out;
    out.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      cur.path.push_back(i);
      const tree& t = ts[i];
      if (selected.count(cur)) {
        int match = -1;
        for (std::size_t c = 0; c < classifiers.size(); ++c) {
          if (classifiers[c].contains(t)) {
            if (match >= 0)
              throw validation_error("two classifiers match the subtree at node " +
                                     to_string(cur));
            match = static_cast<int>(c);
          }
        }
        if (match >= 0)
          out.push_back(tree::leaf(classifiers[static_cast<std::size_t>(match)].leaf_label));
        else
          out.push_back(t);
      } else if (t.is_inner()) {
        out.push_back(tree::inner(t.label(), rebuild(t.children(), cur)));
      } else {
        out.push_back(t);
      }
      cur.path.pop_back();
    }
    return out;
  };

  node_id cur;
  return forest(rebuild(f.trees(), cur));
}

namespace detail {

// Conjoins `guard` to every subformula.
inline formula relativize(const formula& phi, const formula& guard) {
  switch (phi.k()) {
    case formula::kind::truth:
    case formula::kind::falsity:
    case formula::kind::atom: return phi && guard;
    case formula::kind::negation: return (!relativize(phi.lhs(), guard)) && guard;
    case formula::kind::conjunction:
      return (relativize(phi.lhs(), guard) && relativize(phi.rhs(), guard)) && guard;
    case formula::kind::disjunction:
      return (relativize(phi.lhs(), guard) || relativize(phi.rhs(), guard)) && guard;
    case formula::kind::ef: return formula::ef(relativize(phi.lhs(), guard)) && guard;
    case formula::kind::fp: return formula::fp(relativize(phi.lhs(), guard)) && guard;
  }
  throw internal_error("bad formula kind");
}

inline void collect_atoms(const formula& phi, std::set<std::string>& out) {
  switch (phi.k()) {
    case formula::kind::atom: out.insert(phi.label()); return;
    case formula::kind::truth:
    case formula::kind::falsity: return;
    case formula::kind::negation:
    case formula::kind::ef:
    case formula::kind::fp: collect_atoms(phi.lhs(), out); return;
    case formula::kind::conjunction:
    case formula::kind::disjunction:
      collect_atoms(phi.lhs(), out);
      collect_atoms(phi.rhs(), out);
      return;
  }
}

inline void collect_atoms(const forest_formula& psi, std::set<std::string>& out) {
  switch (psi.k()) {
    case forest_formula::kind::exists: collect_atoms(psi.body(), out); return;
    case forest_formula::kind::truth:
    case forest_formula::kind::falsity: return;
    case forest_formula::kind::negation: collect_atoms(psi.lhs(), out); return;
    case forest_formula::kind::conjunction:
    case forest_formula::kind::disjunction:
      collect_atoms(psi.lhs(), out);
      collect_atoms(psi.rhs(), out);
      return;
  }
}

} // namespace detail

/// Tree language paired with the fresh leaf label its occurrences shrink to.
struct antichain_part {
  formula language;
  std::string fresh_leaf;
};

/// Builds a forest formula equivalent, on every forest where `phi` is
/// antichain, to substituting the matched subtrees and then evaluating `k`.
///
/// Selection of class i is sel_i = phi ∧ rel(L_i), where rel conjoins the
/// guard (phi ∨ FP phi) to every subformula of L_i; this confines the
/// evaluation of L_i to the subtree of the selected node. K is transcribed
/// with survivors guarded by ¬FP(sel), fresh atoms a_i mapped to sel_i, and
/// original-label atoms additionally requiring ¬sel (a substituted node
/// carries the fresh label, not its old one).
inline forest_formula compose_antichain_formula(const formula& phi,
                                                const std::vector<antichain_part>& parts,
                                                const forest_formula& k,
                                                const alphabet& working) {
  std::set<std::string> fresh_seen;
  for (const auto& p : parts) {
    if (working.is_leaf_label(p.fresh_leaf) || working.is_inner_label(p.fresh_leaf))
      throw validation_error("label '" + p.fresh_leaf + "' is not fresh");
    if (!fresh_seen.insert(p.fresh_leaf).second)
      throw validation_error("duplicate fresh label '" + p.fresh_leaf + "'");
  }

  formula guard = phi || formula::fp(phi);
  std::vector<formula> sel_parts;
  formula sel = formula::constant(false);
  for (const auto& p : parts) {
    formula s = phi && detail::relativize(p.language, guard);
    sel_parts.push_back(s);
    sel = sel || s;
  }
  formula live = !formula::fp(sel);

  std::function<formula(const formula&)> transcribe = [&](const formula& g) -> formula {
    switch (g.k()) {
      case formula::kind::truth:
      case formula::kind::falsity: return g;
      case formula::kind::atom: {
        for (std::size_t i = 0; i < parts.size(); ++i)
          if (parts[i].fresh_leaf == g.label()) return sel_parts[i];
        return g && !sel;
      }
      case formula::kind::negation: return !transcribe(g.lhs());
      case formula::kind::conjunction: return transcribe(g.lhs()) && transcribe(g.rhs());
      case formula::kind::disjunction: return transcribe(g.lhs()) || transcribe(g.rhs());
      case formula::kind::ef: return formula::ef(transcribe(g.lhs()) && live);
      case formula::kind::fp: return formula::fp(transcribe(g.lhs()) && live);
    }
    throw internal_error("bad formula kind");
  };

  std::function<forest_formula(const forest_formula&)> go =
      [&](const forest_formula& g) -> forest_formula {
    switch (g.k()) {
      case forest_formula::kind::truth:
      case forest_formula::kind::falsity: return g;
      case forest_formula::kind::exists:
        return forest_formula::exists(transcribe(g.body()) && live);
      case forest_formula::kind::negation: return !go(g.lhs());
      case forest_formula::kind::conjunction: return go(g.lhs()) && go(g.rhs());
      case forest_formula::kind::disjunction: return go(g.lhs()) || go(g.rhs());
    }
    throw internal_error("bad forest formula kind");
  };

  return go(k);
}

/// The formula that holds at a tree's root exactly when some depth-1 child's
/// subtree satisfies `phi`: quantification inside `phi` is relativized to
/// non-root nodes, and the child is pinned by having an ancestor but no
/// grand-ancestor.
inline formula xk_formula(const formula& phi) {
  formula nonroot = formula::fp(formula::constant(true));
  return formula::ef(nonroot && !formula::fp(nonroot) &&
                     detail::relativize(phi, nonroot));
}

} // namespace efpast
