#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <efpast/algebra.hpp>
#include <efpast/automaton.hpp>
#include <efpast/decision.hpp>
#include <efpast/formula.hpp>
#include <efpast/game.hpp>
#include <efpast/semantics.hpp>
#include <efpast/terms.hpp>

namespace efpast {

struct enumeration_spec {
  alphabet sigma;
  std::size_t max_nodes = 1;
  enum class dedup_mode { none, multiset } dedup = dedup_mode::none;
};

namespace detail {

// Trees and forests with an exact node budget; within one size class the
// order is by canonical rendering.
struct term_enumerator {
  std::vector<std::vector<tree>> trees_by_size;     // [size]
  std::vector<std::vector<tree_seq>> seqs_by_size;  // [size], nonempty forests

  term_enumerator(const alphabet& sigma, std::size_t max_nodes) {
    trees_by_size.resize(max_nodes + 1);
    seqs_by_size.resize(max_nodes + 1);
    for (std::size_t n = 1; n <= max_nodes; ++n) {
      auto& ts = trees_by_size[n];
      if (n == 1) {
        for (const auto& a : sigma.leaf_labels()) ts.push_back(tree::leaf(a));
      } else {
        for (const auto& b : sigma.inner_labels())
          for (const auto& kids : seqs_by_size[n - 1]) ts.push_back(tree::inner(b, kids));
      }
      auto& fs = seqs_by_size[n];
      for (std::size_t k = 1; k <= n; ++k) {
        for (const auto& first : trees_by_size[k]) {
          if (k == n) {
            fs.push_back(tree_seq{first});
          } else {
            for (const auto& rest : seqs_by_size[n - k]) {
              tree_seq seq;
              seq.reserve(rest.size() + 1);
              seq.push_back(first);
              seq.insert(seq.end(), rest.begin(), rest.end());
              fs.push_back(std::move(seq));
            }
          }
        }
      }
    }
  }
};

// Recursive multiset normal form: children sorted by their own normal form.
inline tree multiset_normal(const tree& t) {
  if (!t.is_inner()) return t;
  tree_seq kids;
  kids.reserve(t.children().size());
  for (const auto& c : t.children()) kids.push_back(multiset_normal(c));
  std::sort(kids.begin(), kids.end(),
            [](const tree& a, const tree& b) { return render(a) < render(b); });
  return tree::inner(t.label(), std::move(kids));
}

inline std::string multiset_key(const tree_seq& ts) {
  std::vector<std::string> keys;
  keys.reserve(ts.size());
  for (const auto& t : ts) keys.push_back(render(multiset_normal(t)));
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) {
    out += k;
    out += '+';
  }
  return out;
}

} // namespace detail

/// Equality of forests up to recursively reordering siblings.
inline bool equal_up_to_sibling_order(const forest& a, const forest& b) {
  return detail::multiset_key(a.trees()) == detail::multiset_key(b.trees());
}

/// Every well-formed forest with at most max_nodes nodes, each exactly once
/// (up to the dedup mode), ordered by node count then canonical rendering.
inline std::vector<forest> enumerate_forests(const enumeration_spec& spec) {
  if (spec.max_nodes < 1) throw validation_error("max_nodes must be at least 1");
  detail::term_enumerator en(spec.sigma, spec.max_nodes);
  std::vector<forest> out;
  std::set<std::string> seen_multiset;
  for (std::size_t n = 1; n <= spec.max_nodes; ++n) {
    std::vector<tree_seq> seqs = en.seqs_by_size[n];
    std::sort(seqs.begin(), seqs.end(), [](const tree_seq& a, const tree_seq& b) {
      return detail::render_seq(a) < detail::render_seq(b);
    });
    for (auto& s : seqs) {
      if (spec.dedup == enumeration_spec::dedup_mode::multiset) {
        if (!seen_multiset.insert(detail::multiset_key(s)).second) continue;
      }
      out.push_back(forest(std::move(s)));
    }
  }
  return out;
}

/// Every context with at most max_nodes nodes (the hole counts as a node),
/// same ordering scheme.
inline std::vector<context> enumerate_contexts(const alphabet& sigma,
                                               std::size_t max_nodes) {
  if (max_nodes < 1) throw validation_error("max_nodes must be at least 1");
  detail::term_enumerator en(sigma, max_nodes);

  // ctx_trees[n]: trees of size n containing exactly one hole.
  std::vector<std::vector<tree>> ctx_trees(max_nodes + 1);
  std::vector<std::vector<tree_seq>> ctx_seqs(max_nodes + 1);
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    if (n == 1) ctx_trees[n].push_back(tree::hole());
    if (n >= 2)
      for (const auto& b : sigma.inner_labels())
        for (const auto& kids : ctx_seqs[n - 1]) ctx_trees[n].push_back(tree::inner(b, kids));
    // sequences of total size n with exactly one holed tree
    for (std::size_t k = 1; k <= n; ++k) {
      // first tree holed, rest plain
      for (const auto& first : ctx_trees[k]) {
        if (k == n) {
          ctx_seqs[n].push_back(tree_seq{first});
        } else {
          for (const auto& rest : en.seqs_by_size[n - k]) {
            tree_seq seq;
            seq.push_back(first);
            seq.insert(seq.end(), rest.begin(), rest.end());
            ctx_seqs[n].push_back(std::move(seq));
          }
        }
      }
      // first tree plain, hole further right
      if (k < n)
        for (const auto& first : en.trees_by_size[k])
          for (const auto& rest : ctx_seqs[n - k]) {
            tree_seq seq;
            seq.push_back(first);
            seq.insert(seq.end(), rest.begin(), rest.end());
            ctx_seqs[n].push_back(std::move(seq));
          }
    }
  }
  std::vector<context> out;
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    std::vector<tree_seq> seqs = ctx_seqs[n];
    std::sort(seqs.begin(), seqs.end(), [](const tree_seq& a, const tree_seq& b) {
      return detail::render_seq(a) < detail::render_seq(b);
    });
    for (auto& s : seqs) out.push_back(context(std::move(s)));
  }
  return out;
}

/// First forest (in enumeration order) on which the formula and the
/// automaton disagree, if any.
inline std::optional<forest> cross_check(const forest_formula& psi,
                                         const semigroup_automaton& aut,
                                         std::size_t max_nodes) {
  enumeration_spec spec{aut.sigma, max_nodes, enumeration_spec::dedup_mode::none};
  for (const auto& f : enumerate_forests(spec))
    if (forest_accepts(psi, f) != accepts(aut, f)) return f;
  return std::nullopt;
}

/// Searches for a pair straddling the language on which Duplicator wins the
/// n-round game; such a pair certifies that no forest formula of nesting
/// depth <= rounds defines the language. Absence of a pair proves nothing.
inline std::optional<std::pair<forest, forest>> bounded_indefinability_search(
    const semigroup_automaton& aut, unsigned rounds, std::size_t max_nodes) {
  if (aut.kind != semigroup_automaton::language_kind::forest)
    throw validation_error("indefinability search requires a forest-kind automaton");
  enumeration_spec spec{aut.sigma, max_nodes, enumeration_spec::dedup_mode::none};
  std::vector<forest> all = enumerate_forests(spec);
  std::vector<char> member;
  member.reserve(all.size());
  for (const auto& f : all) member.push_back(accepts(aut, f));
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!member[i]) continue;
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (member[j]) continue;
      if (ef_game_winner(rounds, all[i], all[j]) == player::duplicator)
        return std::make_pair(all[i], all[j]);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Direct verification of the dashv definition against the fixpoint.
// ---------------------------------------------------------------------------

struct dashv_check_result {
  bool agree = true;
  std::optional<std::pair<int, int>> discrepancy;
  std::vector<std::pair<int, int>> direct_pairs; // row-major order
};

/// Computes the decomposition-based relation restricted to length <= max_len
/// and verifies (a) it is contained in the fixpoint and (b) every fixpoint
/// pair re-derives from its recorded derivation.
inline dashv_check_result dashv_direct_check(const forest_algebra& alg, unsigned max_len) {
  const std::size_t nv = alg.v_size();
  const std::size_t nh = alg.h_size();
  dashv_set fix = dashv_relation(alg);

  // Pairs (v0...vk, v0(h1+v1)...(hk+vk)) by dynamic programming on k.
  std::vector<char> direct(nv * nv, 0);
  std::vector<char> layer(nv * nv, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    layer[v * nv + v] = 1;
    direct[v * nv + v] = 1;
  }
  for (unsigned k = 1; k <= max_len; ++k) {
    std::vector<char> next(nv * nv, 0);
    for (std::size_t u = 0; u < nv; ++u)
      for (std::size_t w = 0; w < nv; ++w) {
        if (!layer[u * nv + w]) continue;
        for (std::size_t v = 0; v < nv; ++v)
          for (std::size_t h = 0; h < nh; ++h) {
            std::size_t a = static_cast<std::size_t>(
                alg.compose_at(static_cast<int>(u), static_cast<int>(v)));
            std::size_t b = static_cast<std::size_t>(alg.compose_at(
                static_cast<int>(w), alg.h_plus_v(static_cast<int>(h), static_cast<int>(v))));
            next[a * nv + b] = 1;
            direct[a * nv + b] = 1;
          }
      }
    layer = std::move(next);
  }

  dashv_check_result res;
  for (std::size_t u = 0; u < nv; ++u)
    for (std::size_t w = 0; w < nv; ++w)
      if (direct[u * nv + w])
        res.direct_pairs.emplace_back(static_cast<int>(u), static_cast<int>(w));

  // Containment: every directly decomposable pair is in the fixpoint.
  for (const auto& [u, w] : res.direct_pairs)
    if (!fix.contains(u, w)) {
      res.agree = false;
      res.discrepancy = std::make_pair(u, w);
      return res;
    }

  // Every fixpoint pair must re-derive from its trace.
  for (std::size_t i = 0; i < fix.order.size(); ++i) {
    const auto& [u, w] = fix.order[i];
    const auto& d = fix.how[i];
    bool ok = false;
    switch (d.rule) {
      case 0: ok = u == d.a && w == d.a; break;
      case 1: ok = u == d.a && w == alg.h_plus_v(d.b, d.a); break;
      case 2: ok = u == d.a && w == alg.v_plus_h(d.a, d.b); break;
      case 3: {
        if (d.a < static_cast<int>(i) && d.b < static_cast<int>(i)) {
          auto [ua, wa] = fix.order[static_cast<std::size_t>(d.a)];
          auto [ub, wb] = fix.order[static_cast<std::size_t>(d.b)];
          ok = u == alg.compose_at(ua, ub) && w == alg.compose_at(wa, wb);
        }
        break;
      }
      default: break;
    }
    if (!ok) {
      res.agree = false;
      res.discrepancy = std::make_pair(u, w);
      return res;
    }
  }
  return res;
}

} // namespace efpast
