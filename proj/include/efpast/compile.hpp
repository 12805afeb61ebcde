#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <efpast/automaton.hpp>
#include <efpast/errors.hpp>
#include <efpast/formula.hpp>

namespace efpast {

struct compile_limits {
  std::size_t max_profiles = 5000;    // reachable H elements
  std::size_t max_fp_arguments = 12;  // ancestor-environment bits
  std::size_t max_closure = 256;      // distinct subformulas
};

namespace detail {

// Flattened closure of node subformulas, children before parents.
struct closure_table {
  struct cnode {
    formula::kind k;
    std::string label;
    int a = -1, b = -1;
    unsigned rank = 0;
  };
  std::vector<cnode> nodes;
  std::map<std::string, int> index; // by canonical rendering

  int add(const formula& f) {
    std::string key = render(f);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    cnode n;
    n.k = f.k();
    switch (f.k()) {
      case formula::kind::truth:
      case formula::kind::falsity: break;
      case formula::kind::atom: n.label = f.label(); break;
      case formula::kind::negation:
      case formula::kind::ef:
      case formula::kind::fp:
        n.a = add(f.lhs());
        break;
      case formula::kind::conjunction:
      case formula::kind::disjunction:
        n.a = add(f.lhs());
        n.b = add(f.rhs());
        break;
    }
    if (n.a >= 0) n.rank = nodes[static_cast<std::size_t>(n.a)].rank;
    if (n.b >= 0) n.rank = std::max(n.rank, nodes[static_cast<std::size_t>(n.b)].rank);
    if (f.k() == formula::kind::ef || f.k() == formula::kind::fp) n.rank += 1;
    int idx = static_cast<int>(nodes.size());
    nodes.push_back(std::move(n));
    index.emplace(std::move(key), idx);
    return idx;
  }
};

struct u64_vec_hash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (std::uint64_t x : v)
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

} // namespace detail

/// Translates a forest formula into an equivalent semigroup automaton.
///
/// An H element is the pair of functions (roots, anywhere) from
/// ancestor-truth environments to subsets of the closure: which closure
/// formulas hold at some root, respectively at some node, of the forest,
/// assuming the environment describes what holds at some proper ancestor
/// above the forest's roots. Evaluation inside a forest depends on the
/// environment only through the arguments of FP, so environments range over
/// subsets of those; + is pointwise union; the inner transformation is a
/// fixpoint iterated once per modal rank.
inline semigroup_automaton compile_forest_formula(const forest_formula& psi,
                                                  const alphabet& sigma,
                                                  const compile_limits& lim = {}) {
  detail::closure_table ct;
  std::function<void(const forest_formula&)> collect = [&](const forest_formula& g) {
    switch (g.k()) {
      case forest_formula::kind::truth:
      case forest_formula::kind::falsity: return;
      case forest_formula::kind::exists: ct.add(g.body()); return;
      case forest_formula::kind::negation: collect(g.lhs()); return;
      case forest_formula::kind::conjunction:
      case forest_formula::kind::disjunction:
        collect(g.lhs());
        collect(g.rhs());
        return;
    }
  };
  collect(psi);
  const std::size_t nc = ct.nodes.size();
  if (nc > lim.max_closure)
    throw resource_limit_error("formula closure exceeds " + std::to_string(lim.max_closure) +
                               " subformulas");

  unsigned max_rank = 0;
  for (const auto& n : ct.nodes) max_rank = std::max(max_rank, n.rank);

  // FP arguments index the ancestor environment.
  std::vector<int> fp_pos(nc, -1);
  std::vector<int> fp_args;
  for (const auto& n : ct.nodes)
    if (n.k == formula::kind::fp && fp_pos[static_cast<std::size_t>(n.a)] < 0) {
      fp_pos[static_cast<std::size_t>(n.a)] = static_cast<int>(fp_args.size());
      fp_args.push_back(n.a);
    }
  if (fp_args.size() > lim.max_fp_arguments)
    throw resource_limit_error("formula has more than " +
                               std::to_string(lim.max_fp_arguments) +
                               " distinct FP arguments");
  const std::size_t n_envs = static_cast<std::size_t>(1) << fp_args.size();

  const std::size_t words = (nc + 63) / 64;
  using bits = std::vector<std::uint64_t>; // truth set over the closure
  auto get = [&](const bits& b, int i) {
    return (b[static_cast<std::size_t>(i) / 64] >> (static_cast<std::size_t>(i) % 64)) & 1u;
  };
  auto set = [&](bits& b, int i) {
    b[static_cast<std::size_t>(i) / 64] |= std::uint64_t(1) << (static_cast<std::size_t>(i) % 64);
  };
  auto env_of = [&](const bits& truth) {
    std::size_t env = 0;
    for (std::size_t p = 0; p < fp_args.size(); ++p)
      if (get(truth, fp_args[p])) env |= std::size_t(1) << p;
    return env;
  };

  // Truth of every closure formula at one node, given its label, the
  // ancestor environment, and the set of formulas true somewhere strictly
  // below it.
  auto eval_node = [&](const std::string& label, std::size_t env, const bits& below) {
    bits t(words, 0);
    for (std::size_t i = 0; i < nc; ++i) {
      const auto& n = ct.nodes[i];
      bool v = false;
      switch (n.k) {
        case formula::kind::truth: v = true; break;
        case formula::kind::falsity: v = false; break;
        case formula::kind::atom: v = n.label == label; break;
        case formula::kind::negation: v = !get(t, n.a); break;
        case formula::kind::conjunction: v = get(t, n.a) && get(t, n.b); break;
        case formula::kind::disjunction: v = get(t, n.a) || get(t, n.b); break;
        case formula::kind::ef: v = get(below, n.a); break;
        case formula::kind::fp:
          v = (env >> static_cast<std::size_t>(fp_pos[static_cast<std::size_t>(n.a)])) & 1;
          break;
      }
      if (v) set(t, static_cast<int>(i));
    }
    return t;
  };

  // A profile is stored flat: for each environment, the roots set then the
  // anywhere set.
  const std::size_t stride = 2 * words;
  auto roots_at = [&](const bits& prof, std::size_t env) {
    return bits(prof.begin() + static_cast<std::ptrdiff_t>(env * stride),
                prof.begin() + static_cast<std::ptrdiff_t>(env * stride + words));
  };
  auto anywhere_at = [&](const bits& prof, std::size_t env) {
    return bits(prof.begin() + static_cast<std::ptrdiff_t>(env * stride + words),
                prof.begin() + static_cast<std::ptrdiff_t>(env * stride + 2 * words));
  };

  auto leaf_profile = [&](const std::string& a) {
    bits prof(n_envs * stride, 0);
    bits none(words, 0);
    for (std::size_t env = 0; env < n_envs; ++env) {
      bits t = eval_node(a, env, none);
      for (std::size_t w = 0; w < words; ++w) {
        prof[env * stride + w] = t[w];
        prof[env * stride + words + w] = t[w];
      }
    }
    return prof;
  };

  auto wrap_profile = [&](const std::string& b, const bits& h) {
    bits prof(n_envs * stride, 0);
    for (std::size_t env = 0; env < n_envs; ++env) {
      bits t(words, 0);
      for (unsigned round = 0; round <= max_rank + 1; ++round) {
        std::size_t child_env = env | env_of(t);
        bits below = anywhere_at(h, child_env);
        bits t2 = eval_node(b, env, below);
        if (round == max_rank + 1 && t2 != t)
          throw internal_error("profile fixpoint did not stabilize within the rank bound");
        t = std::move(t2);
      }
      std::size_t child_env = env | env_of(t);
      for (std::size_t w = 0; w < words; ++w) {
        prof[env * stride + w] = t[w];
        prof[env * stride + words + w] = t[w] | h[child_env * stride + words + w];
      }
    }
    return prof;
  };

  auto union_profile = [&](const bits& x, const bits& y) {
    bits out(n_envs * stride);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] | y[i];
    return out;
  };

  // Closure of the reachable profiles under + and the inner maps.
  std::unordered_map<bits, int, detail::u64_vec_hash> index;
  std::vector<bits> profiles;
  auto intern = [&](bits p) {
    auto it = index.find(p);
    if (it != index.end()) return it->second;
    int idx = static_cast<int>(profiles.size());
    if (profiles.size() >= lim.max_profiles)
      throw resource_limit_error("compiled profile space exceeds " +
                                 std::to_string(lim.max_profiles) + " elements");
    index.emplace(p, idx);
    profiles.push_back(std::move(p));
    return idx;
  };

  std::map<std::string, int> leaf_map;
  for (const auto& a : sigma.leaf_labels()) leaf_map[a] = intern(leaf_profile(a));
  if (leaf_map.empty()) throw validation_error("compilation needs a nonempty leaf alphabet");

  // Union is commutative, so one order per pair suffices for discovery.
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    for (const auto& b : sigma.inner_labels()) intern(wrap_profile(b, profiles[i]));
    for (std::size_t j = 0; j <= i; ++j) intern(union_profile(profiles[i], profiles[j]));
  }
  const std::size_t nh = profiles.size();

  semigroup_automaton aut;
  aut.name = "compiled";
  aut.sigma = sigma;
  aut.kind = semigroup_automaton::language_kind::forest;
  aut.elements.resize(nh);
  for (std::size_t i = 0; i < nh; ++i) aut.elements[i] = "p" + std::to_string(i);
  aut.add.assign(nh, std::vector<int>(nh));
  for (std::size_t i = 0; i < nh; ++i)
    for (std::size_t j = 0; j < nh; ++j)
      aut.add[i][j] = index.at(union_profile(profiles[i], profiles[j]));
  aut.leaf_map = leaf_map;
  for (const auto& b : sigma.inner_labels()) {
    std::vector<int> row(nh);
    for (std::size_t i = 0; i < nh; ++i) row[i] = index.at(wrap_profile(b, profiles[i]));
    aut.inner_map[b] = std::move(row);
  }

  // Acceptance: the boolean skeleton evaluated on roots(empty environment).
  std::function<bool(const forest_formula&, const bits&)> sk =
      [&](const forest_formula& g, const bits& prof) -> bool {
    switch (g.k()) {
      case forest_formula::kind::truth: return true;
      case forest_formula::kind::falsity: return false;
      case forest_formula::kind::exists: {
        int body = ct.index.at(render(g.body()));
        bits r = roots_at(prof, 0);
        return get(r, body) != 0;
      }
      case forest_formula::kind::negation: return !sk(g.lhs(), prof);
      case forest_formula::kind::conjunction: return sk(g.lhs(), prof) && sk(g.rhs(), prof);
      case forest_formula::kind::disjunction: return sk(g.lhs(), prof) || sk(g.rhs(), prof);
    }
    throw internal_error("bad forest formula kind");
  };
  for (std::size_t i = 0; i < nh; ++i)
    if (sk(psi, profiles[i])) aut.accept.push_back(static_cast<int>(i));

  aut.validate();
  return aut;
}

} // namespace efpast
