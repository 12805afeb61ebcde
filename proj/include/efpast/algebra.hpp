#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include <efpast/automaton.hpp>
#include <efpast/errors.hpp>
#include <efpast/terms.hpp>

namespace efpast {

struct generation_limits {
  std::size_t max_v_elements = 20000; // hard cap on the generated vertical monoid
  std::size_t tables_threshold = 4096; // materialize the compose table up to this |V|
};

/// Two-sorted finite forest algebra: horizontal semigroup H, vertical monoid
/// V with neutral element, action of V on H and the two insertions h+v, v+h
/// represented through embeddings h+[] and []+h.
struct forest_algebra {
  std::vector<std::string> h_names;
  std::vector<std::string> v_names;
  std::vector<std::vector<int>> add;     // H x H -> H
  std::vector<std::vector<int>> compose; // V x V -> V; may be empty for large V
  int identity = 0;                      // index in V
  std::vector<std::vector<int>> act;     // V x H -> H
  std::vector<int> embed_left;           // h -> index of (h + [])
  std::vector<int> embed_right;          // h -> index of ([] + h)

  std::size_t h_size() const { return h_names.size(); }
  std::size_t v_size() const { return v_names.size(); }
  bool has_compose_table() const { return !compose.empty(); }

  int h_plus_v(int h, int v) const { return compose_at(embed_left[static_cast<std::size_t>(h)], v); }
  int v_plus_h(int v, int h) const { return compose_at(embed_right[static_cast<std::size_t>(h)], v); }

  int compose_at(int v, int w) const {
    return compose[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)];
  }
  int act_at(int v, int h) const {
    return act[static_cast<std::size_t>(v)][static_cast<std::size_t>(h)];
  }
  int add_at(int h, int g) const {
    return add[static_cast<std::size_t>(h)][static_cast<std::size_t>(g)];
  }

  int power(int v, unsigned k) const {
    int r = identity;
    for (unsigned i = 0; i < k; ++i) r = compose_at(r, v);
    return r;
  }

  /// Full axiom check: associativity of both compositions, neutrality of the
  /// identity, the action law, faithfulness, and the two insertion axioms.
  /// Cost is cubic; call on algebras of reasonable size.
  void validate() const {
    const int nh = static_cast<int>(h_size());
    const int nv = static_cast<int>(v_size());
    if (nh == 0 || nv == 0) throw validation_error("algebra carrier must be nonempty");
    if (!has_compose_table()) throw validation_error("compose table not materialized");
    for (int i = 0; i < nh; ++i)
      for (int j = 0; j < nh; ++j)
        for (int k = 0; k < nh; ++k)
          if (add_at(add_at(i, j), k) != add_at(i, add_at(j, k)))
            throw validation_error("H addition is not associative");
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j)
        for (int k = 0; k < nv; ++k)
          if (compose_at(compose_at(i, j), k) != compose_at(i, compose_at(j, k)))
            throw validation_error("V composition is not associative");
    for (int v = 0; v < nv; ++v)
      if (compose_at(identity, v) != v || compose_at(v, identity) != v)
        throw validation_error("identity element is not neutral");
    for (int v = 0; v < nv; ++v)
      for (int w = 0; w < nv; ++w)
        for (int h = 0; h < nh; ++h)
          if (act_at(compose_at(v, w), h) != act_at(v, act_at(w, h)))
            throw validation_error("insertion is not a monoid action");
    for (int v = 0; v < nv; ++v)
      for (int w = v + 1; w < nv; ++w)
        if (act[static_cast<std::size_t>(v)] == act[static_cast<std::size_t>(w)])
          throw validation_error("distinct context types must induce different functions");
    for (int h = 0; h < nh; ++h) {
      for (int v = 0; v < nv; ++v)
        for (int g = 0; g < nh; ++g) {
          if (act_at(compose_at(embed_left[static_cast<std::size_t>(h)], v), g) !=
              add_at(h, act_at(v, g)))
            throw validation_error("left insertion axiom fails");
          if (act_at(compose_at(embed_right[static_cast<std::size_t>(h)], v), g) !=
              add_at(act_at(v, g), h))
            throw validation_error("right insertion axiom fails");
        }
    }
  }
};

namespace detail {

struct int_vec_hash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

} // namespace detail

/// A recognizing morphism into a finite forest algebra, with a witness term
/// for every element and the generator images of the alphabet.
struct morphism {
  forest_algebra alg;
  alphabet sigma;
  std::map<std::string, int> leaf_to_h;  // A -> H
  std::map<std::string, int> inner_to_v; // B -> V
  std::vector<forest> witness_h;         // one per H element
  std::vector<context> witness_v;        // one per V element
  std::vector<int> accept;               // sorted H indices

  // act rows are faithful, so a V element is identified by its function:
  // used to compose without the full table.
  std::unordered_map<std::vector<int>, int, detail::int_vec_hash> func_index;

  bool is_accepting(int h) const {
    return std::binary_search(accept.begin(), accept.end(), h);
  }

  int compose_v(int v, int w) const {
    if (alg.has_compose_table()) return alg.compose_at(v, w);
    std::vector<int> f(alg.h_size());
    for (std::size_t h = 0; h < alg.h_size(); ++h)
      f[h] = alg.act_at(v, alg.act_at(w, static_cast<int>(h)));
    auto it = func_index.find(f);
    if (it == func_index.end()) throw internal_error("composition left the generated monoid");
    return it->second;
  }

  int value_of(const tree& t) const {
    if (t.is_leaf()) {
      auto it = leaf_to_h.find(t.label());
      if (it == leaf_to_h.end())
        throw validation_error("label '" + t.label() + "' outside the morphism alphabet");
      return it->second;
    }
    auto it = inner_to_v.find(t.label());
    if (it == inner_to_v.end())
      throw validation_error("label '" + t.label() + "' outside the morphism alphabet");
    return alg.act_at(it->second, value_of_seq(t.children()));
  }

  int value_of(const forest& f) const { return value_of_seq(f.trees()); }

  /// The V element a concrete context maps to.
  int value_of(const context& c) const { return value_of_ctx_seq(c.trees()); }

  bool accepts_forest(const forest& f) const { return is_accepting(value_of(f)); }

  /// Every stored witness must evaluate to its element.
  void validate_witnesses() const {
    for (std::size_t h = 0; h < witness_h.size(); ++h)
      if (value_of(witness_h[h]) != static_cast<int>(h))
        throw internal_error("witness forest for " + alg.h_names[h] +
                             " does not evaluate to its element");
    for (std::size_t v = 0; v < witness_v.size(); ++v)
      if (value_of(witness_v[v]) != static_cast<int>(v))
        throw internal_error("witness context for " + alg.v_names[v] +
                             " does not evaluate to its element");
  }

private:
  int value_of_seq(const tree_seq& ts) const {
    std::optional<int> acc;
    for (const auto& t : ts) {
      int v = value_of(t);
      acc = acc ? alg.add_at(*acc, v) : v;
    }
    return *acc;
  }

  int value_of_ctx_seq(const tree_seq& ts) const {
    std::size_t holed = ts.size();
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (detail::count_holes(ts[i]) > 0) {
        holed = i;
        break;
      }
    std::optional<int> left, right;
    for (std::size_t i = 0; i < holed; ++i) {
      int v = value_of(ts[i]);
      left = left ? alg.add_at(*left, v) : v;
    }
    for (std::size_t i = holed + 1; i < ts.size(); ++i) {
      int v = value_of(ts[i]);
      right = right ? alg.add_at(*right, v) : v;
    }
    int mid = value_of_ctx_tree(ts[holed]);
    int out = mid;
    if (right) out = compose_v(alg.embed_right[static_cast<std::size_t>(*right)], out);
    if (left) out = compose_v(alg.embed_left[static_cast<std::size_t>(*left)], out);
    return out;
  }

  int value_of_ctx_tree(const tree& t) const {
    if (t.is_hole()) return alg.identity;
    auto it = inner_to_v.find(t.label());
    if (it == inner_to_v.end())
      throw validation_error("label '" + t.label() + "' outside the morphism alphabet");
    return compose_v(it->second, value_of_ctx_seq(t.children()));
  }
};

// ---------------------------------------------------------------------------
// Generation: the subalgebra reachable from the alphabet images, with
// breadth-minimal witness terms.
// ---------------------------------------------------------------------------

namespace detail {

// Witness bookkeeping during relaxation: node count plus the canonical sort
// key (hole sorts after every label). Values are materialized at the end
// from the best construction recorded per element.
struct wit_state {
  bool have = false;
  std::size_t size = 0;
  std::string key;
  // construction: 0 leaf(label) / 1 add(i,j) / 2 inner(label, i)   (H side)
  //               0 empty / 1 generator g / 2 plug(v, g)           (V side)
  int rule = -1;
  int a = -1, b = -1;
  std::string label;
};

inline bool wit_better(std::size_t size, const std::string& key, const wit_state& cur) {
  if (!cur.have) return true;
  if (size != cur.size) return size < cur.size;
  return key < cur.key;
}

} // namespace detail

/// Closes the alphabet images under + and the inner transformations, builds
/// the generated vertical monoid as functions on the reachable horizontal
/// part, and equips every element with a minimal witness term (smallest node
/// count, ties broken by canonical rendering with the hole sorting last).
inline morphism generate_algebra(const semigroup_automaton& aut,
                                 const generation_limits& lim = {}) {
  const std::size_t n_all = aut.size();

  // Reachable H: closure of the leaf images under add and the inner maps.
  std::vector<char> in_h(n_all, 0);
  std::vector<int> found;
  auto discover = [&](int h) {
    if (!in_h[static_cast<std::size_t>(h)]) {
      in_h[static_cast<std::size_t>(h)] = 1;
      found.push_back(h);
    }
  };
  for (const auto& a : aut.sigma.leaf_labels()) discover(aut.leaf_map.at(a));
  if (found.empty()) throw validation_error("automaton has no leaf labels");
  for (std::size_t i = 0; i < found.size(); ++i) {
    int h = found[i];
    for (const auto& b : aut.sigma.inner_labels())
      discover(aut.inner_map.at(b)[static_cast<std::size_t>(h)]);
    for (std::size_t j = 0; j <= i; ++j) {
      int g = found[j];
      discover(aut.add[static_cast<std::size_t>(h)][static_cast<std::size_t>(g)]);
      discover(aut.add[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)]);
    }
  }

  // H elements keep the automaton's element order.
  std::vector<int> h0_to_aut;
  std::vector<int> aut_to_h0(n_all, -1);
  for (std::size_t i = 0; i < n_all; ++i)
    if (in_h[i]) {
      aut_to_h0[i] = static_cast<int>(h0_to_aut.size());
      h0_to_aut.push_back(static_cast<int>(i));
    }
  const std::size_t nh = h0_to_aut.size();

  std::vector<std::vector<int>> add0(nh, std::vector<int>(nh));
  for (std::size_t i = 0; i < nh; ++i)
    for (std::size_t j = 0; j < nh; ++j)
      add0[i][j] = aut_to_h0[static_cast<std::size_t>(
          aut.add[static_cast<std::size_t>(h0_to_aut[i])]
                 [static_cast<std::size_t>(h0_to_aut[j])])];

  // Generators of the vertical monoid, in a fixed order: the inner labels,
  // then h+[] and []+h for every reachable h.
  struct generator {
    std::vector<int> fn;
    int rule; // 0: inner label, 1: embed_left(h), 2: embed_right(h)
    int h = -1;
    std::string label;
  };
  std::vector<generator> gens;
  for (const auto& b : aut.sigma.inner_labels()) {
    generator g;
    g.rule = 0;
    g.label = b;
    g.fn.resize(nh);
    const auto& row = aut.inner_map.at(b);
    for (std::size_t h = 0; h < nh; ++h)
      g.fn[h] = aut_to_h0[static_cast<std::size_t>(row[static_cast<std::size_t>(h0_to_aut[h])])];
    gens.push_back(std::move(g));
  }
  for (std::size_t h = 0; h < nh; ++h) {
    generator g;
    g.rule = 1;
    g.h = static_cast<int>(h);
    g.fn.resize(nh);
    for (std::size_t x = 0; x < nh; ++x) g.fn[x] = add0[h][x];
    gens.push_back(std::move(g));
  }
  for (std::size_t h = 0; h < nh; ++h) {
    generator g;
    g.rule = 2;
    g.h = static_cast<int>(h);
    g.fn.resize(nh);
    for (std::size_t x = 0; x < nh; ++x) g.fn[x] = add0[x][h];
    gens.push_back(std::move(g));
  }

  // BFS closure of the submonoid generated by right-composition.
  std::unordered_map<std::vector<int>, int, detail::int_vec_hash> v_index;
  std::vector<std::vector<int>> v_funcs;
  std::vector<std::vector<int>> edge; // edge[v][g]
  {
    std::vector<int> id(nh);
    for (std::size_t i = 0; i < nh; ++i) id[i] = static_cast<int>(i);
    v_index.emplace(id, 0);
    v_funcs.push_back(std::move(id));
  }
  for (std::size_t v = 0; v < v_funcs.size(); ++v) {
    edge.emplace_back(gens.size());
    for (std::size_t g = 0; g < gens.size(); ++g) {
      std::vector<int> f(nh);
      for (std::size_t h = 0; h < nh; ++h)
        f[h] = v_funcs[v][static_cast<std::size_t>(gens[g].fn[h])];
      auto it = v_index.find(f);
      int idx;
      if (it == v_index.end()) {
        idx = static_cast<int>(v_funcs.size());
        if (v_funcs.size() >= lim.max_v_elements)
          throw resource_limit_error(
              "generated vertical monoid exceeds the configured bound of " +
              std::to_string(lim.max_v_elements) + " elements");
        v_index.emplace(f, idx);
        v_funcs.push_back(std::move(f));
      } else {
        idx = it->second;
      }
      edge[v][g] = idx;
    }
  }
  const std::size_t nv = v_funcs.size();

  // Minimal witness forests for H.
  std::vector<detail::wit_state> wh(nh);
  for (const auto& a : aut.sigma.leaf_labels()) {
    int h = aut_to_h0[static_cast<std::size_t>(aut.leaf_map.at(a))];
    auto& w = wh[static_cast<std::size_t>(h)];
    if (detail::wit_better(1, a, w)) {
      w.have = true;
      w.size = 1;
      w.key = a;
      w.rule = 0;
      w.label = a;
    }
  }
  const auto& inners = aut.sigma.inner_labels();
  std::vector<std::vector<int>> inner0(inners.size(), std::vector<int>(nh));
  for (std::size_t b = 0; b < inners.size(); ++b) {
    const auto& row = aut.inner_map.at(inners[b]);
    for (std::size_t h = 0; h < nh; ++h)
      inner0[b][h] =
          aut_to_h0[static_cast<std::size_t>(row[static_cast<std::size_t>(h0_to_aut[h])])];
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < nh; ++i) {
      if (!wh[i].have) continue;
      for (std::size_t b = 0; b < inners.size(); ++b) {
        auto& tgt = wh[static_cast<std::size_t>(inner0[b][i])];
        std::size_t size = wh[i].size + 1;
        if (tgt.have && size > tgt.size) continue;
        std::string key = inners[b] + "(" + wh[i].key + ")";
        if (detail::wit_better(size, key, tgt)) {
          tgt.have = true;
          tgt.size = size;
          tgt.key = std::move(key);
          tgt.rule = 2;
          tgt.a = static_cast<int>(i);
          tgt.label = inners[b];
          changed = true;
        }
      }
      for (std::size_t j = 0; j < nh; ++j) {
        if (!wh[j].have) continue;
        auto& tgt = wh[static_cast<std::size_t>(add0[i][j])];
        std::size_t size = wh[i].size + wh[j].size;
        if (tgt.have && size > tgt.size) continue;
        std::string key = wh[i].key + "+" + wh[j].key;
        if (detail::wit_better(size, key, tgt)) {
          tgt.have = true;
          tgt.size = size;
          tgt.key = std::move(key);
          tgt.rule = 1;
          tgt.a = static_cast<int>(i);
          tgt.b = static_cast<int>(j);
          changed = true;
        }
      }
    }
  }
  for (std::size_t i = 0; i < nh; ++i)
    if (!wh[i].have) throw internal_error("reachable H element without a witness");

  // Generator witness data (size, key) for V relaxation.
  std::vector<std::size_t> gen_size(gens.size());
  std::vector<std::string> gen_key(gens.size());
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (gens[g].rule == 0) {
      gen_size[g] = 2;
      gen_key[g] = gens[g].label + "(\x7f)";
    } else if (gens[g].rule == 1) {
      gen_size[g] = wh[static_cast<std::size_t>(gens[g].h)].size + 1;
      gen_key[g] = wh[static_cast<std::size_t>(gens[g].h)].key + "+\x7f";
    } else {
      gen_size[g] = wh[static_cast<std::size_t>(gens[g].h)].size + 1;
      gen_key[g] = "\x7f+" + wh[static_cast<std::size_t>(gens[g].h)].key;
    }
  }
  auto splice_key = [](const std::string& outer, const std::string& inner) {
    std::size_t at = outer.find('\x7f');
    std::string out = outer.substr(0, at);
    out += inner;
    out += outer.substr(at + 1);
    return out;
  };

  std::vector<detail::wit_state> wv(nv);
  wv[0].have = true;
  wv[0].size = 1;
  wv[0].key = "\x7f";
  wv[0].rule = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < nv; ++v) {
      if (!wv[v].have) continue;
      for (std::size_t g = 0; g < gens.size(); ++g) {
        auto& tgt = wv[static_cast<std::size_t>(edge[v][g])];
        std::size_t size = wv[v].size + gen_size[g] - 1;
        if (tgt.have && size > tgt.size) continue;
        std::string key = splice_key(wv[v].key, gen_key[g]);
        if (detail::wit_better(size, key, tgt)) {
          tgt.have = true;
          tgt.size = size;
          tgt.key = std::move(key);
          tgt.rule = 2;
          tgt.a = static_cast<int>(v);
          tgt.b = static_cast<int>(g);
          changed = true;
        }
      }
    }
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (!wv[v].have) throw internal_error("generated V element without a witness");

  // Materialize witness terms.
  std::vector<std::optional<forest>> wf(nh);
  std::function<const forest&(std::size_t)> mat_h = [&](std::size_t i) -> const forest& {
    if (!wf[i]) {
      const auto& w = wh[i];
      if (w.rule == 0) {
        wf[i] = forest::single(tree::leaf(w.label));
      } else if (w.rule == 1) {
        wf[i] = concat(mat_h(static_cast<std::size_t>(w.a)),
                       mat_h(static_cast<std::size_t>(w.b)));
      } else {
        wf[i] = forest::single(
            tree::inner(w.label, mat_h(static_cast<std::size_t>(w.a)).trees()));
      }
    }
    return *wf[i];
  };
  for (std::size_t i = 0; i < nh; ++i) mat_h(i);

  auto gen_witness = [&](std::size_t g) -> context {
    if (gens[g].rule == 0) {
      tree_seq ts;
      ts.push_back(tree::inner(gens[g].label, {tree::hole()}));
      return context(std::move(ts));
    }
    tree_seq ts;
    if (gens[g].rule == 1) {
      ts = mat_h(static_cast<std::size_t>(gens[g].h)).trees();
      ts.push_back(tree::hole());
    } else {
      ts.push_back(tree::hole());
      const auto& ws = mat_h(static_cast<std::size_t>(gens[g].h)).trees();
      ts.insert(ts.end(), ws.begin(), ws.end());
    }
    return context(std::move(ts));
  };
  std::vector<std::optional<context>> wc(nv);
  std::function<const context&(std::size_t)> mat_v = [&](std::size_t v) -> const context& {
    if (!wc[v]) {
      const auto& w = wv[v];
      if (w.rule == 0)
        wc[v] = context::empty();
      else if (w.rule == 1)
        wc[v] = gen_witness(static_cast<std::size_t>(w.a));
      else
        wc[v] = plug(mat_v(static_cast<std::size_t>(w.a)),
                     gen_witness(static_cast<std::size_t>(w.b)));
    }
    return *wc[v];
  };
  for (std::size_t v = 0; v < nv; ++v) mat_v(v);

  // Assemble the morphism.
  morphism m;
  m.sigma = aut.sigma;
  m.alg.h_names.resize(nh);
  for (std::size_t i = 0; i < nh; ++i)
    m.alg.h_names[i] = aut.elements[static_cast<std::size_t>(h0_to_aut[i])];
  m.alg.v_names.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) m.alg.v_names[v] = "v" + std::to_string(v);
  m.alg.add = std::move(add0);
  m.alg.identity = 0;
  m.alg.act = v_funcs;
  m.alg.embed_left.resize(nh);
  m.alg.embed_right.resize(nh);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (gens[g].rule == 1) m.alg.embed_left[static_cast<std::size_t>(gens[g].h)] = edge[0][g];
    if (gens[g].rule == 2) m.alg.embed_right[static_cast<std::size_t>(gens[g].h)] = edge[0][g];
  }
  if (nv <= lim.tables_threshold) {
    m.alg.compose.assign(nv, std::vector<int>(nv));
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t w = 0; w < nv; ++w) {
        std::vector<int> f(nh);
        for (std::size_t h = 0; h < nh; ++h)
          f[h] = v_funcs[v][static_cast<std::size_t>(v_funcs[w][h])];
        auto it = v_index.find(f);
        if (it == v_index.end())
          throw internal_error("composition left the generated monoid");
        m.alg.compose[v][w] = it->second;
      }
  }
  m.func_index = std::move(v_index);
  for (const auto& a : aut.sigma.leaf_labels())
    m.leaf_to_h[a] = aut_to_h0[static_cast<std::size_t>(aut.leaf_map.at(a))];
  for (std::size_t b = 0; b < inners.size(); ++b) {
    auto it = m.func_index.find(inner0[b]);
    if (it == m.func_index.end())
      throw internal_error("inner generator missing from the generated monoid");
    m.inner_to_v[inners[b]] = it->second;
  }
  for (int h : aut.accept)
    if (in_h[static_cast<std::size_t>(h)])
      m.accept.push_back(aut_to_h0[static_cast<std::size_t>(h)]);
  std::sort(m.accept.begin(), m.accept.end());
  m.witness_h.reserve(nh);
  for (std::size_t i = 0; i < nh; ++i) m.witness_h.push_back(*wf[i]);
  m.witness_v.reserve(nv);
  for (std::size_t v = 0; v < nv; ++v) m.witness_v.push_back(*wc[v]);
  return m;
}

// ---------------------------------------------------------------------------
// Syntactic quotient
// ---------------------------------------------------------------------------

/// Quotients a generated morphism by the recognizing Myhill-Nerode
/// congruence: forests are identified when no context separates them with
/// respect to `accept`, contexts when their actions agree classwise.
inline morphism syntactic_quotient(const morphism& m, const std::vector<int>& accept) {
  const std::size_t nh = m.alg.h_size();
  const std::size_t nv = m.alg.v_size();
  std::vector<char> acc(nh, 0);
  for (int h : accept) acc[static_cast<std::size_t>(h)] = 1;

  // H classes, ordered by first occurrence.
  std::vector<int> h_class(nh, -1);
  std::vector<int> h_rep;
  {
    std::map<std::vector<char>, int> seen;
    for (std::size_t h = 0; h < nh; ++h) {
      std::vector<char> sig(nv);
      for (std::size_t v = 0; v < nv; ++v)
        sig[v] = acc[static_cast<std::size_t>(m.alg.act_at(static_cast<int>(v),
                                                           static_cast<int>(h)))];
      auto [it, fresh] = seen.emplace(std::move(sig), static_cast<int>(h_rep.size()));
      if (fresh) h_rep.push_back(static_cast<int>(h));
      h_class[h] = it->second;
    }
  }
  const std::size_t qh = h_rep.size();

  // V classes on top of the H classes.
  std::vector<int> v_class(nv, -1);
  std::vector<int> v_rep;
  {
    std::map<std::vector<int>, int> seen;
    for (std::size_t v = 0; v < nv; ++v) {
      std::vector<int> sig(nh);
      for (std::size_t h = 0; h < nh; ++h)
        sig[h] = h_class[static_cast<std::size_t>(
            m.alg.act_at(static_cast<int>(v), static_cast<int>(h)))];
      auto [it, fresh] = seen.emplace(std::move(sig), static_cast<int>(v_rep.size()));
      if (fresh) v_rep.push_back(static_cast<int>(v));
      v_class[v] = it->second;
    }
  }
  const std::size_t qv = v_rep.size();

  morphism q;
  q.sigma = m.sigma;
  q.alg.h_names.resize(qh);
  for (std::size_t c = 0; c < qh; ++c)
    q.alg.h_names[c] = m.alg.h_names[static_cast<std::size_t>(h_rep[c])];
  q.alg.v_names.resize(qv);
  for (std::size_t c = 0; c < qv; ++c)
    q.alg.v_names[c] = m.alg.v_names[static_cast<std::size_t>(v_rep[c])];

  // Quotient tables from representatives, then congruence assertions.
  q.alg.add.assign(qh, std::vector<int>(qh));
  for (std::size_t i = 0; i < qh; ++i)
    for (std::size_t j = 0; j < qh; ++j)
      q.alg.add[i][j] = h_class[static_cast<std::size_t>(m.alg.add_at(h_rep[i], h_rep[j]))];
  for (std::size_t i = 0; i < nh; ++i)
    for (std::size_t j = 0; j < nh; ++j)
      if (q.alg.add[static_cast<std::size_t>(h_class[i])][static_cast<std::size_t>(
              h_class[j])] !=
          h_class[static_cast<std::size_t>(
              m.alg.add_at(static_cast<int>(i), static_cast<int>(j)))])
        throw internal_error("syntactic congruence is not compatible with +");

  q.alg.act.assign(qv, std::vector<int>(qh));
  for (std::size_t v = 0; v < qv; ++v)
    for (std::size_t h = 0; h < qh; ++h)
      q.alg.act[v][h] = h_class[static_cast<std::size_t>(m.alg.act_at(v_rep[v], h_rep[h]))];
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t h = 0; h < nh; ++h)
      if (q.alg.act[static_cast<std::size_t>(v_class[v])][static_cast<std::size_t>(
              h_class[h])] !=
          h_class[static_cast<std::size_t>(
              m.alg.act_at(static_cast<int>(v), static_cast<int>(h)))])
        throw internal_error("syntactic congruence is not compatible with the action");

  q.alg.identity = v_class[static_cast<std::size_t>(m.alg.identity)];
  q.alg.compose.assign(qv, std::vector<int>(qv));
  for (std::size_t v = 0; v < qv; ++v)
    for (std::size_t w = 0; w < qv; ++w)
      q.alg.compose[v][w] = v_class[static_cast<std::size_t>(m.compose_v(v_rep[v], v_rep[w]))];
  if (nv <= 2048) {
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t w = 0; w < nv; ++w)
        if (q.alg.compose[static_cast<std::size_t>(v_class[v])][static_cast<std::size_t>(
                v_class[w])] !=
            v_class[static_cast<std::size_t>(
                m.compose_v(static_cast<int>(v), static_cast<int>(w)))])
          throw internal_error("syntactic congruence is not compatible with composition");
  }

  q.alg.embed_left.resize(qh);
  q.alg.embed_right.resize(qh);
  for (std::size_t h = 0; h < qh; ++h) {
    q.alg.embed_left[h] =
        v_class[static_cast<std::size_t>(m.alg.embed_left[static_cast<std::size_t>(h_rep[h])])];
    q.alg.embed_right[h] = v_class[static_cast<std::size_t>(
        m.alg.embed_right[static_cast<std::size_t>(h_rep[h])])];
  }
  for (std::size_t h = 0; h < nh; ++h) {
    if (q.alg.embed_left[static_cast<std::size_t>(h_class[h])] !=
        v_class[static_cast<std::size_t>(m.alg.embed_left[h])])
      throw internal_error("syntactic congruence is not compatible with left insertion");
    if (q.alg.embed_right[static_cast<std::size_t>(h_class[h])] !=
        v_class[static_cast<std::size_t>(m.alg.embed_right[h])])
      throw internal_error("syntactic congruence is not compatible with right insertion");
  }

  for (const auto& [a, h] : m.leaf_to_h) q.leaf_to_h[a] = h_class[static_cast<std::size_t>(h)];
  for (const auto& [b, v] : m.inner_to_v)
    q.inner_to_v[b] = v_class[static_cast<std::size_t>(v)];

  for (std::size_t h = 0; h < nh; ++h)
    if (acc[h]) q.accept.push_back(h_class[h]);
  std::sort(q.accept.begin(), q.accept.end());
  q.accept.erase(std::unique(q.accept.begin(), q.accept.end()), q.accept.end());
  for (std::size_t h = 0; h < nh; ++h)
    if (static_cast<bool>(acc[h]) !=
        std::binary_search(q.accept.begin(), q.accept.end(), h_class[h]))
      throw internal_error("acceptance is not a union of syntactic classes");

  // Witnesses: minimal over each class.
  auto better = [](const forest* cand, std::size_t cand_size, const std::string& cand_key,
                   std::size_t best_size, const std::string& best_key) {
    (void)cand;
    if (cand_size != best_size) return cand_size < best_size;
    return cand_key < best_key;
  };
  {
    std::vector<int> best(qh, -1);
    std::vector<std::size_t> bsize(qh);
    std::vector<std::string> bkey(qh);
    for (std::size_t h = 0; h < nh; ++h) {
      std::size_t c = static_cast<std::size_t>(h_class[h]);
      std::size_t size = m.witness_h[h].node_count();
      std::string key = detail::sort_key(m.witness_h[h].trees());
      if (best[c] < 0 || better(nullptr, size, key, bsize[c], bkey[c])) {
        best[c] = static_cast<int>(h);
        bsize[c] = size;
        bkey[c] = std::move(key);
      }
    }
    for (std::size_t c = 0; c < qh; ++c)
      q.witness_h.push_back(m.witness_h[static_cast<std::size_t>(best[c])]);
  }
  {
    std::vector<int> best(qv, -1);
    std::vector<std::size_t> bsize(qv);
    std::vector<std::string> bkey(qv);
    for (std::size_t v = 0; v < nv; ++v) {
      std::size_t c = static_cast<std::size_t>(v_class[v]);
      std::size_t size = m.witness_v[v].node_count();
      std::string key = detail::sort_key(m.witness_v[v].trees());
      if (best[c] < 0 || better(nullptr, size, key, bsize[c], bkey[c])) {
        best[c] = static_cast<int>(v);
        bsize[c] = size;
        bkey[c] = std::move(key);
      }
    }
    for (std::size_t c = 0; c < qv; ++c)
      q.witness_v.push_back(m.witness_v[static_cast<std::size_t>(best[c])]);
  }

  if (q.alg.h_size() * q.alg.h_size() * q.alg.h_size() +
          q.alg.v_size() * q.alg.v_size() * q.alg.v_size() <=
      200000000ull)
    q.alg.validate();
  q.validate_witnesses();
  return q;
}

inline morphism syntactic_quotient(const morphism& m) {
  return syntactic_quotient(m, m.accept);
}

} // namespace efpast
