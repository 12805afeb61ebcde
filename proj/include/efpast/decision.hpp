#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include <efpast/algebra.hpp>
#include <efpast/automaton.hpp>
#include <efpast/errors.hpp>
#include <efpast/terms.hpp>

namespace efpast {

// ---------------------------------------------------------------------------
// The relation "u can be decomposed along w with extra sibling forests":
// least fixpoint of reflexivity, (v, h+v), (v, v+h), and closure under
// pairwise composition.
// ---------------------------------------------------------------------------

struct dashv_set {
  std::size_t n = 0;
  std::vector<char> member;              // n*n, row-major
  std::vector<std::pair<int, int>> pairs; // row-major scan order

  // Insertion-ordered derivation trace; rule 0: (v,v); 1: (v, h+v) with
  // a=v, b=h; 2: (v, v+h); 3: composition of the pairs at trace indices a,b.
  struct derivation {
    int rule;
    int a;
    int b;
  };
  std::vector<std::pair<int, int>> order;
  std::vector<derivation> how;

  bool contains(int u, int w) const {
    return member[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(w)] != 0;
  }
};

inline dashv_set dashv_relation(const forest_algebra& alg) {
  if (!alg.has_compose_table())
    throw validation_error("dashv computation requires a materialized compose table");
  const std::size_t nv = alg.v_size();
  const std::size_t nh = alg.h_size();
  dashv_set r;
  r.n = nv;
  r.member.assign(nv * nv, 0);

  auto push = [&](int u, int w, dashv_set::derivation d) {
    char& slot = r.member[static_cast<std::size_t>(u) * nv + static_cast<std::size_t>(w)];
    if (slot) return;
    slot = 1;
    r.order.emplace_back(u, w);
    r.how.push_back(d);
  };

  for (std::size_t v = 0; v < nv; ++v)
    push(static_cast<int>(v), static_cast<int>(v), {0, static_cast<int>(v), -1});
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t h = 0; h < nh; ++h) {
      push(static_cast<int>(v), alg.h_plus_v(static_cast<int>(h), static_cast<int>(v)),
           {1, static_cast<int>(v), static_cast<int>(h)});
      push(static_cast<int>(v), alg.v_plus_h(static_cast<int>(v), static_cast<int>(h)),
           {2, static_cast<int>(v), static_cast<int>(h)});
    }

  for (std::size_t i = 0; i < r.order.size(); ++i) {
    auto [v, v2] = r.order[i];
    // Compose with everything discovered up to and including this pair.
    for (std::size_t j = 0; j <= i; ++j) {
      auto [w, w2] = r.order[j];
      push(alg.compose_at(v, w), alg.compose_at(v2, w2),
           {3, static_cast<int>(i), static_cast<int>(j)});
      push(alg.compose_at(w, v), alg.compose_at(w2, v2),
           {3, static_cast<int>(j), static_cast<int>(i)});
    }
  }

  for (std::size_t u = 0; u < nv; ++u)
    for (std::size_t w = 0; w < nv; ++w)
      if (r.member[u * nv + w])
        r.pairs.emplace_back(static_cast<int>(u), static_cast<int>(w));
  return r;
}

// ---------------------------------------------------------------------------
// The stabilization exponent: the least N <= |V| with v^N = v^(N+1) for all
// v. When it exists, v^N = v^(N+m) for every m, so N can serve as the
// power at which the identities are evaluated.
// ---------------------------------------------------------------------------

struct omega_exponent {
  std::optional<unsigned> n;
  std::optional<int> counterexample; // v with v^|V| != v^(|V|+1)
  std::vector<int> power;            // v -> v^n, when n is present
};

inline omega_exponent omega_power(const forest_algebra& alg) {
  const std::size_t nv = alg.v_size();
  omega_exponent r;
  std::vector<int> cur(nv);
  for (std::size_t v = 0; v < nv; ++v) cur[v] = static_cast<int>(v); // v^1
  for (unsigned k = 1; k <= nv; ++k) {
    bool stable = true;
    for (std::size_t v = 0; v < nv; ++v)
      if (alg.compose_at(cur[v], static_cast<int>(v)) != cur[v]) {
        stable = false;
        break;
      }
    if (stable) {
      r.n = k;
      r.power = cur;
      return r;
    }
    if (k == nv) break;
    for (std::size_t v = 0; v < nv; ++v) cur[v] = alg.compose_at(cur[v], static_cast<int>(v));
  }
  // cur now holds v^|V|; report the first element that keeps moving.
  for (std::size_t v = 0; v < nv; ++v)
    if (alg.compose_at(cur[v], static_cast<int>(v)) != cur[v]) {
      r.counterexample = static_cast<int>(v);
      break;
    }
  return r;
}

// ---------------------------------------------------------------------------
// Identity checking
// ---------------------------------------------------------------------------

enum class identity_id { idempotent, commutative, da, special };

inline const char* identity_name(identity_id id) {
  switch (id) {
    case identity_id::idempotent: return "1-idempotent";
    case identity_id::commutative: return "1-commutative";
    case identity_id::da: return "2";
    case identity_id::special: return "3";
  }
  return "?";
}

struct identity_failure {
  identity_id id = identity_id::idempotent;
  std::vector<int> elems;   // offending element indices; see check_identities
  bool aperiodicity = false; // identity 2 failed because V is not aperiodic
  std::string message;
};

struct identity_report {
  bool idempotent_ok = true;
  bool commutative_ok = true;
  bool da_ok = true;
  bool special_ok = true;
  bool special_checked = false;
  std::optional<identity_failure> idempotent_failure;
  std::optional<identity_failure> commutative_failure;
  std::optional<identity_failure> da_failure;
  std::optional<identity_failure> special_failure;
  std::optional<unsigned> omega;
  std::size_t dashv_size = 0;
  std::uint64_t da_pairs_visited = 0;
  std::uint64_t special_pairs_visited = 0;

  bool all_ok() const { return idempotent_ok && commutative_ok && da_ok && special_ok; }

  std::optional<identity_failure> first_failure() const {
    if (idempotent_failure) return idempotent_failure;
    if (commutative_failure) return commutative_failure;
    if (da_failure) return da_failure;
    if (special_failure) return special_failure;
    return std::nullopt;
  }
};

namespace detail {

// Scans [0, count) and returns the smallest index satisfying pred; the whole
// range is always visited, split across `jobs` workers.
template <class Pred>
std::optional<std::size_t> min_violation(std::size_t count, unsigned jobs, Pred pred) {
  if (count == 0) return std::nullopt;
  if (jobs <= 1) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < count; ++i)
      if (pred(i) && !best) best = i;
    return best;
  }
  unsigned workers = jobs;
  std::vector<std::optional<std::size_t>> results(workers);
  std::vector<std::thread> threads;
  std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w]() {
      std::size_t lo = static_cast<std::size_t>(w) * chunk;
      std::size_t hi = std::min(count, lo + chunk);
      std::optional<std::size_t> best;
      for (std::size_t i = lo; i < hi; ++i)
        if (pred(i) && !best) best = i;
      results[w] = best;
    });
  }
  for (auto& t : threads) t.join();
  std::optional<std::size_t> best;
  for (const auto& r : results)
    if (r && (!best || *r < *best)) best = r;
  return best;
}

} // namespace detail

/// Checks the three characterizing identities on a syntactic morphism.
/// Identity 1 is idempotency and commutativity of H; identity 2 is
/// aperiodicity of V plus (vw)^N = (vw)^N w (vw)^N over all pairs; identity 3
/// quantifies over pairs of dashv-related pairs. Each loop runs to
/// completion and reports the first failure in index order.
inline identity_report check_identities(const morphism& m, unsigned jobs = 1) {
  const forest_algebra& alg = m.alg;
  if (!alg.has_compose_table())
    throw validation_error("identity checking requires a materialized compose table");
  const std::size_t nh = alg.h_size();
  const std::size_t nv = alg.v_size();
  identity_report rep;

  auto hname = [&](int h) { return "<" + alg.h_names[static_cast<std::size_t>(h)] + ">"; };
  auto vname = [&](int v) { return "<" + alg.v_names[static_cast<std::size_t>(v)] + ">"; };
  auto hwit = [&](int h) { return render(m.witness_h[static_cast<std::size_t>(h)]); };
  auto vwit = [&](int v) { return render(m.witness_v[static_cast<std::size_t>(v)]); };

  // Identity (1): h+h = h and g+h = h+g.
  for (std::size_t h = 0; h < nh; ++h) {
    if (alg.add_at(static_cast<int>(h), static_cast<int>(h)) != static_cast<int>(h)) {
      rep.idempotent_ok = false;
      identity_failure f;
      f.id = identity_id::idempotent;
      f.elems = {static_cast<int>(h)};
      f.message = "identity (1) fails: h+h != h at h=" + hname(static_cast<int>(h)) +
                  ", witness forest " + hwit(static_cast<int>(h));
      rep.idempotent_failure = f;
      break;
    }
  }
  for (std::size_t g = 0; g < nh && rep.commutative_ok; ++g)
    for (std::size_t h = g + 1; h < nh; ++h) {
      if (alg.add_at(static_cast<int>(g), static_cast<int>(h)) !=
          alg.add_at(static_cast<int>(h), static_cast<int>(g))) {
        rep.commutative_ok = false;
        identity_failure f;
        f.id = identity_id::commutative;
        f.elems = {static_cast<int>(g), static_cast<int>(h)};
        f.message = "identity (1) fails: g+h != h+g at g=" + hname(static_cast<int>(g)) +
                    ", h=" + hname(static_cast<int>(h)) + ", witness forests " +
                    hwit(static_cast<int>(g)) + " and " + hwit(static_cast<int>(h));
        rep.commutative_failure = f;
        break;
      }
    }

  // Identity (2): V aperiodic, then the DA identity over all |V|^2 pairs.
  omega_exponent om = omega_power(alg);
  rep.omega = om.n;
  if (!om.n) {
    rep.da_ok = false;
    identity_failure f;
    f.id = identity_id::da;
    f.aperiodicity = true;
    f.elems = {*om.counterexample};
    f.message = "identity (2) fails: V is not aperiodic at v=" + vname(*om.counterexample) +
                ", witness context " + vwit(*om.counterexample);
    rep.da_failure = f;
  } else {
    const std::vector<int>& pw = om.power;
    rep.da_pairs_visited = static_cast<std::uint64_t>(nv) * nv;
    auto da_bad = [&](std::size_t idx) {
      int v = static_cast<int>(idx / nv);
      int w = static_cast<int>(idx % nv);
      int vw = alg.compose_at(v, w);
      int x = pw[static_cast<std::size_t>(vw)];
      return alg.compose_at(alg.compose_at(x, w), x) != x;
    };
    auto bad = detail::min_violation(nv * nv, jobs, da_bad);
    if (bad) {
      rep.da_ok = false;
      int v = static_cast<int>(*bad / nv);
      int w = static_cast<int>(*bad % nv);
      identity_failure f;
      f.id = identity_id::da;
      f.elems = {v, w};
      f.message = "identity (2) fails: (vw)^N != (vw)^N w (vw)^N at v=" + vname(v) +
                  ", w=" + vname(w) + " (N=" + std::to_string(*om.n) +
                  "), witness contexts " + vwit(v) + " and " + vwit(w);
      rep.da_failure = f;
    }
  }

  // Identity (3): over pairs of dashv-related pairs; needs the exponent.
  dashv_set dv = dashv_relation(alg);
  rep.dashv_size = dv.pairs.size();
  if (om.n) {
    rep.special_checked = true;
    const std::vector<int>& pw = om.power;
    const std::size_t np = dv.pairs.size();
    rep.special_pairs_visited = static_cast<std::uint64_t>(np) * np;
    auto special_bad = [&](std::size_t idx) {
      const auto& [u1, u2] = dv.pairs[idx / np];
      const auto& [w1, w2] = dv.pairs[idx % np];
      int x = pw[static_cast<std::size_t>(alg.compose_at(u1, w1))];
      int y = pw[static_cast<std::size_t>(alg.compose_at(u2, w2))];
      int lhs = alg.compose_at(x, y);
      int rhs = alg.compose_at(alg.compose_at(alg.compose_at(x, u1), w2), y);
      return lhs != rhs;
    };
    auto bad = detail::min_violation(np * np, jobs, special_bad);
    if (bad) {
      rep.special_ok = false;
      const auto& [u1, u2] = dv.pairs[*bad / np];
      const auto& [w1, w2] = dv.pairs[*bad % np];
      identity_failure f;
      f.id = identity_id::special;
      f.elems = {u1, u2, w1, w2};
      f.message = "identity (3) fails: (u1 w1)^N (u2 w2)^N != (u1 w1)^N u1 w2 (u2 w2)^N at u1=" +
                  vname(u1) + ", u2=" + vname(u2) + ", w1=" + vname(w1) + ", w2=" + vname(w2) +
                  " (N=" + std::to_string(*om.n) + "), witness contexts " + vwit(u1) + ", " +
                  vwit(u2) + ", " + vwit(w1) + ", " + vwit(w2);
      rep.special_failure = f;
    }
  }

  return rep;
}

// ---------------------------------------------------------------------------
// Separating witnesses
// ---------------------------------------------------------------------------

struct separating_pair {
  forest s0;
  forest s1;
  bool member0 = false;
  bool member1 = false;
};

namespace detail {

inline int first_separating_context(const morphism& m, int hx, int hy) {
  for (std::size_t v = 0; v < m.alg.v_size(); ++v) {
    bool a = m.is_accepting(m.alg.act_at(static_cast<int>(v), hx));
    bool b = m.is_accepting(m.alg.act_at(static_cast<int>(v), hy));
    if (a != b) return static_cast<int>(v);
  }
  throw internal_error("distinct syntactic H elements admit no separating context");
}

inline std::pair<int, int> first_separating_context_and_forest(const morphism& m, int vx,
                                                               int vy) {
  for (std::size_t v = 0; v < m.alg.v_size(); ++v)
    for (std::size_t h = 0; h < m.alg.h_size(); ++h) {
      int cx = m.alg.act_at(m.alg.compose_at(static_cast<int>(v), vx), static_cast<int>(h));
      int cy = m.alg.act_at(m.alg.compose_at(static_cast<int>(v), vy), static_cast<int>(h));
      if (m.is_accepting(cx) != m.is_accepting(cy))
        return {static_cast<int>(v), static_cast<int>(h)};
    }
  throw internal_error("distinct syntactic V elements admit no separating pair");
}

} // namespace detail

/// Builds a concrete pair of forests with different membership realizing an
/// identity failure. For identity 3 the pair is assembled by pumping the
/// failure's witness contexts `pump` times around the separating context and
/// forest; the other identities use the element witnesses directly.
inline separating_pair separating_witnesses(const morphism& m, const identity_failure& fail,
                                            unsigned pump) {
  const forest_algebra& alg = m.alg;
  auto hwit = [&](int h) { return m.witness_h[static_cast<std::size_t>(h)]; };
  auto vwit = [&](int v) { return m.witness_v[static_cast<std::size_t>(v)]; };

  std::optional<separating_pair> out;
  switch (fail.id) {
    case identity_id::idempotent: {
      int h = fail.elems.at(0);
      int hh = alg.add_at(h, h);
      if (h == hh) throw validation_error("the reported failure does not fail");
      int v = detail::first_separating_context(m, h, hh);
      out = separating_pair{plug(vwit(v), hwit(h)), plug(vwit(v), hwit(hh)), false, false};
      break;
    }
    case identity_id::commutative: {
      int g = fail.elems.at(0);
      int h = fail.elems.at(1);
      int x = alg.add_at(g, h);
      int y = alg.add_at(h, g);
      if (x == y) throw validation_error("the reported failure does not fail");
      int v = detail::first_separating_context(m, x, y);
      out = separating_pair{plug(vwit(v), hwit(x)), plug(vwit(v), hwit(y)), false, false};
      break;
    }
    case identity_id::da: {
      int x, y;
      if (fail.aperiodicity) {
        int v = fail.elems.at(0);
        x = alg.power(v, static_cast<unsigned>(alg.v_size()));
        y = alg.compose_at(x, v);
      } else {
        omega_exponent om = omega_power(alg);
        if (!om.n) throw validation_error("identity-2 pair failure without an exponent");
        int v = fail.elems.at(0);
        int w = fail.elems.at(1);
        x = om.power[static_cast<std::size_t>(alg.compose_at(v, w))];
        y = alg.compose_at(alg.compose_at(x, w), x);
      }
      if (x == y) throw validation_error("the reported failure does not fail");
      auto [v, h] = detail::first_separating_context_and_forest(m, x, y);
      out = separating_pair{plug(vwit(v), plug(vwit(x), hwit(h))),
                            plug(vwit(v), plug(vwit(y), hwit(h))), false, false};
      break;
    }
    case identity_id::special: {
      omega_exponent om = omega_power(alg);
      if (!om.n) throw validation_error("identity-3 failure without an exponent");
      int u1 = fail.elems.at(0), u2 = fail.elems.at(1);
      int w1 = fail.elems.at(2), w2 = fail.elems.at(3);
      int x = om.power[static_cast<std::size_t>(alg.compose_at(u1, w1))];
      int y = om.power[static_cast<std::size_t>(alg.compose_at(u2, w2))];
      int lhs = alg.compose_at(x, y);
      int rhs = alg.compose_at(alg.compose_at(alg.compose_at(x, u1), w2), y);
      if (lhs == rhs) throw validation_error("the reported failure does not fail");
      auto [v, h] = detail::first_separating_context_and_forest(m, lhs, rhs);
      context c11 = plug(vwit(u1), vwit(w1));
      context c22 = plug(vwit(u2), vwit(w2));
      context mid = plug(vwit(u1), vwit(w2));
      context b0 = plug(context_power(c11, pump), context_power(c22, pump));
      context b1 = plug(plug(context_power(c11, pump), mid), context_power(c22, pump));
      out = separating_pair{plug(vwit(v), plug(b0, hwit(h))),
                            plug(vwit(v), plug(b1, hwit(h))), false, false};
      break;
    }
  }

  out->member0 = m.accepts_forest(out->s0);
  out->member1 = m.accepts_forest(out->s1);
  if (out->member0 == out->member1)
    throw internal_error(
        "separating witnesses have equal membership; for identity 3 the pump may be too small");
  return *out;
}

// ---------------------------------------------------------------------------
// The decision procedure
// ---------------------------------------------------------------------------

struct decision_sub {
  std::string inner_label; // empty for forest-kind inputs
  morphism syntactic;
  identity_report report;
};

struct decision_result {
  bool definable = false;
  std::optional<identity_failure> failure;
  std::string failing_inner_label;
  std::vector<decision_sub> subs;
};

/// Forest kind: generate, quotient, check. Tree kind: reduce to the forest
/// languages {t : bt in L}, one per inner label, and require all of them
/// definable.
inline decision_result decide_definable(const semigroup_automaton& aut,
                                        const generation_limits& lim = {},
                                        unsigned jobs = 1) {
  decision_result res;
  if (aut.kind == semigroup_automaton::language_kind::forest) {
    morphism gen = generate_algebra(aut, lim);
    morphism syn = syntactic_quotient(gen);
    identity_report rep = check_identities(syn, jobs);
    res.definable = rep.all_ok();
    res.failure = rep.first_failure();
    res.subs.push_back(decision_sub{"", std::move(syn), std::move(rep)});
    return res;
  }
  res.definable = true;
  for (const auto& b : aut.sigma.inner_labels()) {
    semigroup_automaton sub = aut;
    sub.kind = semigroup_automaton::language_kind::forest;
    sub.accept.clear();
    const auto& row = aut.inner_map.at(b);
    for (std::size_t h = 0; h < aut.size(); ++h)
      if (aut.is_accepting(row[h])) sub.accept.push_back(static_cast<int>(h));
    morphism gen = generate_algebra(sub, lim);
    morphism syn = syntactic_quotient(gen);
    identity_report rep = check_identities(syn, jobs);
    if (!rep.all_ok() && res.definable) {
      res.definable = false;
      res.failure = rep.first_failure();
      res.failing_inner_label = b;
    }
    res.subs.push_back(decision_sub{b, std::move(syn), std::move(rep)});
  }
  return res;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline nlohmann::json algebra_to_json(const morphism& m, const std::string& name,
                                      const dashv_set* dashv = nullptr) {
  const forest_algebra& a = m.alg;
  nlohmann::json doc;
  doc["name"] = name;
  doc["leaf_labels"] = m.sigma.leaf_labels();
  doc["inner_labels"] = m.sigma.inner_labels();
  doc["elements"] = a.h_names;
  doc["add"] = a.add;
  nlohmann::json leaf = nlohmann::json::object();
  for (const auto& [l, h] : m.leaf_to_h) leaf[l] = a.h_names[static_cast<std::size_t>(h)];
  doc["leaf"] = leaf;
  nlohmann::json inner = nlohmann::json::object();
  for (const auto& [l, v] : m.inner_to_v) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t h = 0; h < a.h_size(); ++h)
      row.push_back(a.h_names[static_cast<std::size_t>(a.act_at(v, static_cast<int>(h)))]);
    inner[l] = row;
  }
  doc["inner"] = inner;
  nlohmann::json acc = nlohmann::json::array();
  for (int h : m.accept) acc.push_back(a.h_names[static_cast<std::size_t>(h)]);
  doc["accept"] = acc;
  doc["kind"] = "forest";
  doc["v_elements"] = a.v_names;
  doc["compose"] = a.compose;
  doc["identity"] = a.v_names[static_cast<std::size_t>(a.identity)];
  doc["act"] = a.act;
  nlohmann::json el = nlohmann::json::array();
  nlohmann::json er = nlohmann::json::array();
  for (std::size_t h = 0; h < a.h_size(); ++h) {
    el.push_back(a.v_names[static_cast<std::size_t>(a.embed_left[h])]);
    er.push_back(a.v_names[static_cast<std::size_t>(a.embed_right[h])]);
  }
  doc["embed_left"] = el;
  doc["embed_right"] = er;
  nlohmann::json wh = nlohmann::json::array();
  for (const auto& w : m.witness_h) wh.push_back(render(w));
  doc["witness_h"] = wh;
  nlohmann::json wv = nlohmann::json::array();
  for (const auto& w : m.witness_v) wv.push_back(render(w));
  doc["witness_v"] = wv;
  if (dashv) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [u, w] : dashv->pairs)
      pairs.push_back({a.v_names[static_cast<std::size_t>(u)],
                       a.v_names[static_cast<std::size_t>(w)]});
    doc["dashv"] = pairs;
  }
  return doc;
}

namespace detail {

// Offending elements and their witness terms; H elements for identity 1,
// V elements otherwise.
inline void failure_fields(nlohmann::json& j, const identity_failure& f, const morphism& m) {
  bool horizontal = f.id == identity_id::idempotent || f.id == identity_id::commutative;
  nlohmann::json elems = nlohmann::json::array();
  nlohmann::json wits = nlohmann::json::array();
  for (int e : f.elems) {
    if (horizontal) {
      elems.push_back(m.alg.h_names[static_cast<std::size_t>(e)]);
      wits.push_back(render(m.witness_h[static_cast<std::size_t>(e)]));
    } else {
      elems.push_back(m.alg.v_names[static_cast<std::size_t>(e)]);
      wits.push_back(render(m.witness_v[static_cast<std::size_t>(e)]));
    }
  }
  j["identity"] = identity_name(f.id);
  j["elements"] = std::move(elems);
  j["witness_terms"] = std::move(wits);
  j["message"] = f.message;
}

} // namespace detail

inline nlohmann::json decision_to_json(const decision_result& res,
                                       const separating_pair* pair = nullptr) {
  nlohmann::json doc;
  doc["definable"] = res.definable;
  if (res.failure) {
    for (const auto& s : res.subs)
      if (s.inner_label == res.failing_inner_label && s.report.first_failure()) {
        detail::failure_fields(doc, *res.failure, s.syntactic);
        break;
      }
    if (!res.failing_inner_label.empty()) doc["inner_label"] = res.failing_inner_label;
  }
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& s : res.subs) {
    nlohmann::json j;
    if (!s.inner_label.empty()) j["inner_label"] = s.inner_label;
    j["h_size"] = s.syntactic.alg.h_size();
    j["v_size"] = s.syntactic.alg.v_size();
    j["definable"] = s.report.all_ok();
    if (auto f = s.report.first_failure()) detail::failure_fields(j, *f, s.syntactic);
    if (s.report.omega) j["omega"] = *s.report.omega;
    j["dashv_size"] = s.report.dashv_size;
    subs.push_back(std::move(j));
  }
  doc["subs"] = std::move(subs);
  if (pair) {
    doc["separating"] = {{"s0", render(pair->s0)},
                         {"s1", render(pair->s1)},
                         {"member0", pair->member0},
                         {"member1", pair->member1}};
  }
  return doc;
}

inline std::string decision_to_text(const decision_result& res,
                                    const separating_pair* pair = nullptr) {
  std::string out;
  out += res.definable ? "definable: yes\n" : "definable: no\n";
  for (const auto& s : res.subs) {
    std::string prefix;
    if (!s.inner_label.empty()) prefix = "[" + s.inner_label + "] ";
    out += prefix + "syntactic algebra: |H|=" + std::to_string(s.syntactic.alg.h_size()) +
           " |V|=" + std::to_string(s.syntactic.alg.v_size()) + "\n";
    if (auto f = s.report.first_failure()) out += prefix + f->message + "\n";
  }
  if (pair) {
    out += "separating forests:\n";
    out += "  s0 = " + render(pair->s0) + "  (member: " + (pair->member0 ? "yes" : "no") + ")\n";
    out += "  s1 = " + render(pair->s1) + "  (member: " + (pair->member1 ? "yes" : "no") + ")\n";
  }
  return out;
}

} // namespace efpast
