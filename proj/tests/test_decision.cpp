#include <catch2/catch_amalgamated.hpp>

#include <efpast/decision.hpp>
#include <efpast/oracle.hpp>

#include "corpus.hpp"

using namespace efpast;

namespace {

morphism syntactic_of(const char* name) {
  return syntactic_quotient(generate_algebra(corpus::load(name)));
}

// The two-element group with the constants, acting on a two-point H.
forest_algebra group_algebra() {
  forest_algebra a;
  a.h_names = {"h0", "h1"};
  a.v_names = {"id", "swap", "c0", "c1"};
  a.add = {{0, 0}, {1, 1}}; // left projection
  a.identity = 0;
  a.act = {{0, 1}, {1, 0}, {0, 0}, {1, 1}};
  a.compose = {
      {0, 1, 2, 3}, // id .
      {1, 0, 3, 2}, // swap .
      {2, 2, 2, 2}, // c0 absorbs
      {3, 3, 3, 3},
  };
  a.embed_left = {2, 3}; // h + [] pins the value
  a.embed_right = {0, 0}; // [] + h keeps the left summand
  a.validate();
  return a;
}

} // namespace

TEST_CASE("the dashv fixpoint on the or-algebra") {
  morphism syn = syntactic_of("ex1.json");
  dashv_set dv = dashv_relation(syn.alg);
  REQUIRE(syn.alg.v_size() == 2);
  // {(id,id), (id,const1), (const1,const1)}; (const1,id) absent
  CHECK(dv.pairs.size() == 3);
  CHECK(dv.contains(0, 0));
  CHECK(dv.contains(0, 1));
  CHECK(dv.contains(1, 1));
  CHECK_FALSE(dv.contains(1, 0));
  // reflexivity holds in every algebra
  for (std::size_t v = 0; v < syn.alg.v_size(); ++v)
    CHECK(dv.contains(static_cast<int>(v), static_cast<int>(v)));
}

TEST_CASE("dashv is not transitive in the sibling-constraint algebra") {
  morphism syn = syntactic_of("sibling.json");
  dashv_set dv = dashv_relation(syn.alg);
  bool found = false;
  for (std::size_t v1 = 0; v1 < syn.alg.v_size() && !found; ++v1)
    for (std::size_t v2 = 0; v2 < syn.alg.v_size() && !found; ++v2)
      for (std::size_t v3 = 0; v3 < syn.alg.v_size() && !found; ++v3)
        found = dv.contains(static_cast<int>(v1), static_cast<int>(v2)) &&
                dv.contains(static_cast<int>(v2), static_cast<int>(v3)) &&
                !dv.contains(static_cast<int>(v1), static_cast<int>(v3));
  CHECK(found);
}

TEST_CASE("stabilization exponents") {
  morphism syn = syntactic_of("ex1.json");
  omega_exponent om = omega_power(syn.alg);
  REQUIRE(om.n.has_value());
  CHECK(*om.n == 1); // both context types idempotent
  CHECK(om.power[static_cast<std::size_t>(syn.alg.identity)] == syn.alg.identity);

  forest_algebra g = group_algebra();
  omega_exponent none = omega_power(g);
  CHECK_FALSE(none.n.has_value());
  CHECK(none.counterexample == 1); // the swap
}

TEST_CASE("identities hold trivially on the one-point algebra") {
  semigroup_automaton a;
  a.sigma = alphabet({"a"}, {});
  a.elements = {"h"};
  a.add = {{0}};
  a.leaf_map["a"] = 0;
  a.accept = {0};
  morphism syn = syntactic_quotient(generate_algebra(a));
  identity_report rep = check_identities(syn);
  CHECK(rep.all_ok());
  CHECK(rep.omega == 1u);
}

TEST_CASE("identities on the worked examples") {
  {
    morphism syn = syntactic_of("ex1.json");
    identity_report rep = check_identities(syn);
    CHECK(rep.all_ok());
    CHECK(rep.da_pairs_visited == syn.alg.v_size() * syn.alg.v_size());
    CHECK(rep.special_pairs_visited == rep.dashv_size * rep.dashv_size);
  }
  {
    morphism syn = syntactic_of("ex2.json");
    identity_report rep = check_identities(syn);
    CHECK_FALSE(rep.all_ok());
    REQUIRE(rep.first_failure().has_value());
    CHECK(rep.first_failure()->id == identity_id::idempotent);
    CHECK(syn.alg.h_names[static_cast<std::size_t>(rep.first_failure()->elems[0])] == "1");
    CHECK(rep.first_failure()->message ==
          "identity (1) fails: h+h != h at h=<1>, witness forest a");
  }
  {
    morphism syn = syntactic_of("ex3.json");
    identity_report rep = check_identities(syn);
    CHECK(rep.idempotent_ok);
    CHECK(rep.commutative_ok);
    CHECK(rep.da_ok);
    CHECK_FALSE(rep.special_ok);
    REQUIRE(rep.first_failure().has_value());
    CHECK(rep.first_failure()->id == identity_id::special);
  }
}

TEST_CASE("identity loops are counter-exact and jobs-invariant") {
  morphism syn = syntactic_of("ex3.json");
  identity_report one = check_identities(syn, 1);
  identity_report four = check_identities(syn, 4);
  CHECK(one.da_pairs_visited == four.da_pairs_visited);
  CHECK(one.special_pairs_visited == four.special_pairs_visited);
  REQUIRE(one.first_failure().has_value());
  REQUIRE(four.first_failure().has_value());
  CHECK(one.first_failure()->message == four.first_failure()->message);
}

TEST_CASE("decide on the worked examples") {
  {
    decision_result res = decide_definable(corpus::load("ex1.json"));
    CHECK(res.definable);
  }
  {
    decision_result res = decide_definable(corpus::load("ex2.json"));
    CHECK_FALSE(res.definable);
    REQUIRE(res.failure.has_value());
    CHECK(res.failure->id == identity_id::idempotent);
  }
  {
    decision_result res = decide_definable(corpus::load("ex3.json"));
    CHECK_FALSE(res.definable);
    REQUIRE(res.failure.has_value());
    CHECK(res.failure->id == identity_id::special);
  }
}

TEST_CASE("tree-kind decisions go through the per-label reduction") {
  auto aut = corpus::load("child_of_root.json");
  decision_result res = decide_definable(aut);
  CHECK(res.definable);
  REQUIRE(res.subs.size() == 1);
  CHECK(res.subs[0].inner_label == "b");

  // the per-label language {t : bt in L} is "some root is labeled a"
  semigroup_automaton sub = aut;
  sub.kind = semigroup_automaton::language_kind::forest;
  sub.accept.clear();
  const auto& row = aut.inner_map.at("b");
  for (std::size_t h = 0; h < aut.size(); ++h)
    if (aut.is_accepting(row[h])) sub.accept.push_back(static_cast<int>(h));
  for (const auto& f : enumerate_forests({aut.sigma, 5})) {
    bool some_root_a = false;
    for (const auto& t : f.trees())
      if (t.is_leaf() && t.label() == "a") some_root_a = true;
    CHECK(accepts(sub, f) == some_root_a);
  }
}

TEST_CASE("tree-kind failures name the offending inner label") {
  // Trees b(t) are accepted when t carries two a's; trees c(t) never are.
  // The per-b forest language needs counting, the per-c language is empty.
  semigroup_automaton aut;
  aut.sigma = alphabet({"a", "d"}, {"b", "c"});
  aut.kind = semigroup_automaton::language_kind::tree;
  // elements (count capped at 2) x (top: 0 leaf, 1 b-wrap, 2 c-wrap, 3 concat)
  auto idx = [](int count, int top) { return count * 4 + top; };
  aut.elements.resize(12);
  for (int count = 0; count <= 2; ++count)
    for (int top = 0; top < 4; ++top)
      aut.elements[static_cast<std::size_t>(idx(count, top))] =
          "e" + std::to_string(count) + std::to_string(top);
  aut.add.assign(12, std::vector<int>(12));
  for (int x = 0; x < 12; ++x)
    for (int y = 0; y < 12; ++y)
      aut.add[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          idx(std::min(x / 4 + y / 4, 2), 3);
  aut.leaf_map["a"] = idx(1, 0);
  aut.leaf_map["d"] = idx(0, 0);
  std::vector<int> brow(12), crow(12);
  for (int x = 0; x < 12; ++x) {
    brow[static_cast<std::size_t>(x)] = idx(x / 4, 1);
    crow[static_cast<std::size_t>(x)] = idx(x / 4, 2);
  }
  aut.inner_map["b"] = brow;
  aut.inner_map["c"] = crow;
  aut.accept = {idx(2, 1)};
  aut.validate();

  CHECK(accepts(aut, parse_forest("b(a+a)")));
  CHECK(accepts(aut, parse_forest("b(b(a)+a)")));
  CHECK_FALSE(accepts(aut, parse_forest("b(a+d)")));
  CHECK_FALSE(accepts(aut, parse_forest("c(a+a)")));

  decision_result res = decide_definable(aut);
  CHECK_FALSE(res.definable);
  CHECK(res.failing_inner_label == "b");
  REQUIRE(res.failure.has_value());
  CHECK(res.failure->id == identity_id::idempotent);
  REQUIRE(res.subs.size() == 2);
  CHECK_FALSE(res.subs[0].report.all_ok()); // b
  CHECK(res.subs[1].report.all_ok());       // c recognizes the empty language
  CHECK(res.subs[1].syntactic.alg.h_size() == 1);
}

TEST_CASE("separating witnesses for the idempotency failure") {
  morphism syn = syntactic_of("ex2.json");
  identity_report rep = check_identities(syn);
  REQUIRE(rep.first_failure().has_value());
  separating_pair pair = separating_witnesses(syn, *rep.first_failure(), 2);
  CHECK(render(pair.s0) == "a");
  CHECK(render(pair.s1) == "a+a");
  CHECK_FALSE(pair.member0);
  CHECK(pair.member1);
  auto aut = corpus::load("ex2.json");
  CHECK(accepts(aut, pair.s0) == pair.member0);
  CHECK(accepts(aut, pair.s1) == pair.member1);
}

TEST_CASE("separating witnesses for the dashv-guarded identity") {
  auto aut = corpus::load("ex3.json");
  morphism syn = syntactic_of("ex3.json");

  // the displayed failing instance: u1 = b, u2 = b+a2, w1 = b, w2 = b+a1
  identity_failure fail;
  fail.id = identity_id::special;
  fail.elems = {syn.value_of(parse_context("b([])")), syn.value_of(parse_context("b([])+a2")),
                syn.value_of(parse_context("b([])")), syn.value_of(parse_context("b([])+a1"))};
  dashv_set dv = dashv_relation(syn.alg);
  CHECK(dv.contains(fail.elems[0], fail.elems[1]));
  CHECK(dv.contains(fail.elems[2], fail.elems[3]));

  separating_pair pair = separating_witnesses(syn, fail, 2);
  CHECK(pair.member0);
  CHECK_FALSE(pair.member1);
  CHECK(accepts(aut, pair.s0));
  CHECK_FALSE(accepts(aut, pair.s1));
  CHECK(corpus::ex3_member(pair.s0));
  CHECK_FALSE(corpus::ex3_member(pair.s1));

  // the displayed pumped pair at n=2, up to sibling order
  auto p1 = parse_context("b([])");
  auto p2 = parse_context("b([])+a2");
  auto q2 = parse_context("b([])+a1");
  auto c11 = plug(p1, p1);
  auto c22 = plug(p2, q2);
  auto t = parse_forest("a2");
  forest s0 = plug(context_power(c11, 2), plug(context_power(c22, 2), t));
  forest s1 =
      plug(context_power(c11, 2), plug(plug(p1, q2), plug(context_power(c22, 2), t)));
  CHECK(equal_up_to_sibling_order(pair.s0, s0));
  CHECK(equal_up_to_sibling_order(pair.s1, s1));
}

TEST_CASE("verdict reports are deterministic") {
  auto once = decision_to_json(decide_definable(corpus::load("ex3.json"))).dump();
  auto twice = decision_to_json(decide_definable(corpus::load("ex3.json"))).dump();
  CHECK(once == twice);

  auto dump1 = algebra_to_json(syntactic_of("ex1.json"), "ex1").dump();
  auto dump2 = algebra_to_json(syntactic_of("ex1.json"), "ex1").dump();
  CHECK(dump1 == dump2);
}

TEST_CASE("algebra dumps round-trip as automaton documents") {
  morphism syn = syntactic_of("ex1.json");
  dashv_set dv = dashv_relation(syn.alg);
  nlohmann::json doc = algebra_to_json(syn, "ex1", &dv);
  CHECK(doc.contains("dashv"));
  semigroup_automaton back = automaton_from_json(doc);
  auto ex1 = corpus::load("ex1.json");
  for (const auto& f : enumerate_forests({ex1.sigma, 5}))
    CHECK(accepts(back, f) == accepts(ex1, f));
}
