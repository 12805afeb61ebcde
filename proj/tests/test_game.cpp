#include <catch2/catch_amalgamated.hpp>

#include <efpast/game.hpp>
#include <efpast/oracle.hpp>
#include <efpast/semantics.hpp>

#include "corpus.hpp"

using namespace efpast;

TEST_CASE("game basics") {
  CHECK(ef_game_winner(0, parse_forest("a"), parse_forest("a")) == player::duplicator);
  CHECK(ef_game_winner(1, parse_forest("b(a)"), parse_forest("b(c)")) == player::spoiler);
  for (unsigned n = 0; n <= 5; ++n)
    CHECK(ef_game_winner(n, parse_forest("a+a"), parse_forest("a")) == player::duplicator);
}

TEST_CASE("introductory round with empty forests") {
  maybe_empty_forest empty;
  maybe_empty_forest one(parse_forest("a").trees());
  CHECK(ef_game_winner(3, empty, empty) == player::duplicator);
  CHECK(ef_game_winner(0, empty, one) == player::spoiler);
  CHECK(ef_game_winner(0, one, empty) == player::spoiler);
}

TEST_CASE("a stuck duplicator loses the branch") {
  // Spoiler moves to an ancestor on the deeper side; duplicator has none.
  auto s0 = parse_forest("b(a)");
  auto s1 = parse_forest("b(b(a))");
  CHECK(ef_game_winner(2, s0, s1) == player::spoiler);
}

TEST_CASE("explicit start configurations") {
  auto s0 = parse_forest("b(a)");
  auto s1 = parse_forest("b(a)");
  CHECK(ef_game_winner(1, s0.trees(), s1.trees(), node_id{{0}}, node_id{{0}}) ==
        player::duplicator);
  CHECK(ef_game_winner(1, s0.trees(), s1.trees(), node_id{{0}}, node_id{{0, 0}}) ==
        player::spoiler); // labels differ immediately
  CHECK_THROWS_AS(ef_game_winner(1, s0.trees(), s1.trees(), node_id{{4}}, node_id{{0}}),
                  validation_error);
}

TEST_CASE("duplicator wins shrink monotonically in the round count") {
  alphabet sigma({"a"}, {"b"});
  auto forests = enumerate_forests({sigma, 4});
  for (const auto& s : forests)
    for (const auto& t : forests) {
      bool prev = true;
      for (unsigned n = 0; n <= 3; ++n) {
        bool dup = ef_game_winner(n, s, t) == player::duplicator;
        if (!prev) CHECK_FALSE(dup);
        prev = dup;
      }
    }
}

TEST_CASE("duplicator wins imply formula agreement at the matching depth") {
  alphabet sigma({"a"}, {"b"});
  auto forests = enumerate_forests({sigma, 4});
  std::vector<forest_formula> psis;
  for (const auto& s : corpus::adequacy_formulas()) psis.push_back(parse_forest_formula(s));
  corpus::formula_generator gen(424241, {"a", "b"});
  for (int i = 0; i < 12; ++i) {
    auto psi = gen.next(2);
    if (nesting_depth(psi) <= 2) psis.push_back(psi);
  }
  for (const auto& s : forests)
    for (const auto& t : forests)
      for (unsigned n = 0; n <= 2; ++n) {
        if (ef_game_winner(n, s, t) != player::duplicator) continue;
        for (const auto& psi : psis) {
          if (nesting_depth(psi) > n) continue;
          CHECK(forest_accepts(psi, s) == forest_accepts(psi, t));
        }
      }
}

TEST_CASE("duplicator survives two rounds on the pumped identity-3 pair") {
  // the block structure hides the extra segment from a shallow game
  auto p1 = parse_context("b([])");
  auto p2 = parse_context("b([])+a2");
  auto q2 = parse_context("b([])+a1");
  auto c11 = plug(p1, p1);
  auto c22 = plug(p2, q2);
  auto t = parse_forest("a2");
  forest s0 = plug(context_power(c11, 4), plug(context_power(c22, 4), t));
  forest s1 =
      plug(context_power(c11, 4), plug(plug(p1, q2), plug(context_power(c22, 4), t)));
  CHECK(ef_game_winner(2, s0, s1) == player::duplicator);
}

TEST_CASE("duplicator wins transfer along label morphisms") {
  // The transferred wins need every image root to come from a source root:
  // images keep their holes strictly below a root. (Deleting or root-level
  // promoting morphisms can break the introductory round.)
  alphabet sigma({"a", "b"}, {"a", "b"});
  std::vector<label_morphism> morphisms;
  {
    std::map<std::string, context> m1;
    m1.emplace("a", parse_context("a([]+b)"));
    m1.emplace("b", parse_context("b([])"));
    morphisms.emplace_back(std::move(m1));
    std::map<std::string, context> m2;
    m2.emplace("a", parse_context("b([])"));
    m2.emplace("b", parse_context("a(b([]))"));
    morphisms.emplace_back(std::move(m2));
    std::map<std::string, context> m3;
    m3.emplace("a", parse_context("a([])+a"));
    m3.emplace("b", parse_context("b([]+a)"));
    morphisms.emplace_back(std::move(m3));
  }
  auto forests = enumerate_forests({sigma, 3});
  std::vector<maybe_empty_forest> pool;
  pool.emplace_back();
  for (const auto& f : forests) pool.emplace_back(f.trees());
  for (const auto& m : morphisms)
    for (const auto& s : pool)
      for (const auto& t : pool)
        for (unsigned n = 0; n <= 2; ++n) {
          if (ef_game_winner(n, s, t) != player::duplicator) continue;
          CHECK(ef_game_winner(n, m.apply(s), m.apply(t)) == player::duplicator);
        }
}
