#include <catch2/catch_amalgamated.hpp>

#include <efpast/formula.hpp>

using namespace efpast;

TEST_CASE("node formula parsing follows the precedence rules") {
  // EF(a & !FP(!b)) == EF(And(a, Not(FP(Not b))))
  formula f = parse_node_formula("EF(a & !FP(!b))");
  REQUIRE(f.k() == formula::kind::ef);
  formula body = f.lhs();
  REQUIRE(body.k() == formula::kind::conjunction);
  CHECK(body.lhs() == formula::atom("a"));
  CHECK(body.rhs() == !formula::fp(!formula::atom("b")));

  // unary binds tighter than &, & tighter than |, both left-associative
  CHECK(parse_node_formula("a & b | c") ==
        ((formula::atom("a") && formula::atom("b")) || formula::atom("c")));
  CHECK(parse_node_formula("a | b & c") ==
        (formula::atom("a") || (formula::atom("b") && formula::atom("c"))));
  CHECK(parse_node_formula("a & b & c") ==
        ((formula::atom("a") && formula::atom("b")) && formula::atom("c")));
  CHECK(parse_node_formula("EF a & b") ==
        (formula::ef(formula::atom("a")) && formula::atom("b")));

  CHECK_NOTHROW(parse_node_formula("EF(a & FP true & !FP FP true)"));
}

TEST_CASE("forest formula parsing") {
  forest_formula f = parse_forest_formula("E(a) & !E(b)");
  REQUIRE(f.k() == forest_formula::kind::conjunction);
  CHECK(f.lhs().k() == forest_formula::kind::exists);
  CHECK(f.rhs().k() == forest_formula::kind::negation);
  CHECK(f.lhs().body() == formula::atom("a"));
}

TEST_CASE("formula parse errors") {
  CHECK_THROWS_AS(parse_node_formula(""), parse_error);
  CHECK_THROWS_AS(parse_node_formula("a &"), parse_error);
  CHECK_THROWS_AS(parse_node_formula("(a"), parse_error);
  CHECK_THROWS_AS(parse_node_formula("EF"), parse_error);
  CHECK_THROWS_AS(parse_node_formula("true true"), parse_error);
  CHECK_THROWS_AS(parse_forest_formula("a"), parse_error); // bare label is not a forest formula
  CHECK_THROWS_AS(parse_forest_formula("E(a) &"), parse_error);
}

TEST_CASE("renderer round-trips") {
  for (const char* s :
       {"a", "true", "!a", "EF a", "FP !b", "(a & b)", "((a | b) & !EF true)",
        "EF (a & !FP !b)", "EF ((a & FP true) & !FP FP true)"}) {
    formula f = parse_node_formula(s);
    CHECK(parse_node_formula(render(f)) == f);
  }
  for (const char* s : {"E(a)", "!E(!EF true)", "(E(a) & !E(b))", "(E(a) | (E(b) & true))"}) {
    forest_formula f = parse_forest_formula(s);
    CHECK(render(parse_forest_formula(render(f))) == render(f));
  }
}

TEST_CASE("nesting depth") {
  CHECK(nesting_depth(parse_node_formula("a")) == 0);
  CHECK(nesting_depth(parse_node_formula("EF(a & !FP(!b))")) == 2);
  CHECK(nesting_depth(parse_forest_formula("E(a)|E(b)")) == 0);
  CHECK(nesting_depth(parse_node_formula("EF(a & FP true & !FP FP true)")) == 3);
  CHECK(nesting_depth(parse_forest_formula("E(EF EF EF a)")) == 3);
}
