#include "doctest.h"
#include "gen.hpp"
#include "refine/syntax.hpp"

using namespace refine;

TEST_CASE("characters and strings") {
  Character a("a"), ab("a", true);
  CHECK(a != ab);
  CHECK(a.converse() == ab);
  CHECK(a.converse().converse() == a);
  CHECK(parse_character("b'") == Character("b", true));
  Str s{Character("a"), Character("b", true), Character("c")};
  Str expected{Character("c", true), Character("b"), Character("a", true)};
  CHECK(converse(s) == expected);
  CHECK(converse(Str{}).empty());
  CHECK(to_string(Str{}) == "eps");
}

TEST_CASE("negation") {
  Formula f = parse("[a]~p & q");
  CHECK(negate(f) == parse("<a>p | ~q"));
  CHECK(negate(parse("[o](p | ~q)")) == parse("<o>(~p & q)"));
  CHECK(negate(top()) == bot());
  CHECK(negate(bot()) == top());
}

TEST_CASE("complexity") {
  CHECK(complexity(parse("p")) == 0);
  CHECK(complexity(parse("~p")) == 0);
  CHECK(complexity(parse("p & q")) == 1);
  CHECK(complexity(parse("[a](p | q)")) == 2);
  CHECK(complexity(top()) == 1);
}

TEST_CASE("parsing") {
  CHECK(parse("~p | [a]<a'>p") ==
        disj(lit("p", false), gbox(Character("a"), gdia(Character("a", true), lit("p")))));
  CHECK(parse("p & q -> p & q") ==
        disj(disj(lit("p", false), lit("q", false)), conj(lit("p"), lit("q"))));
  CHECK(parse("[0] [o] (p | ~q)") == cbox(obox(disj(lit("p"), lit("q", false)))));
  CHECK(parse("p -> q -> r") == parse("~p | (~q | r)"));
  CHECK(parse("p | q & r") == disj(lit("p"), conj(lit("q"), lit("r"))));
  CHECK(parse("[*]<*>p") == sbox(sdia(lit("p"))));
}

TEST_CASE("parse errors carry offsets") {
  try {
    parse("p & & q");
    FAIL("no error");
  } catch (const ParseError &e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse("[a]p & [0]q"), ParseError);
  CHECK_THROWS_AS(parse("~~p"), ParseError);
  CHECK_THROWS_AS(parse("(p"), ParseError);
}

TEST_CASE("property: duality and round trips") {
  gen::Rng r(11);
  for (int i = 0; i < 10000; ++i) {
    Formula f = i % 2 ? gen::grammar_formula(r, 6, 3, 3, true)
                      : gen::stit_formula(r, 6, 3, true);
    Formula n = negate(f);
    REQUIRE(negate(n) == f);
    REQUIRE(complexity(n) == complexity(f));
    std::set<Literal> flipped;
    for (const auto &l : literals(f))
      flipped.insert({l.atom, !l.positive});
    REQUIRE(literals(n) == flipped);
  }
  for (int i = 0; i < 2000; ++i) {
    Formula f = i % 2 ? gen::grammar_formula(r, 8, 3, 3, true) : gen::stit_formula(r, 8, 3, true);
    std::string text = print(f);
    REQUIRE(parse(text) == f);
    REQUIRE(print(parse(text)) == text);
  }
}
