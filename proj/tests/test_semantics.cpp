#include "doctest.h"
#include "gen.hpp"
#include "refine/semantics.hpp"

using namespace refine;

namespace {
CfcstSystem s4() { return parse_system("a -> eps\na -> a a\n", true); }
Character a("a"), ab("a", true);

DsModel golden() {
  DsModel m;
  m.worlds = {"w", "u", "v"};
  m.choice = {{"w", "w"}, {"w", "u"}, {"u", "w"}, {"u", "u"}, {"v", "v"}};
  m.ideal = {"v"};
  m.valuation = {{"p", {"w", "u"}}, {"q", {"v"}}};
  return m;
}
} // namespace

TEST_CASE("saturation") {
  SigmaModel m;
  m.worlds = {"w", "u", "v"};
  m.relations[a] = {{"w", "u"}, {"u", "v"}};
  auto sat = saturate(s4(), m);
  for (const auto &x : m.worlds)
    CHECK(sat.relations[a].count({x, x}));
  CHECK(sat.relations[a].count({"w", "v"}));
  CHECK(sat.relations[ab].count({"v", "w"}));
  CHECK(saturate(s4(), sat) == sat);
  CHECK(is_saturated(s4(), sat));

  auto plain = saturate(CfcstSystem{}, m);
  CHECK(plain.relations[a].size() == 2);
  CHECK(plain.relations[ab] == std::set<Pair>{{"u", "w"}, {"v", "u"}});

  auto sb = parse_system("a -> b\n", true);
  SigmaModel n;
  n.worlds = {"w", "u"};
  n.relations[Character("b")] = {{"w", "u"}};
  auto nb = saturate(sb, n);
  CHECK(nb.relations[a].count({"w", "u"}));
  CHECK(nb.relations[ab].count({"u", "w"}));
}

TEST_CASE("sigma model checking") {
  SigmaModel m;
  m.worlds = {"w", "u"};
  m.relations[a] = {{"w", "u"}};
  m.valuation["p"] = {"u"};
  CHECK(check_sigma(m, "w", parse("p | ~p")));
  CHECK(check_sigma(m, "w", parse("<a>p")));
  CHECK_FALSE(check_sigma(m, "w", parse("[a]~p")));
  CHECK_THROWS_AS(check_sigma(m, "x", parse("p")), ModelError);

  SigmaModel t;
  t.worlds = {"w", "u", "v"};
  t.relations[a] = {{"w", "u"}, {"u", "v"}};
  t.valuation["p"] = {"v"};
  t = saturate(s4(), t);
  CHECK(check_sigma(t, "w", parse("<a>p")));
}

TEST_CASE("DS model checking on the worked counter-model") {
  auto m = golden();
  CHECK(validate_ds(m).empty());
  CHECK_FALSE(check_ds(m, "w", parse("[0][o](p | ~q)")));
  CHECK_FALSE(check_ds(m, "v", parse("p | ~q")));
  CHECK(check_ds(m, "w", parse("[*](p | q)")) == check_ds(m, "v", parse("[*](p | q)")));
  CHECK(choice_classes(m).size() == 2);
}

TEST_CASE("frame conditions") {
  auto m = golden();
  m.ideal.clear();
  CHECK(validate_ds(m) == std::vector<std::string>{"D2"});
  DsModel t;
  t.worlds = {"x", "y", "z"};
  t.choice = {{"x", "x"}, {"y", "y"}, {"z", "z"}, {"x", "y"}, {"y", "x"}, {"y", "z"}, {"z", "y"}};
  t.ideal = {"x", "y", "z"};
  auto v = validate_ds(t);
  CHECK(std::find(v.begin(), v.end(), "P") != v.end());
  auto c = golden();
  c.k = 1;
  CHECK(validate_ds(c) == std::vector<std::string>{"Ck"});
  auto d = golden();
  d.ideal = {"w"};
  CHECK(validate_ds(d) == std::vector<std::string>{"D3"});
}

TEST_CASE("random models") {
  ModelGenerator g1(42), g2(42);
  auto sys = s4();
  for (int i = 0; i < 20; ++i)
    REQUIRE(g1.sigma(sys) == g2.sigma(sys));
  for (int i = 0; i < 20; ++i)
    REQUIRE(g1.ds(2) == g2.ds(2));
  ModelGenerator g(9);
  gen::Rng r(9);
  for (int i = 0; i < 100; ++i) {
    auto s = gen::system(r, 2, 4);
    auto m = g.sigma(s, {Character("a"), Character("b")});
    REQUIRE(is_saturated(s, m));
    REQUIRE(saturate(s, m) == m);
    for (const auto &p : s.rules()) {
      Formula f = lit("p");
      for (auto it = p.tail.rbegin(); it != p.tail.rend(); ++it)
        f = gdia(*it, f);
      REQUIRE(globally_true(m, implies(f, gdia(p.head, lit("p")))));
    }
    for (const auto &c : {Character("a"), Character("b")})
      REQUIRE(globally_true(m, parse("p -> [" + c.name() + "]<" + c.converse().name() + ">p")));
  }
  for (int k = 0; k <= 2; ++k)
    for (int i = 0; i < 100; ++i) {
      auto m = g.ds(k);
      REQUIRE(validate_ds(m).empty());
      REQUIRE(globally_true(m, parse("[o]p -> <o>p")));
      REQUIRE(globally_true(m, parse("[*]p -> [0]p")));
      REQUIRE(globally_true(m, parse("[0]p -> p")));
      REQUIRE(globally_true(m, parse("[*][o]p -> [o][*]p | [o]p")));
    }
}
