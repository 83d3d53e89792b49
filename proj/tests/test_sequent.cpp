#include "doctest.h"
#include "gen.hpp"
#include "oracles.hpp"
#include "refine/sequent.hpp"

using namespace refine;

TEST_CASE("multiset equality ignores order") {
  auto a = parse_sequent("R_a(w,u), R_b(u,v) |- w: p, u: q");
  auto b = parse_sequent("R_b(u,v), R_a(w,u) |- u: q, w: p");
  CHECK(a == b);
  CHECK(a != parse_sequent("R_b(u,v), R_a(w,u) |- u: q, w: p, w: p"));
  CHECK(to_string(a) == "R_a(w,u), R_b(u,v) |- u: q, w: p");
  CHECK(parse_sequent(to_string(a)) == a);
  CHECK(to_string(parse_sequent("R_0(w,u), I(v) |- ")) == "R_0(w,u), I(v) |-");
}

TEST_CASE("sequent graphs") {
  auto s = parse_sequent("R_b'(w,v), R_b(w,u), R_a(u,c), R_d'(u,p) |- w: q, w: r, v: ~q, u: q | r");
  auto g = sequent_graph(s);
  CHECK(g.vertices.size() == 5);  // w, v, u, c, p
  CHECK(g.edges.size() == 4);
  CHECK(g.labeling["w"].size() == 2);
  CHECK(classify(s) == Shape::Tree);
  CHECK(tree_root(s) == Label("w"));

  auto single = sequent_graph(parse_sequent("|- w: p"));
  CHECK(single.vertices == std::set<Label>{"w"});
  CHECK(single.edges.empty());

  auto loop = sequent_graph(parse_sequent("R_a(w,w) |- "));
  CHECK(loop.vertices.size() == 1);
  CHECK(loop.edges.size() == 1);
  CHECK(classify(loop) == Shape::General);
}

TEST_CASE("classification") {
  CHECK(classify(parse_sequent("R_0(w,u), R_0(v,z) |- ")) == Shape::Forest);
  CHECK(classify(parse_sequent("R_a(w,u), R_a(v,u) |- ")) == Shape::Dag);
  CHECK(classify(parse_sequent("R_a(w,u), R_a(u,w) |- ")) == Shape::General);
}

TEST_CASE("propagation graphs") {
  auto g = propagation_graph(parse_sequent("R_a(w,w) |- "));
  CHECK(g.edges == std::set<Edge>{{"w", "w", Character("a")}, {"w", "w", Character("a", true)}});
  auto e = propagation_graph(parse_sequent("|- w: p, u: q"));
  CHECK(e.vertices.size() == 2);
  CHECK(e.edges.empty());
}

TEST_CASE("undirected paths") {
  std::vector<RelAtom> r{RelAtom::crel("w", "u")};
  CHECK(undirected_path(r, "w", "u"));
  CHECK(undirected_path(r, "u", "w"));
  CHECK(undirected_path(r, "w", "w"));
  CHECK(undirected_path({}, "w", "w"));
  CHECK_FALSE(undirected_path({}, "w", "u"));
}

TEST_CASE("choice trees") {
  auto s = parse_sequent("R_0(w,w1), R_0(w,w2), R_0(u,u1), R_0(v,v1) |- w: p");
  auto trees = choice_trees(s);
  REQUIRE(trees.size() == 3);
  CHECK(trees[0].root == "u");
  CHECK(trees[1].root == "v");
  CHECK(trees[2].root == "w");
  CHECK(trees[2].labels == std::vector<Label>{"w", "w1", "w2"});
  CHECK(choice_trees(parse_sequent("|- w: p")).size() == 1);
  s.add_atom(RelAtom::crel("w", "u"));
  CHECK(choice_trees(s).size() == 2);
  CHECK_THROWS_AS(choice_trees(parse_sequent("R_0(w,u), R_0(v,u) |- ")), SequentError);
}

TEST_CASE("property: undirected paths form an equivalence and match BFS") {
  gen::Rng r(3);
  for (int i = 0; i < 2000; ++i) {
    int n = 2 + gen::pick(r, 9);
    auto atoms = gen::choice_atoms(r, n, gen::pick(r, 10));
    std::vector<Label> ls;
    for (int j = 0; j < n; ++j)
      ls.push_back("l" + std::to_string(j));
    for (const auto &a : ls)
      for (const auto &b : ls) {
        bool uf = undirected_path(atoms, a, b);
        REQUIRE(uf == oracle::bfs_connected(atoms, a, b));
        REQUIRE(uf == undirected_path(atoms, b, a));
      }
  }
}

TEST_CASE("property: tree classification survives relabeling") {
  gen::Rng r(5);
  for (int i = 0; i < 300; ++i) {
    Sequent s = gen::tree_sequent(r, 1 + gen::pick(r, 6));
    REQUIRE(classify(s) == Shape::Tree);
    std::vector<RelAtom> atoms;
    auto rename = [](const Label &l) { return "z" + l; };
    for (const auto &a : s.atoms())
      atoms.push_back(RelAtom::grel(a.ch, rename(a.from), rename(a.to)));
    std::vector<LabelledFormula> fs;
    for (const auto &f : s.formulas())
      fs.push_back({rename(f.label), f.formula});
    Sequent t(atoms, fs);
    REQUIRE(classify(t) == Shape::Tree);
    REQUIRE(oracle::isomorphic(sequent_graph(s), sequent_graph(t)));
  }
}
