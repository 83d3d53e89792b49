#include "doctest.h"
#include "gen.hpp"
#include "oracles.hpp"
#include "refine/calculus.hpp"

#include <functional>

using namespace refine;

namespace {
Character a("a"), ab("a", true);

// The hand derivation of ~p | [a]<a'>p with empty S.
Proof a2_proof() {
  Formula f = parse("~p | [a]<a'>p");
  Sequent s0 = parse_sequent("|- w: ~p | [a]<a'>p");
  Sequent s1 = parse_sequent("|- w: ~p, w: [a]<a'>p");
  Sequent s2 = parse_sequent("R_a(w,u) |- w: ~p, u: <a'>p");
  Sequent s3 = parse_sequent("R_a(w,u) |- w: ~p, u: <a'>p, w: p");
  Proof id{Rule::Id, s3, on({"w", lit("p")}), {}};
  Witness pw = on({"u", parse("<a'>p")});
  pw.target = "w";
  pw.path = PathWitness{{"u", "w"}, {ab}, 0};
  Proof pr{Rule::PrDia, s2, pw, {id}};
  Witness bw = on({"w", parse("[a]<a'>p")});
  bw.fresh = "u";
  Proof box{Rule::BoxR, s1, bw, {pr}};
  return Proof{Rule::OrR, s0, on({"w", f}), {box}};
}

void check_tree_rooted(const Proof &p, const Label &root) {
  visit(p, [&](const Proof &q) {
    REQUIRE(classify(q.conclusion) == Shape::Tree);
    REQUIRE(tree_root(q.conclusion) == root);
    if (q.rule == Rule::PrDia)
      REQUIRE(propagation_graph(q.conclusion) == propagation_graph(q.premises[0].conclusion));
  });
}
} // namespace

TEST_CASE("checking the hand derivation") {
  CfcstSystem empty;
  CHECK_FALSE(check_proof(empty, a2_proof()));
  Proof id{Rule::Id, parse_sequent("|- w: p, w: ~p"), on({"w", lit("p")}), {}};
  CHECK_FALSE(check_proof(empty, id));
}

TEST_CASE("checker errors") {
  CfcstSystem empty;
  Proof p = a2_proof();
  p.premises[0].witness.fresh = "w";
  auto e = check_proof(empty, p);
  REQUIRE(e);
  CHECK(e->kind == ProofError::Kind::EigenvariableClash);
  CHECK(e->at == std::vector<std::size_t>{0});

  Proof q = a2_proof();
  q.premises[0].premises[0].witness.path = PathWitness{{"u", "w"}, {a}, 0};
  e = check_proof(empty, q);
  REQUIRE(e);
  CHECK(e->kind == ProofError::Kind::SideConditionFails);

  Proof leaf = a2_proof();
  leaf.premises[0].premises.clear();
  e = check_proof(empty, leaf);
  REQUIRE(e);
  CHECK(e->kind == ProofError::Kind::LeafNotInitial);

  Proof bad = a2_proof();
  bad.premises[0].premises[0].premises[0].witness = on({"w", lit("q")});
  e = check_proof(empty, bad);
  REQUIRE(e);
  CHECK(e->kind == ProofError::Kind::WrongShape);
}

TEST_CASE("prove_bounded verdicts") {
  CfcstSystem empty;
  auto r = prove_bounded(empty, parse("~p | [a]<a'>p"));
  REQUIRE(r.verdict == GrammarResult::Verdict::Valid);
  CHECK_FALSE(check_proof(empty, *r.proof));
  check_tree_rooted(*r.proof, "w0");

  auto eps = parse_system("a -> eps\n", true);
  auto t = prove_bounded(eps, parse("~p | <a>p"));
  REQUIRE(t.verdict == GrammarResult::Verdict::Valid);
  CHECK_FALSE(check_proof(eps, *t.proof));

  auto f = prove_bounded(empty, parse("~p | [a]p"));
  REQUIRE(f.verdict == GrammarResult::Verdict::Refuted);
  CHECK(f.model->worlds.size() == 2);
  CHECK_FALSE(check_sigma(*f.model, f.root, parse("~p | [a]p")));
  CHECK(f.model->valuation["p"] == std::set<World>{"w0"});
}

TEST_CASE("flip_atom") {
  CfcstSystem empty;
  Proof p = a2_proof().premises[0].premises[0];
  RelAtom atom = RelAtom::grel(a, "w", "u");
  Proof f = flip_atom(p, atom);
  CHECK(f.conclusion.has_atom(RelAtom::grel(ab, "u", "w")));
  CHECK_FALSE(check_proof(empty, f));
  CHECK(proof_height(f) == proof_height(p));
  CHECK(flip_atom(f, RelAtom::grel(ab, "u", "w")) == p);
  CHECK_THROWS_AS(flip_atom(p, RelAtom::grel(a, "u", "w")), FlipError);
}

TEST_CASE("property: prover verdicts are sound") {
  gen::Rng r(17);
  ModelGenerator models(17);
  int valid = 0, refuted = 0;
  for (int i = 0; i < 150; ++i) {
    auto s = gen::system(r, 2, 3, 2);
    Formula f = gen::grammar_formula(r, 3, 2, 2);
    auto res = prove_bounded(s, f, {12, 3000});
    if (res.verdict == GrammarResult::Verdict::Valid) {
      ++valid;
      REQUIRE_FALSE(check_proof(s, *res.proof));
      check_tree_rooted(*res.proof, "w0");
      for (int j = 0; j < 50; ++j)
        REQUIRE(globally_true(models.sigma(s, characters(f)), f));
    } else if (res.verdict == GrammarResult::Verdict::Refuted) {
      ++refuted;
      REQUIRE(is_saturated(s, *res.model));
      REQUIRE_FALSE(check_sigma(*res.model, res.root, f));
    }
  }
  MESSAGE("valid " << valid << ", refuted " << refuted);
  CHECK(valid > 5);
  CHECK(refuted > 5);
}

TEST_CASE("propositional agreement with truth tables") {
  gen::Rng r(23);
  CfcstSystem empty;
  for (int i = 0; i < 300; ++i) {
    std::function<Formula(int)> prop = [&](int d) -> Formula {
      if (d == 0 || gen::pick(r, 4) == 0)
        return gen::literal(r, 3);
      return gen::coin(r) ? disj(prop(d - 1), prop(d - 1)) : conj(prop(d - 1), prop(d - 1));
    };
    Formula f = prop(4);
    auto res = prove_bounded(empty, f);
    REQUIRE(res.verdict != GrammarResult::Verdict::Unknown);
    REQUIRE((res.verdict == GrammarResult::Verdict::Valid) == oracle::tautology(f));
  }
}
