#include "doctest.h"
#include "gen.hpp"
#include "refine/calculus.hpp"
#include "refine/io.hpp"
#include "refine/stit.hpp"

using namespace refine;

TEST_CASE("formula and sequent json") {
  Formula f = parse("[a](p | <b'>~q) & top");
  CHECK(to_json(f) == "[a](p | <b'>~q) & top");
  CHECK(formula_from_json(to_json(f)) == f);
  CHECK_THROWS_AS(formula_from_json(Json(3)), IoError);
  CHECK_THROWS_AS(formula_from_json(Json("p &")), IoError);

  Sequent s = parse_sequent("R_a(w,u), R_[0](u,v), I(v) |- w: p, v: [o]q");
  Json j = to_json(s);
  CHECK(j["atoms"].size() == 3);
  CHECK(j["formulas"].size() == 2);
  CHECK(sequent_from_json(j) == s);
  CHECK(sequent_from_json(Json::parse(j.dump())) == s);

  CHECK_THROWS_AS(atom_from_json(Json{{"kind", "Q"}}), IoError);
  CHECK_THROWS_AS(sequent_from_json(Json{{"atoms", Json::array()}}), IoError);
}

TEST_CASE("proof json round trip") {
  gen::Rng r(11);
  int proofs = 0;
  for (int n = 0; n < 300 && proofs < 40; ++n) {
    auto sys = gen::system(r, 2, 3);
    Formula g = gen::grammar_formula(r, 3);
    Formula f = gen::coin(r) ? g : disj(g, negate(g));
    auto res = prove_bounded(sys, f, {10, 2000});
    if (!res.proof)
      continue;
    ++proofs;
    Json j = to_json(*res.proof);
    Proof back = proof_from_json(Json::parse(j.dump()));
    CHECK(back == *res.proof);
    CHECK_FALSE(check_proof(sys, back));
  }
  CHECK(proofs >= 20);

  for (int n = 0; n < 60; ++n) {
    Formula f = gen::stit_formula(r, 3);
    auto res = prove_ds(1, f);
    if (res.proof) {
      Proof back = proof_from_json(to_json(*res.proof));
      CHECK(back == *res.proof);
      CHECK_FALSE(check_ds_proof(1, back));
    } else {
      REQUIRE(res.model);
      CHECK(ds_model_from_json(to_json(*res.model)) == *res.model);
    }
  }
}

TEST_CASE("witness json keeps every field") {
  Witness w;
  w.principal = LabelledFormula{"w", parse("<a>p")};
  w.fresh = "w3";
  w.target = "u";
  w.via = "v";
  w.path = PathWitness{{"w", "u", "v"}, {Character("a"), Character("b", true)}, 0};
  w.roots = {"w0", "w2"};
  CHECK(witness_from_json(to_json(w)) == w);
  CHECK(witness_from_json(Json::object()) == Witness{});

  Json bad = to_json(w);
  bad["path"]["labels"] = Json::array({"w"});
  CHECK_THROWS_AS(witness_from_json(bad), IoError);
}

TEST_CASE("nested proof json") {
  auto res = prove_bounded(CfcstSystem::build({Character("a")}, {}, true), parse("~p | [a]<a'>p"));
  REQUIRE(res.proof);
  NestedProof n = to_nested_proof(*res.proof);
  Json j = to_json(n);
  CHECK(j["conclusion"] == "~p | [a]<a'>p");
  CHECK(nested_proof_from_json(j) == n);
  CHECK(to_labelled_proof(nested_proof_from_json(j)) == to_labelled_proof(n));
}

TEST_CASE("model json") {
  SigmaModel m;
  m.worlds = {"w0", "w1", "w10", "w2"};
  m.relations[Character("a")] = {{"w0", "w1"}};
  m.relations[Character("a", true)] = {{"w1", "w0"}};
  m.valuation["p"] = {"w2", "w10"};
  Json j = to_json(m);
  // natural order for readability
  CHECK(j["worlds"] == Json({"w0", "w1", "w2", "w10"}));
  CHECK(j["relations"]["a'"] == Json::array({Json({"w1", "w0"})}));
  CHECK(sigma_model_from_json(j) == m);

  ModelGenerator g(5);
  for (int i = 0; i < 30; ++i) {
    DsModel d = g.ds(i % 3);
    Json dj = to_json(d);
    CHECK(dj["k"] == i % 3);
    CHECK(ds_model_from_json(Json::parse(dj.dump())) == d);
  }
  Json neg = to_json(g.ds(1));
  neg["k"] = -1;
  CHECK_THROWS_AS(ds_model_from_json(neg), IoError);
  CHECK_THROWS_AS(ds_model_from_json(Json{{"worlds", Json::array()}}), IoError);
}

TEST_CASE("interpolation json") {
  auto r = lyndon_interpolate(CfcstSystem{}, parse("p & q"), parse("p & q"));
  Json j = to_json(r);
  CHECK(j["status"] == "Interpolated");
  CHECK(j["chi"] == "p & q");
  CHECK(j["literal_audit"]["ok"] == true);
  CHECK(proof_from_json(j["left_proof"]) == *r.left_proof);
  CHECK(proof_from_json(j["right_proof"]) == *r.right_proof);

  auto no = lyndon_interpolate(CfcstSystem{}, parse("p"), parse("q"));
  Json k = to_json(no);
  CHECK(k["status"] == "NotDerivable");
  CHECK_FALSE(k.contains("chi"));
}
