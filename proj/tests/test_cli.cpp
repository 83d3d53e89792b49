#include "cli.hpp"
#include "doctest.h"
#include "refine/io.hpp"
#include "refine/semantics.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <unistd.h>

using namespace refine;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  fs::path d = fs::temp_directory_path() / ("refine_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string file(const fs::path &d, const std::string &name, const std::string &text) {
  fs::path p = d / name;
  write_file(p.string(), text);
  return p.string();
}

} // namespace

TEST_CASE("prove-stit golden counter-model") {
  fs::path d = scratch();
  std::string emit = (d / "model.json").string();
  Run r = run({"prove-stit", "--k", "0", "--formula", "[0][o](p|~q)", "--emit", emit});
  CHECK(r.code == 1);
  Json j = Json::parse(r.out);
  CHECK(j["verdict"] == "Refuted");
  DsModel m = ds_model_from_json(j["model"]);
  CHECK(m.worlds.size() == 3);
  CHECK(choice_classes(m).size() == 2);
  CHECK(m.ideal.size() == 1);
  CHECK(ds_model_from_json(Json::parse(read_file(emit))) == m);

  Run c = run({"check-model", emit, "--formula", "[0][o](p|~q)", "--world", "w0"});
  CHECK(c.code == 0);
  CHECK(Json::parse(c.out)["holds"] == false);

  Run t = run({"prove-stit", "--k", "0", "--formula", "[0][o](p|~q)", "--trace", "--format", "text"});
  CHECK(t.code == 1);
  CHECK(t.out.rfind("Refuted\n", 0) == 0);
  CHECK(t.out.find("ideal: ") != std::string::npos);
}

TEST_CASE("prove-stit proved and emitted proof checks") {
  fs::path d = scratch();
  std::string emit = (d / "ds_proof.json").string();
  Run r = run({"prove-stit", "--k", "1", "--formula", "[*]p -> [0]p", "--emit", emit});
  CHECK(r.code == 0);
  CHECK(run({"check-proof", emit, "--k", "1"}).code == 0);
  // the same proof read as a grammar proof is rejected, not crashed on
  CHECK(run({"check-proof", emit}).code == 1);
}

TEST_CASE("prove-grammar and check-proof round trip") {
  fs::path d = scratch();
  std::string sys = file(d, "empty.cfcst", "alphabet: a\n");
  std::string emit = (d / "proof.json").string();
  Run r = run({"prove-grammar", "--system", sys, "--formula", "~p | [a]<a'>p", "--emit", emit});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["verdict"] == "Valid");
  Run c = run({"check-proof", emit, "--system", sys});
  CHECK(c.code == 0);
  CHECK(Json::parse(c.out)["ok"] == true);

  // tampering with a leaf breaks it
  Json p = Json::parse(read_file(emit));
  Json *leaf = &p;
  while (!(*leaf)["premises"].empty())
    leaf = &(*leaf)["premises"][0];
  (*leaf)["conclusion"]["formulas"] = Json::array();
  std::string bad = file(d, "bad.json", p.dump());
  Run b = run({"check-proof", bad, "--system", sys});
  CHECK(b.code == 1);
  CHECK(Json::parse(b.out)["ok"] == false);

  Run refuted = run({"prove-grammar", "--system", sys, "--formula", "p -> [a]p", "--emit",
                     (d / "cm.json").string()});
  CHECK(refuted.code == 1);
  Run cm = run({"check-model", (d / "cm.json").string(), "--system", sys, "--formula",
                "p -> [a]p", "--world", "w0"});
  CHECK(cm.code == 0);
  CHECK(Json::parse(cm.out)["holds"] == false);
}

TEST_CASE("interpolate") {
  fs::path d = scratch();
  std::string sys = file(d, "empty.cfcst", "alphabet: a\n");
  Run r = run({"interpolate", "--system", sys, "--impl", "p & q -> p & q"});
  CHECK(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["chi"] == "p & q");
  CHECK(j["literal_audit"]["ok"] == true);
  CHECK(j.contains("left_proof"));
  CHECK(j.contains("right_proof"));

  Run no = run({"interpolate", "--impl", "p -> q"});
  CHECK(no.code == 1);
  CHECK(run({"interpolate", "--impl", "p & q"}).code == 2);
}

TEST_CASE("translate") {
  Run r = run({"translate", "--sequent", "R_a(w0,w1) |- w0: p, w1: q", "--format", "text"});
  CHECK(r.code == 0);
  CHECK(r.out == "p, (a){q}\n");
  Run back = run({"translate", "--nested", "p, (a){q}", "--format", "text"});
  CHECK(back.code == 0);
  CHECK(parse_sequent(back.out.substr(0, back.out.size() - 1)) ==
        parse_sequent("R_a(w0,w0.1) |- w0: p, w0.1: q"));

  fs::path d = scratch();
  std::string emit = (d / "p2.json").string();
  REQUIRE(run({"prove-grammar", "--formula", "~p | [a]<a'>p", "--emit", emit}).code == 0);
  Run n = run({"translate", "--proof", emit});
  CHECK(n.code == 0);
  std::string nested = file(d, "nested.json", n.out);
  Run l = run({"translate", "--nested-proof", nested});
  CHECK(l.code == 0);
  std::string labelled = file(d, "labelled.json", l.out);
  CHECK(run({"check-proof", labelled}).code == 0);

  CHECK(run({"translate"}).code == 2);
  CHECK(run({"translate", "--sequent", "R_a(w,u), R_a(v,u) |- u: p"}).code == 2);
}

TEST_CASE("fixtures") {
  Run r = run({"fixtures", "--k", "1", "--format", "text"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 failed") != std::string::npos);
  Run g = run({"fixtures", "--systems", "2", "--seed", "7"});
  CHECK(g.code == 0);
  CHECK(Json::parse(g.out)["failed"] == 0);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"prove-stit", "--formula", "p &"}).code == 2);
  CHECK(run({"prove-stit", "--formula", "[a]p"}).code == 2);
  CHECK(run({"prove-stit", "--k", "-1", "--formula", "p"}).code == 2);
  CHECK(run({"prove-grammar", "--formula", "p", "--max-labels", "0"}).code == 2);
  CHECK(run({"prove-grammar", "--system", "/nonexistent", "--formula", "p"}).code == 2);
  CHECK(run({"check-proof", "/nonexistent"}).code == 2);
  Run e = run({"prove-grammar", "--formula", "~~"});
  CHECK(e.code == 2);
  CHECK_FALSE(e.err.empty());
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output is deterministic") {
  std::vector<std::string> a{"prove-stit", "--k", "2", "--formula", "<0>(p & <o>q) | [*]~p"};
  CHECK(run(a).out == run(a).out);
  std::vector<std::string> b{"interpolate", "--impl", "[a](p & q) -> [a]p | <a>q"};
  CHECK(run(b).out == run(b).out);

  std::vector<std::string> f{"fixtures", "--systems", "1", "--seed", "3"};
  ::setenv("REFINE_PROVER_SEED", "9", 1);
  Run env = run(f);
  ::unsetenv("REFINE_PROVER_SEED");
  Run nine = run({"fixtures", "--systems", "1", "--seed", "9"});
  CHECK(env.out == nine.out);
}
