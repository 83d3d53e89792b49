#include "cli.hpp"

#include "refine/calculus.hpp"
#include "refine/fixtures.hpp"
#include "refine/interpolation.hpp"
#include "refine/io.hpp"
#include "refine/nested.hpp"
#include "refine/stit.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <ostream>

namespace refine::cli {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CfcstSystem load_system(const RunConfig &c) {
  if (c.system_path.empty())
    return CfcstSystem::build({}, {}, true);
  return parse_system(read_file(c.system_path), c.auto_close);
}

Formula load_formula(const std::string &text) {
  if (text.empty())
    throw InputError("--formula is required");
  return parse(text);
}

Json load_json(const std::string &path) {
  std::string t = read_file(path);
  try {
    return Json::parse(t);
  } catch (const Json::parse_error &e) {
    throw InputError(path + ": " + e.what());
  }
}

void render(std::ostream &out, const Proof &p, int depth = 0) {
  out << std::string(2 * depth, ' ') << rule_name(p.rule) << "  " << to_string(p.conclusion)
      << "\n";
  for (const auto &q : p.premises)
    render(out, q, depth + 1);
}

std::string join(const std::set<World> &ws) {
  std::vector<World> v(ws.begin(), ws.end());
  std::sort(v.begin(), v.end(), label_less);
  std::string s;
  for (const auto &w : v)
    s += (s.empty() ? "" : " ") + w;
  return s;
}

void render(std::ostream &out, const DsModel &m) {
  out << "worlds: " << join(m.worlds) << "\n";
  for (const auto &cls : choice_classes(m))
    out << "choice cell: " << join(cls) << "\n";
  out << "ideal: " << join(m.ideal) << "\n";
  for (const auto &[a, ws] : m.valuation)
    out << "V(" << a << "): " << join(ws) << "\n";
}

void render(std::ostream &out, const SigmaModel &m) {
  out << "worlds: " << join(m.worlds) << "\n";
  for (const auto &[c, ps] : m.relations) {
    out << "R_" << c.name() << ":";
    for (const auto &[a, b] : ps)
      out << " (" << a << "," << b << ")";
    out << "\n";
  }
  for (const auto &[a, ws] : m.valuation)
    out << "V(" << a << "): " << join(ws) << "\n";
}

void emit(const std::string &path, const Json &j) {
  if (!path.empty())
    write_file(path, j.dump(2) + "\n");
}

int prove_grammar(const RunConfig &c, const std::string &emit_path, std::ostream &out) {
  CfcstSystem s = load_system(c);
  Formula f = load_formula(c.formula);
  GrammarResult r = prove_bounded(s, f, {c.max_labels, c.max_steps});
  Json j = {{"verdict", to_string(r.verdict)}, {"root", r.root}, {"steps", r.steps}};
  if (r.proof) {
    j["proof"] = to_json(*r.proof);
    emit(emit_path, j["proof"]);
  }
  if (r.model) {
    j["model"] = to_json(*r.model);
    emit(emit_path, j["model"]);
  }
  if (!r.reason.empty())
    j["reason"] = r.reason;

  if (c.format == "text") {
    out << to_string(r.verdict) << "\n";
    if (r.proof)
      render(out, *r.proof);
    if (r.model)
      render(out, *r.model);
    if (!r.reason.empty())
      out << r.reason << "\n";
  } else {
    out << j.dump(2) << "\n";
  }
  switch (r.verdict) {
  case GrammarResult::Verdict::Valid:
    return 0;
  case GrammarResult::Verdict::Refuted:
    return 1;
  default:
    return 3;
  }
}

int prove_stit(const RunConfig &c, const std::string &emit_path, bool trace, std::ostream &out) {
  Formula f = load_formula(c.formula);
  if (family(f) == Family::Grammar)
    throw InputError("prove-stit needs a STIT formula");
  DsResult r = prove_ds(c.k, f, trace);
  Json j = {{"verdict", to_string(r.verdict)}, {"k", c.k}, {"root", r.root}, {"steps", r.steps}};
  if (r.proof) {
    j["proof"] = to_json(*r.proof);
    emit(emit_path, j["proof"]);
  }
  if (r.model) {
    j["model"] = to_json(*r.model);
    emit(emit_path, j["model"]);
  }
  if (trace)
    j["trace"] = r.trace;

  if (c.format == "text") {
    out << to_string(r.verdict) << "\n";
    if (trace)
      for (const auto &line : r.trace)
        out << line << "\n";
    if (r.proof)
      render(out, *r.proof);
    if (r.model)
      render(out, *r.model);
  } else {
    out << j.dump(2) << "\n";
  }
  return r.verdict == DsResult::Verdict::Proved ? 0 : 1;
}

int interpolate(const RunConfig &c, const std::string &impl, std::ostream &out) {
  CfcstSystem s = load_system(c);
  auto [phi, psi] = parse_implication(impl);
  InterpolationResult r = lyndon_interpolate(s, phi, psi, {c.max_labels, c.max_steps});
  if (c.format == "text") {
    out << to_string(r.status) << "\n";
    if (r.status == InterpolationResult::Status::Interpolated)
      out << "chi: " << print(r.chi) << "\n";
    else if (!r.reason.empty())
      out << r.reason << "\n";
  } else {
    out << to_json(r).dump(2) << "\n";
  }
  switch (r.status) {
  case InterpolationResult::Status::Interpolated:
    return 0;
  case InterpolationResult::Status::NotDerivable:
    return 1;
  default:
    return 3;
  }
}

struct TranslateArgs {
  std::string sequent, nested, proof, nested_proof;
};

int translate(const RunConfig &c, const TranslateArgs &t, std::ostream &out) {
  int given = !t.sequent.empty() + !t.nested.empty() + !t.proof.empty() + !t.nested_proof.empty();
  if (given != 1)
    throw InputError("translate takes exactly one of --sequent, --nested, --proof, --nested-proof");
  bool text = c.format == "text";
  if (!t.sequent.empty()) {
    std::string n = print_nested(to_nested(parse_sequent(t.sequent)));
    out << (text ? n : Json{{"nested", n}}.dump(2)) << "\n";
  } else if (!t.nested.empty()) {
    Sequent s = to_labelled(parse_nested(t.nested));
    out << (text ? to_string(s) : to_json(s).dump(2)) << "\n";
  } else if (!t.proof.empty()) {
    Json j = load_json(t.proof);
    out << to_json(to_nested_proof(proof_from_json(j.contains("proof") ? j["proof"] : j))).dump(2)
        << "\n";
  } else {
    Proof p = to_labelled_proof(nested_proof_from_json(load_json(t.nested_proof)));
    if (text)
      render(out, p);
    else
      out << to_json(p).dump(2) << "\n";
  }
  return 0;
}

int check_proof_cmd(const RunConfig &c, const std::string &file, bool stit, std::ostream &out) {
  Json j = load_json(file);
  Proof p = proof_from_json(j.contains("proof") ? j["proof"] : j);
  std::optional<ProofError> e = stit ? check_ds_proof(c.k, p) : check_proof(load_system(c), p);
  if (c.format == "text") {
    out << (e ? "rejected: " + to_string(*e) : std::string("ok")) << "\n";
  } else {
    Json r = {{"ok", !e.has_value()}};
    if (e) {
      r["error"] = to_string(e->kind);
      r["at"] = e->at;
      r["message"] = e->message;
    }
    out << r.dump(2) << "\n";
  }
  return e ? 1 : 0;
}

int check_model_cmd(const RunConfig &c, const std::string &file, const std::string &world,
                    std::ostream &out) {
  Json j = load_json(file);
  if (j.contains("model"))
    j = j["model"];
  Json r;
  std::vector<std::string> violations;
  std::optional<bool> holds;
  std::optional<Formula> f;
  if (!c.formula.empty())
    f = parse(c.formula);
  if (j.contains("choice")) {
    DsModel m = ds_model_from_json(j);
    violations = validate_ds(m);
    if (f && violations.empty()) {
      if (!world.empty() && !m.worlds.count(world))
        throw InputError("unknown world " + world);
      holds = world.empty() ? globally_true(m, *f) : check_ds(m, world, *f);
    }
    r["kind"] = "ds";
  } else {
    SigmaModel m = sigma_model_from_json(j);
    if (!is_saturated(load_system(c), m))
      violations.push_back("not saturated");
    if (f) {
      if (!world.empty() && !m.worlds.count(world))
        throw InputError("unknown world " + world);
      holds = world.empty() ? globally_true(m, *f) : check_sigma(m, world, *f);
    }
    r["kind"] = "sigma";
  }
  r["valid"] = violations.empty();
  r["violations"] = violations;
  if (holds)
    r["holds"] = *holds;
  if (c.format == "text") {
    out << (violations.empty() ? "valid" : "invalid");
    for (const auto &v : violations)
      out << " " << v;
    out << "\n";
    if (holds)
      out << (*holds ? "holds" : "fails") << "\n";
  } else {
    out << r.dump(2) << "\n";
  }
  return violations.empty() ? 0 : 1;
}

int fixtures_cmd(const RunConfig &c, const std::vector<int> &ks, int systems, std::ostream &out) {
  Json rows = Json::array();
  int failed = 0;
  auto record = [&](const std::string &group, const Fixture &fx, const std::string &verdict,
                    bool ok) {
    failed += !ok;
    rows.push_back({{"group", group}, {"name", fx.name}, {"formula", print(fx.formula)},
                    {"verdict", verdict}, {"ok", ok}});
  };
  for (int k : ks) {
    if (k < 0)
      throw InputError("k must be non-negative");
    for (const auto &fx : ds_axioms(k)) {
      DsResult r = prove_ds(k, fx.formula);
      record("DS k=" + std::to_string(k), fx, to_string(r.verdict),
             r.verdict == DsResult::Verdict::Proved);
    }
  }
  std::vector<std::pair<std::string, CfcstSystem>> grammars;
  if (!c.system_path.empty())
    grammars.push_back({c.system_path, load_system(c)});
  for (int i = 0; i < systems; ++i)
    grammars.push_back({"random " + std::to_string(c.seed + i), random_system(c.seed + i)});
  for (const auto &[name, s] : grammars) {
    std::vector<Fixture> fs = grammar_a2(s);
    for (auto &fx : grammar_a3(s))
      fs.push_back(fx);
    for (const auto &fx : fs) {
      GrammarResult r = prove_bounded(s, fx.formula, {c.max_labels, c.max_steps});
      record(name, fx, to_string(r.verdict), r.verdict == GrammarResult::Verdict::Valid);
    }
  }
  if (c.format == "text") {
    for (const auto &row : rows)
      out << (row["ok"].get<bool>() ? "ok   " : "FAIL ") << row["group"].get<std::string>()
          << "  " << row["name"].get<std::string>() << "  " << row["verdict"].get<std::string>()
          << "\n";
    out << rows.size() << " fixtures, " << failed << " failed\n";
  } else {
    out << Json{{"fixtures", rows}, {"total", rows.size()}, {"failed", failed}}.dump(2) << "\n";
  }
  return failed ? 1 : 0;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  RunConfig c;
  CLI::App app{"refine: labelled and nested proof search for grammar and STIT logics"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App *sub, bool system) {
    if (system) {
      sub->add_option("--system", c.system_path, "CFCST system file")->check(CLI::ExistingFile);
      sub->add_flag("--auto-close", c.auto_close, "add missing converse rules");
    }
    sub->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--seed", c.seed, "seed (REFINE_PROVER_SEED overrides)");
  };
  auto budgets = [&](CLI::App *sub) {
    sub->add_option("--max-labels", c.max_labels, "label budget")->check(CLI::PositiveNumber);
    sub->add_option("--max-steps", c.max_steps, "step budget")->check(CLI::PositiveNumber);
  };

  std::string emit_path, impl, file, world;
  bool trace = false;
  TranslateArgs tr;
  std::vector<int> ks;
  int systems = 0;

  auto *pg = app.add_subcommand("prove-grammar", "bounded proof search in Km(S)L");
  common(pg, true);
  budgets(pg);
  pg->add_option("--formula", c.formula, "formula")->required();
  pg->add_option("--emit", emit_path, "write the proof or model JSON here");

  auto *ps = app.add_subcommand("prove-stit", "decide a DS formula");
  common(ps, false);
  ps->add_option("--k", c.k, "choice bound, 0 for none")->check(CLI::NonNegativeNumber);
  ps->add_option("--formula", c.formula, "formula")->required();
  ps->add_option("--emit", emit_path, "write the proof or model JSON here");
  ps->add_flag("--trace", trace, "log every step");

  auto *ip = app.add_subcommand("interpolate", "Lyndon interpolant of a valid implication");
  common(ip, true);
  budgets(ip);
  ip->add_option("--impl", impl, "\"phi -> psi\"")->required();

  auto *tl = app.add_subcommand("translate", "labelled <-> nested notation");
  common(tl, false);
  tl->add_option("--sequent", tr.sequent, "labelled tree sequent");
  tl->add_option("--nested", tr.nested, "nested sequent");
  tl->add_option("--proof", tr.proof, "labelled proof JSON file");
  tl->add_option("--nested-proof", tr.nested_proof, "nested proof JSON file");

  auto *cp = app.add_subcommand("check-proof", "check a proof JSON file");
  common(cp, true);
  cp->add_option("file", file, "proof JSON")->required()->check(CLI::ExistingFile);
  auto *kopt = cp->add_option("--k", c.k, "check as a DS proof with this bound")
                   ->check(CLI::NonNegativeNumber);

  auto *cm = app.add_subcommand("check-model", "validate a model and evaluate a formula");
  common(cm, true);
  cm->add_option("file", file, "model JSON")->required()->check(CLI::ExistingFile);
  cm->add_option("--formula", c.formula, "formula to evaluate");
  cm->add_option("--world", world, "world of evaluation (default: every world)");

  auto *fx = app.add_subcommand("fixtures", "run the axiom corpus");
  common(fx, true);
  budgets(fx);
  fx->add_option("--k", ks, "choice bounds (default 0 1 2)")->check(CLI::NonNegativeNumber);
  fx->add_option("--systems", systems, "random systems for the grammar axioms")
      ->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (const char *env = std::getenv("REFINE_PROVER_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception &) {
      err << "REFINE_PROVER_SEED must be a non-negative integer\n";
      return 2;
    }
  }

  try {
    if (pg->parsed())
      return c.subcommand = "prove-grammar", prove_grammar(c, emit_path, out);
    if (ps->parsed())
      return c.subcommand = "prove-stit", prove_stit(c, emit_path, trace, out);
    if (ip->parsed())
      return c.subcommand = "interpolate", interpolate(c, impl, out);
    if (tl->parsed())
      return c.subcommand = "translate", translate(c, tr, out);
    if (cp->parsed())
      return c.subcommand = "check-proof", check_proof_cmd(c, file, kopt->count() > 0, out);
    if (cm->parsed())
      return c.subcommand = "check-model", check_model_cmd(c, file, world, out);
    if (fx->parsed()) {
      if (ks.empty() && c.system_path.empty() && systems == 0)
        ks = {0, 1, 2};
      return c.subcommand = "fixtures", fixtures_cmd(c, ks, systems, out);
    }
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

} // namespace refine::cli
