#include "refine/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace refine {

namespace {

const Json &field(const Json &j, const char *name) {
  if (!j.is_object() || !j.contains(name))
    throw IoError(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string text(const Json &j, const char *name) {
  const Json &v = field(j, name);
  if (!v.is_string())
    throw IoError(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

Json worlds_json(const std::set<World> &ws) {
  std::vector<World> v(ws.begin(), ws.end());
  std::sort(v.begin(), v.end(), label_less);
  return Json(v);
}

std::set<World> worlds_from(const Json &j) {
  if (!j.is_array())
    throw IoError("expected an array of worlds");
  std::set<World> out;
  for (const auto &w : j)
    out.insert(w.get<std::string>());
  return out;
}

Json pairs_json(const std::set<Pair> &ps) {
  std::vector<Pair> v(ps.begin(), ps.end());
  std::sort(v.begin(), v.end(), [](const Pair &a, const Pair &b) {
    if (a.first != b.first)
      return label_less(a.first, b.first);
    return label_less(a.second, b.second);
  });
  Json out = Json::array();
  for (const auto &[a, b] : v)
    out.push_back({a, b});
  return out;
}

std::set<Pair> pairs_from(const Json &j) {
  if (!j.is_array())
    throw IoError("expected an array of pairs");
  std::set<Pair> out;
  for (const auto &p : j) {
    if (!p.is_array() || p.size() != 2)
      throw IoError("a pair must have two worlds");
    out.insert({p[0].get<std::string>(), p[1].get<std::string>()});
  }
  return out;
}

Json valuation_json(const std::map<std::string, std::set<World>> &v) {
  Json out = Json::object();
  for (const auto &[atom, ws] : v)
    out[atom] = worlds_json(ws);
  return out;
}

std::map<std::string, std::set<World>> valuation_from(const Json &j) {
  if (!j.is_object())
    throw IoError("valuation must be an object");
  std::map<std::string, std::set<World>> out;
  for (const auto &[atom, ws] : j.items())
    out[atom] = worlds_from(ws);
  return out;
}

Json lf_json(const LabelledFormula &lf) {
  return {{"label", lf.label}, {"formula", print(lf.formula)}};
}

LabelledFormula lf_from(const Json &j) {
  return {text(j, "label"), formula_from_json(field(j, "formula"))};
}

Json literals_json(const std::set<Literal> &ls) {
  Json out = Json::array();
  for (const auto &l : ls)
    out.push_back(l.positive ? l.atom : "~" + l.atom);
  return out;
}

} // namespace

Json to_json(const Formula &f) { return print(f); }

Formula formula_from_json(const Json &j) {
  if (!j.is_string())
    throw IoError("a formula must be a string");
  try {
    return parse(j.get<std::string>());
  } catch (const std::exception &e) {
    throw IoError(std::string("bad formula: ") + e.what());
  }
}

Json to_json(const RelAtom &a) {
  switch (a.kind) {
  case RelAtom::Kind::G:
    return {{"kind", "R"}, {"char", a.ch.name()}, {"from", a.from}, {"to", a.to}};
  case RelAtom::Kind::C:
    return {{"kind", "R0"}, {"from", a.from}, {"to", a.to}};
  case RelAtom::Kind::I:
    break;
  }
  return {{"kind", "I"}, {"label", a.from}};
}

RelAtom atom_from_json(const Json &j) {
  std::string kind = text(j, "kind");
  if (kind == "R")
    return RelAtom::grel(parse_character(text(j, "char")), text(j, "from"), text(j, "to"));
  if (kind == "R0")
    return RelAtom::crel(text(j, "from"), text(j, "to"));
  if (kind == "I")
    return RelAtom::ideal(text(j, "label"));
  throw IoError("unknown atom kind '" + kind + "'");
}

Json to_json(const Sequent &s) {
  Json atoms = Json::array(), formulas = Json::array();
  for (const auto &a : s.atoms())
    atoms.push_back(to_json(a));
  for (const auto &lf : s.formulas())
    formulas.push_back(lf_json(lf));
  return {{"atoms", atoms}, {"formulas", formulas}};
}

Sequent sequent_from_json(const Json &j) {
  std::vector<RelAtom> atoms;
  std::vector<LabelledFormula> formulas;
  for (const auto &a : field(j, "atoms"))
    atoms.push_back(atom_from_json(a));
  for (const auto &f : field(j, "formulas"))
    formulas.push_back(lf_from(f));
  return Sequent(atoms, formulas);
}

Json to_json(const Witness &w) {
  Json out = Json::object();
  if (w.principal)
    out["principal"] = lf_json(*w.principal);
  if (w.fresh)
    out["fresh"] = *w.fresh;
  if (w.target)
    out["target"] = *w.target;
  if (w.via)
    out["via"] = *w.via;
  if (w.path) {
    Json chars = Json::array();
    for (const auto &c : w.path->chars)
      chars.push_back(c.name());
    out["path"] = {{"labels", w.path->labels}, {"chars", chars}};
  }
  if (!w.roots.empty())
    out["roots"] = w.roots;
  return out;
}

Witness witness_from_json(const Json &j) {
  if (!j.is_object())
    throw IoError("witness must be an object");
  Witness w;
  if (j.contains("principal"))
    w.principal = lf_from(j.at("principal"));
  if (j.contains("fresh"))
    w.fresh = j.at("fresh").get<std::string>();
  if (j.contains("target"))
    w.target = j.at("target").get<std::string>();
  if (j.contains("via"))
    w.via = j.at("via").get<std::string>();
  if (j.contains("path")) {
    const Json &p = j.at("path");
    PathWitness pw;
    pw.labels = field(p, "labels").get<std::vector<std::string>>();
    for (const auto &c : field(p, "chars"))
      pw.chars.push_back(parse_character(c.get<std::string>()));
    if (pw.labels.size() != pw.chars.size() + 1)
      throw IoError("path needs one more label than characters");
    w.path = pw;
  }
  if (j.contains("roots"))
    w.roots = j.at("roots").get<std::vector<std::string>>();
  return w;
}

Json to_json(const Proof &p) {
  Json premises = Json::array();
  for (const auto &q : p.premises)
    premises.push_back(to_json(q));
  return {{"rule", rule_name(p.rule)},
          {"conclusion", to_json(p.conclusion)},
          {"witness", to_json(p.witness)},
          {"premises", premises}};
}

Proof proof_from_json(const Json &j) {
  Proof p;
  try {
    p.rule = parse_rule(text(j, "rule"));
  } catch (const std::invalid_argument &e) {
    throw IoError(e.what());
  }
  p.conclusion = sequent_from_json(field(j, "conclusion"));
  if (j.contains("witness"))
    p.witness = witness_from_json(j.at("witness"));
  for (const auto &q : field(j, "premises"))
    p.premises.push_back(proof_from_json(q));
  return p;
}

Json to_json(const NestedProof &p) {
  Json premises = Json::array();
  for (const auto &q : p.premises)
    premises.push_back(to_json(q));
  return {{"rule", rule_name(p.rule)},
          {"conclusion", print_nested(p.conclusion)},
          {"witness", to_json(p.witness)},
          {"premises", premises}};
}

NestedProof nested_proof_from_json(const Json &j) {
  NestedProof p;
  try {
    p.rule = parse_rule(text(j, "rule"));
    p.conclusion = parse_nested(text(j, "conclusion"));
  } catch (const std::invalid_argument &e) {
    throw IoError(e.what());
  } catch (const NestedError &e) {
    throw IoError(e.what());
  }
  if (j.contains("witness"))
    p.witness = witness_from_json(j.at("witness"));
  for (const auto &q : field(j, "premises"))
    p.premises.push_back(nested_proof_from_json(q));
  return p;
}

Json to_json(const SigmaModel &m) {
  Json rel = Json::object();
  for (const auto &[c, ps] : m.relations)
    rel[c.name()] = pairs_json(ps);
  return {{"worlds", worlds_json(m.worlds)},
          {"relations", rel},
          {"valuation", valuation_json(m.valuation)}};
}

SigmaModel sigma_model_from_json(const Json &j) {
  SigmaModel m;
  m.worlds = worlds_from(field(j, "worlds"));
  if (j.contains("relations"))
    for (const auto &[c, ps] : j.at("relations").items())
      m.relations[parse_character(c)] = pairs_from(ps);
  if (j.contains("valuation"))
    m.valuation = valuation_from(j.at("valuation"));
  return m;
}

Json to_json(const DsModel &m) {
  return {{"worlds", worlds_json(m.worlds)},
          {"choice", pairs_json(m.choice)},
          {"ideal", worlds_json(m.ideal)},
          {"valuation", valuation_json(m.valuation)},
          {"k", m.k}};
}

DsModel ds_model_from_json(const Json &j) {
  DsModel m;
  m.worlds = worlds_from(field(j, "worlds"));
  m.choice = pairs_from(field(j, "choice"));
  m.ideal = worlds_from(field(j, "ideal"));
  if (j.contains("valuation"))
    m.valuation = valuation_from(j.at("valuation"));
  if (j.contains("k"))
    m.k = j.at("k").get<int>();
  if (m.k < 0)
    throw IoError("k must be non-negative");
  return m;
}

Json to_json(const LiteralAudit &a) {
  return {{"chi", literals_json(a.chi)},
          {"phi", literals_json(a.phi)},
          {"psi", literals_json(a.psi)},
          {"ok", a.ok}};
}

Json to_json(const InterpolationResult &r) {
  Json out = {{"status", to_string(r.status)}};
  if (r.status != InterpolationResult::Status::Interpolated) {
    if (r.model)
      out["model"] = to_json(*r.model);
    if (!r.reason.empty())
      out["reason"] = r.reason;
    return out;
  }
  Json members = Json::array();
  for (const auto &fs : r.interpolant) {
    Json m = Json::array();
    for (const auto &lf : fs)
      m.push_back(lf_json(lf));
    members.push_back(m);
  }
  out["chi"] = print(r.chi);
  out["interpolant"] = members;
  out["left_proof"] = to_json(*r.left_proof);
  out["right_proof"] = to_json(*r.right_proof);
  out["literal_audit"] = to_json(r.audit);
  return out;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw IoError("cannot write " + path);
}

} // namespace refine
