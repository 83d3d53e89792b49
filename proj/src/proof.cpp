#include "refine/proof.hpp"

#include <algorithm>
#include <stdexcept>

namespace refine {

namespace {
const std::pair<Rule, const char *> kRuleNames[] = {
    {Rule::Id, "Id"},         {Rule::TopR, "TopR"},     {Rule::OrR, "OrR"},
    {Rule::AndR, "AndR"},     {Rule::BoxR, "BoxR"},     {Rule::PrDia, "PrDia"},
    {Rule::DiaP, "DiaP"},     {Rule::ChBoxR, "ChBoxR"}, {Rule::ChDiaP, "ChDiaP"},
    {Rule::OblR, "OblR"},     {Rule::PermP1, "PermP1"}, {Rule::PermP2, "PermP2"},
    {Rule::APC, "APC"},
};
}

std::string rule_name(Rule r) {
  for (const auto &[rule, name] : kRuleNames)
    if (rule == r)
      return name;
  return "?";
}

Rule parse_rule(const std::string &name) {
  for (const auto &[rule, n] : kRuleNames)
    if (name == n)
      return rule;
  throw std::invalid_argument("unknown rule '" + name + "'");
}

std::size_t proof_size(const Proof &p) {
  std::size_t n = 1;
  for (const auto &q : p.premises)
    n += proof_size(q);
  return n;
}

std::size_t proof_height(const Proof &p) {
  std::size_t h = 0;
  for (const auto &q : p.premises)
    h = std::max(h, proof_height(q));
  return h + 1;
}

std::string to_string(ProofError::Kind k) {
  switch (k) {
  case ProofError::Kind::WrongShape: return "WrongShape";
  case ProofError::Kind::EigenvariableClash: return "EigenvariableClash";
  case ProofError::Kind::SideConditionFails: return "SideConditionFails";
  case ProofError::Kind::LeafNotInitial: return "LeafNotInitial";
  }
  return "?";
}

std::string to_string(const ProofError &e) {
  std::string at = "root";
  for (auto i : e.at)
    at += "." + std::to_string(i);
  return to_string(e.kind) + " at " + at + ": " + e.message;
}

Sequent extend(const Sequent &s, const std::vector<RelAtom> &atoms,
               const std::vector<LabelledFormula> &formulas) {
  Sequent out = s;
  for (const auto &a : atoms)
    out.add_atom(a);
  for (const auto &f : formulas)
    out.add_formula(f);
  return out;
}

bool premise_matches(const Sequent &conclusion, const Sequent &premise,
                     const std::optional<LabelledFormula> &principal,
                     const std::vector<RelAtom> &atoms,
                     const std::vector<LabelledFormula> &formulas) {
  Sequent kept = extend(conclusion, atoms, formulas);
  if (premise == kept)
    return true;
  if (!principal)
    return false;
  if (!kept.remove_formula(*principal))
    return false;
  return premise == kept;
}

} // namespace refine
