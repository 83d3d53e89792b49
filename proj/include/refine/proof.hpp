#pragma once

#include "refine/grammar.hpp"
#include "refine/sequent.hpp"

#include <optional>
#include <string>
#include <vector>

namespace refine {

// Rules of both calculi. Id, TopR, OrR, AndR and BoxR are shared; BoxR acts
// on [x] in grammar proofs and on the settledness box in STIT proofs.
enum class Rule {
  Id,
  TopR,
  OrR,
  AndR,
  BoxR,
  PrDia,
  DiaP,
  ChBoxR,
  ChDiaP,
  OblR,
  PermP1,
  PermP2,
  APC,
};

std::string rule_name(Rule r);
Rule parse_rule(const std::string &name);  // throws std::invalid_argument

struct Witness {
  std::optional<LabelledFormula> principal;
  std::optional<Label> fresh;        // eigenvariable of a box-like rule
  std::optional<Label> target;       // label receiving a propagated formula
  std::optional<Label> via;          // PermP1: the ideal label
  std::optional<PathWitness> path;   // PrDia
  std::vector<Label> roots;          // APC: the k+1 connected labels
  bool operator==(const Witness &) const = default;
};

inline Witness on(const LabelledFormula &principal) {
  Witness w;
  w.principal = principal;
  return w;
}

struct Proof {
  Rule rule = Rule::Id;
  Sequent conclusion;
  Witness witness;
  std::vector<Proof> premises;
  bool operator==(const Proof &) const = default;
};

std::size_t proof_size(const Proof &p);
std::size_t proof_height(const Proof &p);

struct ProofError {
  enum class Kind {
    WrongShape,
    EigenvariableClash,
    SideConditionFails,
    LeafNotInitial,
  };
  Kind kind;
  std::vector<std::size_t> at;  // premise indices from the root
  std::string message;
};

std::string to_string(ProofError::Kind k);
std::string to_string(const ProofError &e);

// Premise shape helper shared by both checkers: the premise equals the
// conclusion plus the additions, with the principal either kept or removed.
bool premise_matches(const Sequent &conclusion, const Sequent &premise,
                     const std::optional<LabelledFormula> &principal,
                     const std::vector<RelAtom> &atoms,
                     const std::vector<LabelledFormula> &formulas);

// Premise built the way the provers build it (principal retained).
Sequent extend(const Sequent &s, const std::vector<RelAtom> &atoms,
               const std::vector<LabelledFormula> &formulas);

// Walks every node, parents before premises.
template <class F> void visit(const Proof &p, F &&f) {
  f(p);
  for (const auto &q : p.premises)
    visit(q, f);
}

} // namespace refine
