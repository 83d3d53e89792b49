#pragma once

#include "refine/calculus.hpp"
#include "refine/proof.hpp"
#include "refine/sequent.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace refine {

// A flat sequent |- Gamma is kept as a set; an interpolant is a set of them.
using FlatSequent = std::set<LabelledFormula>;
using Interpolant = std::set<FlatSequent>;

std::string to_string(const FlatSequent &s);
std::string to_string(const Interpolant &i);

class InterpolationError : public std::runtime_error {
public:
  enum class Kind { PreconditionViolated, MixedLabels, InvalidProof, PartitionMismatch };
  InterpolationError(Kind k, const std::string &msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

// Every choice of one formula per flat sequent, negated.
Interpolant orthogonal(const Interpolant &i);

// Drops every flat sequent that strictly contains another one.
Interpolant minimal(const Interpolant &i);

// minimal(orthogonal(i)), computed by growing minimal transversals one
// sequent at a time instead of expanding the full product.
Interpolant minimal_orthogonal(const Interpolant &i);

// Replaces the u-formulas of each flat sequent by w:[x](disjunction). Throws
// PreconditionViolated when u == w.
Interpolant boxed(const Interpolant &i, const Character &x, const Label &w, const Label &u);

// Conjunction over sequents of the disjunction of their formulas. Throws
// MixedLabels unless every formula carries label w.
Formula interpolant_formula(const Interpolant &i, const Label &w);

// Node of a Km(S)LI derivation. In a Rule node the principal formula lies in
// `right`; a left principal is handled by an Orth node whose single premise
// has the partition flipped.
struct InterpNode {
  enum class Kind { Rule, Orth };
  Kind kind = Kind::Rule;
  Rule rule = Rule::Id;
  std::vector<RelAtom> atoms;
  std::vector<LabelledFormula> left;   // sorted multiset
  std::vector<LabelledFormula> right;  // sorted multiset
  Witness witness;
  Interpolant interpolant;
  std::vector<InterpNode> premises;
};

// Replays a checked proof with the end consequent split into `left` and the
// rest. Throws InvalidProof or PartitionMismatch.
InterpNode annotate(const CfcstSystem &s, const Proof &p,
                    const std::vector<LabelledFormula> &left);

std::size_t interp_size(const InterpNode &n);

// Proof of atoms |- left, xi whenever xi contains some member of the
// node's interpolant (fundamental lemma, part i).
Proof interpolant_left_proof(const InterpNode &n, const std::vector<LabelledFormula> &xi);
// Proof of atoms |- theta, right whenever theta contains the negation of a
// formula of every member of the interpolant (part ii).
Proof interpolant_right_proof(const InterpNode &n, const std::vector<LabelledFormula> &theta);

struct LiteralAudit {
  std::set<Literal> chi, phi, psi;
  bool ok = false;  // chi within phi and psi, same polarity
};

struct InterpolationResult {
  enum class Status { Interpolated, NotDerivable, Unknown };
  Status status = Status::Unknown;
  Formula chi;
  Interpolant interpolant;
  std::optional<Proof> left_proof;   // |- w0: phi -> chi
  std::optional<Proof> right_proof;  // |- w0: chi -> psi
  std::optional<Proof> source;       // proof of |- w0: ~phi, w0: psi
  std::optional<SigmaModel> model;   // NotDerivable
  LiteralAudit audit;
  std::string reason;
};

std::string to_string(InterpolationResult::Status s);

// Internal failures (a witness proof that does not check, a broken Lyndon
// condition) throw std::logic_error.
InterpolationResult lyndon_interpolate(const CfcstSystem &s, const Formula &phi,
                                       const Formula &psi, const Budget &b = {});

} // namespace refine
