#pragma once

#include "refine/proof.hpp"
#include "refine/sequent.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace refine {

struct NestedSequent {
  std::vector<Formula> formulas;  // sorted
  std::vector<std::pair<Character, NestedSequent>> children;
  bool operator==(const NestedSequent &) const = default;
};

class NestedError : public std::runtime_error {
public:
  enum class Kind { NotTree, NotTreeProof, Syntax };
  NestedError(Kind k, const std::string &msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

// Children appear in label order. Address labels (w0.2.1) compare by their
// numeric components, anything else by natural order.
NestedSequent to_nested(const Sequent &s);

// The root gets `root`, the i-th child of a node with label l gets "l.i".
Sequent to_labelled(const NestedSequent &x, const Label &root = "w0");

std::string print_nested(const NestedSequent &x);
NestedSequent parse_nested(const std::string &text);

bool address_less(const Label &a, const Label &b);

struct NestedProof {
  Rule rule = Rule::Id;
  NestedSequent conclusion;
  Witness witness;  // labels are addresses of to_labelled(conclusion)
  std::vector<NestedProof> premises;
  bool operator==(const NestedProof &) const = default;
};

// Rewrites every sequent into nested notation. Labels are renamed to
// addresses: the end sequent's tree is numbered in label order and a label
// created higher up becomes the next child of its parent, so every premise
// keeps the child positions of its conclusion.
NestedProof to_nested_proof(const Proof &p);
Proof to_labelled_proof(const NestedProof &p);

} // namespace refine
