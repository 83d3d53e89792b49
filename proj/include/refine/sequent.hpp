#pragma once

#include "refine/grammar.hpp"
#include "refine/label.hpp"
#include "refine/syntax.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace refine {

struct RelAtom {
  enum class Kind { G, C, I };  // R_x wu, R_[0] wu, I w
  Kind kind = Kind::G;
  Character ch;  // G only
  Label from;
  Label to;      // empty for I

  static RelAtom grel(const Character &c, const Label &w, const Label &u) {
    return {Kind::G, c, w, u};
  }
  static RelAtom crel(const Label &w, const Label &u) { return {Kind::C, {}, w, u}; }
  static RelAtom ideal(const Label &w) { return {Kind::I, {}, w, {}}; }

  auto operator<=>(const RelAtom &) const = default;
  bool operator==(const RelAtom &) const = default;
};

std::string to_string(const RelAtom &a);

struct LabelledFormula {
  Label label;
  Formula formula;
  auto operator<=>(const LabelledFormula &) const = default;
  bool operator==(const LabelledFormula &) const = default;
};

std::string to_string(const LabelledFormula &lf);

// R |- Gamma with both sides kept as sorted multisets.
class Sequent {
public:
  Sequent() = default;
  Sequent(std::vector<RelAtom> atoms, std::vector<LabelledFormula> formulas);

  const std::vector<RelAtom> &atoms() const { return atoms_; }
  const std::vector<LabelledFormula> &formulas() const { return formulas_; }

  void add_atom(const RelAtom &a);
  void add_formula(const Label &l, const Formula &f);
  void add_formula(const LabelledFormula &lf) { add_formula(lf.label, lf.formula); }
  bool remove_formula(const LabelledFormula &lf);  // one occurrence
  bool remove_atom(const RelAtom &a);

  bool has_atom(const RelAtom &a) const;
  bool has_formula(const Label &l, const Formula &f) const;
  std::size_t count(const LabelledFormula &lf) const;

  std::set<Label> labels() const;
  std::vector<Label> labels_in_order() const;  // natural label order
  bool has_label(const Label &l) const;

  bool operator==(const Sequent &) const = default;
  auto operator<=>(const Sequent &) const = default;

private:
  std::vector<RelAtom> atoms_;
  std::vector<LabelledFormula> formulas_;
};

std::string to_string(const Sequent &s);
Sequent parse_sequent(const std::string &text);

class SequentError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SequentGraph {
  std::set<Label> vertices;
  std::set<std::tuple<Label, Label, std::string>> edges;  // tag: x, x' or 0
  std::map<Label, std::vector<Formula>> labeling;
  std::set<Label> ideal;
};

SequentGraph sequent_graph(const Sequent &s);

enum class Shape { Tree, Forest, Dag, General };
std::string to_string(Shape s);

Shape classify(const Sequent &s);
Shape classify(const SequentGraph &g);
std::optional<Label> tree_root(const Sequent &s);

PropGraph propagation_graph(const Sequent &s);

class UnionFind {
public:
  const Label &find(const Label &x);
  void unite(const Label &a, const Label &b);
  bool same(const Label &a, const Label &b) { return find(a) == find(b); }

private:
  std::map<Label, Label> parent_;
};

// w ~ u through R_[0] atoms, ignoring direction.
bool undirected_path(const std::vector<RelAtom> &atoms, const Label &w, const Label &u);

// Labels u with w ~ u, including w itself.
std::set<Label> choice_cell(const std::vector<RelAtom> &atoms, const Label &w);

struct ChoiceTree {
  Label root;
  std::vector<Label> labels;  // natural order
  bool operator==(const ChoiceTree &) const = default;
};

// Trees of the forest formed by R_[0] atoms, sorted by root in natural order.
// Throws SequentError if the sequent is not a labelled forest sequent.
std::vector<ChoiceTree> choice_trees(const Sequent &s);

} // namespace refine
