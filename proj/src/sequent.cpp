#include "refine/sequent.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace refine {

std::string to_string(const RelAtom &a) {
  switch (a.kind) {
  case RelAtom::Kind::G:
    return "R_" + a.ch.name() + "(" + a.from + "," + a.to + ")";
  case RelAtom::Kind::C:
    return "R_0(" + a.from + "," + a.to + ")";
  case RelAtom::Kind::I:
    return "I(" + a.from + ")";
  }
  return "?";
}

std::string to_string(const LabelledFormula &lf) {
  return lf.label + ": " + print(lf.formula);
}

Sequent::Sequent(std::vector<RelAtom> atoms, std::vector<LabelledFormula> formulas)
    : atoms_(std::move(atoms)), formulas_(std::move(formulas)) {
  std::sort(atoms_.begin(), atoms_.end());
  std::sort(formulas_.begin(), formulas_.end());
}

void Sequent::add_atom(const RelAtom &a) {
  atoms_.insert(std::upper_bound(atoms_.begin(), atoms_.end(), a), a);
}

void Sequent::add_formula(const Label &l, const Formula &f) {
  LabelledFormula lf{l, f};
  formulas_.insert(std::upper_bound(formulas_.begin(), formulas_.end(), lf), lf);
}

bool Sequent::remove_formula(const LabelledFormula &lf) {
  auto it = std::lower_bound(formulas_.begin(), formulas_.end(), lf);
  if (it == formulas_.end() || !(*it == lf))
    return false;
  formulas_.erase(it);
  return true;
}

bool Sequent::remove_atom(const RelAtom &a) {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
  if (it == atoms_.end() || !(*it == a))
    return false;
  atoms_.erase(it);
  return true;
}

bool Sequent::has_atom(const RelAtom &a) const {
  return std::binary_search(atoms_.begin(), atoms_.end(), a);
}

bool Sequent::has_formula(const Label &l, const Formula &f) const {
  return std::binary_search(formulas_.begin(), formulas_.end(), LabelledFormula{l, f});
}

std::size_t Sequent::count(const LabelledFormula &lf) const {
  auto r = std::equal_range(formulas_.begin(), formulas_.end(), lf);
  return static_cast<std::size_t>(r.second - r.first);
}

std::set<Label> Sequent::labels() const {
  std::set<Label> out;
  for (const auto &a : atoms_) {
    out.insert(a.from);
    if (a.kind != RelAtom::Kind::I)
      out.insert(a.to);
  }
  for (const auto &f : formulas_)
    out.insert(f.label);
  return out;
}

std::vector<Label> Sequent::labels_in_order() const {
  auto s = labels();
  std::vector<Label> out(s.begin(), s.end());
  std::sort(out.begin(), out.end(), label_less);
  return out;
}

bool Sequent::has_label(const Label &l) const {
  for (const auto &a : atoms_)
    if (a.from == l || a.to == l)
      return true;
  for (const auto &f : formulas_)
    if (f.label == l)
      return true;
  return false;
}

std::string to_string(const Sequent &s) {
  std::string out;
  for (std::size_t i = 0; i < s.atoms().size(); ++i) {
    if (i)
      out += ", ";
    out += to_string(s.atoms()[i]);
  }
  out += out.empty() ? "|-" : " |-";
  for (std::size_t i = 0; i < s.formulas().size(); ++i) {
    out += i ? ", " : " ";
    out += to_string(s.formulas()[i]);
  }
  return out;
}

namespace {

std::string trim(const std::string &s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  return s.substr(b, e - b);
}

// Splits on commas that are not inside parentheses.
std::vector<std::string> split_top(const std::string &s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '{')
      ++depth;
    if (c == ')' || c == '}')
      --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty())
    out.push_back(trim(cur));
  return out;
}

RelAtom parse_atom(const std::string &text) {
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw SequentError("bad relational atom '" + text + "'");
  std::string head = trim(text.substr(0, open));
  std::string args = text.substr(open + 1, close - open - 1);
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto c = args.find(',', start);
    parts.push_back(trim(args.substr(start, c - start)));
    if (c == std::string::npos)
      break;
    start = c + 1;
  }
  for (const auto &p : parts)
    if (!is_label(p))
      throw SequentError("bad label '" + p + "' in '" + text + "'");
  if (head == "I") {
    if (parts.size() != 1)
      throw SequentError("I takes one label: '" + text + "'");
    return RelAtom::ideal(parts[0]);
  }
  if (head.rfind("R_", 0) != 0 || parts.size() != 2)
    throw SequentError("bad relational atom '" + text + "'");
  std::string idx = head.substr(2);
  if (idx == "0" || idx == "[0]")
    return RelAtom::crel(parts[0], parts[1]);
  try {
    return RelAtom::grel(parse_character(idx), parts[0], parts[1]);
  } catch (const std::invalid_argument &e) {
    throw SequentError(e.what());
  }
}

} // namespace

Sequent parse_sequent(const std::string &text) {
  auto turn = text.find("|-");
  if (turn == std::string::npos)
    throw SequentError("missing '|-'");
  std::vector<RelAtom> atoms;
  std::vector<LabelledFormula> formulas;
  for (const auto &a : split_top(text.substr(0, turn))) {
    if (a.empty())
      throw SequentError("empty relational atom");
    atoms.push_back(parse_atom(a));
  }
  for (const auto &f : split_top(text.substr(turn + 2))) {
    auto colon = f.find(':');
    if (colon == std::string::npos)
      throw SequentError("labelled formula needs 'label: formula': '" + f + "'");
    std::string label = trim(f.substr(0, colon));
    if (!is_label(label))
      throw SequentError("bad label '" + label + "'");
    formulas.push_back({label, parse(f.substr(colon + 1))});
  }
  return Sequent(std::move(atoms), std::move(formulas));
}

SequentGraph sequent_graph(const Sequent &s) {
  SequentGraph g;
  g.vertices = s.labels();
  for (const auto &v : g.vertices)
    g.labeling[v];
  for (const auto &a : s.atoms()) {
    switch (a.kind) {
    case RelAtom::Kind::G:
      g.edges.insert({a.from, a.to, a.ch.name()});
      break;
    case RelAtom::Kind::C:
      g.edges.insert({a.from, a.to, "0"});
      break;
    case RelAtom::Kind::I:
      g.ideal.insert(a.from);
      break;
    }
  }
  for (const auto &f : s.formulas())
    g.labeling[f.label].push_back(f.formula);
  return g;
}

std::string to_string(Shape s) {
  switch (s) {
  case Shape::Tree: return "tree";
  case Shape::Forest: return "forest";
  case Shape::Dag: return "dag";
  case Shape::General: return "general";
  }
  return "?";
}

Shape classify(const SequentGraph &g) {
  std::map<Label, std::vector<Label>> succ;
  std::map<Label, int> indeg;
  for (const auto &v : g.vertices)
    indeg[v] = 0;
  for (const auto &[from, to, tag] : g.edges) {
    succ[from].push_back(to);
    ++indeg[to];
  }
  // Kahn's algorithm detects directed cycles (self-loops included).
  std::map<Label, int> left = indeg;
  std::vector<Label> ready;
  for (const auto &[v, d] : left)
    if (d == 0)
      ready.push_back(v);
  std::size_t seen = 0;
  while (!ready.empty()) {
    Label v = ready.back();
    ready.pop_back();
    ++seen;
    for (const auto &w : succ[v])
      if (--left[w] == 0)
        ready.push_back(w);
  }
  if (seen != g.vertices.size())
    return Shape::General;
  bool forest = std::all_of(indeg.begin(), indeg.end(),
                            [](const auto &p) { return p.second <= 1; });
  if (!forest)
    return Shape::Dag;
  std::size_t roots = std::count_if(indeg.begin(), indeg.end(),
                                    [](const auto &p) { return p.second == 0; });
  return roots == 1 ? Shape::Tree : Shape::Forest;
}

Shape classify(const Sequent &s) { return classify(sequent_graph(s)); }

std::optional<Label> tree_root(const Sequent &s) {
  auto g = sequent_graph(s);
  if (classify(g) != Shape::Tree)
    return std::nullopt;
  std::set<Label> has_parent;
  for (const auto &[from, to, tag] : g.edges)
    has_parent.insert(to);
  for (const auto &v : g.vertices)
    if (!has_parent.count(v))
      return v;
  return std::nullopt;
}

PropGraph propagation_graph(const Sequent &s) {
  PropGraph g;
  g.vertices = s.labels();
  for (const auto &a : s.atoms()) {
    if (a.kind != RelAtom::Kind::G)
      continue;
    g.edges.insert({a.from, a.to, a.ch});
    g.edges.insert({a.to, a.from, a.ch.converse()});
  }
  return g;
}

const Label &UnionFind::find(const Label &x) {
  auto it = parent_.find(x);
  if (it == parent_.end())
    it = parent_.emplace(x, x).first;
  if (it->second == x)
    return it->second;
  const Label &root = find(it->second);
  it->second = root;
  return it->second;
}

void UnionFind::unite(const Label &a, const Label &b) {
  Label ra = find(a), rb = find(b);
  if (ra == rb)
    return;
  // Keep the naturally smaller label as representative for determinism.
  if (label_less(rb, ra))
    std::swap(ra, rb);
  parent_[rb] = ra;
}

bool undirected_path(const std::vector<RelAtom> &atoms, const Label &w, const Label &u) {
  if (w == u)
    return true;
  UnionFind uf;
  for (const auto &a : atoms)
    if (a.kind == RelAtom::Kind::C)
      uf.unite(a.from, a.to);
  return uf.same(w, u);
}

std::set<Label> choice_cell(const std::vector<RelAtom> &atoms, const Label &w) {
  UnionFind uf;
  std::set<Label> all{w};
  for (const auto &a : atoms)
    if (a.kind == RelAtom::Kind::C) {
      uf.unite(a.from, a.to);
      all.insert(a.from);
      all.insert(a.to);
    }
  std::set<Label> out;
  for (const auto &v : all)
    if (uf.same(v, w))
      out.insert(v);
  return out;
}

std::vector<ChoiceTree> choice_trees(const Sequent &s) {
  auto g = sequent_graph(s);
  auto shape = classify(g);
  if (shape != Shape::Tree && shape != Shape::Forest)
    throw SequentError("not a labelled forest sequent: " + to_string(s));
  std::map<Label, Label> parent;
  for (const auto &[from, to, tag] : g.edges)
    parent[to] = from;
  std::function<Label(const Label &)> root_of = [&](const Label &v) -> Label {
    auto it = parent.find(v);
    return it == parent.end() ? v : root_of(it->second);
  };
  std::map<Label, std::vector<Label>, LabelLess> trees;
  for (const auto &v : g.vertices)
    trees[root_of(v)].push_back(v);
  std::vector<ChoiceTree> out;
  for (auto &[root, labels] : trees) {
    std::sort(labels.begin(), labels.end(), label_less);
    out.push_back({root, labels});
  }
  return out;
}

} // namespace refine
