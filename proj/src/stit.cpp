#include "refine/stit.hpp"

#include <algorithm>
#include <functional>

namespace refine {

namespace {

std::vector<ChoiceTree> forest(const Sequent &s) {
  try {
    return choice_trees(s);
  } catch (const SequentError &e) {
    throw StitError(StitError::Kind::NotForest, e.what());
  }
}

std::vector<Label> ideal_labels(const Sequent &s) {
  std::vector<Label> out;
  for (const auto &a : s.atoms())
    if (a.kind == RelAtom::Kind::I)
      out.push_back(a.from);
  std::sort(out.begin(), out.end(), label_less);
  return out;
}

// Formulas grouped by label, labels in natural order.
struct View {
  const Sequent &s;
  std::vector<Label> labels;
  std::map<Label, std::vector<Formula>> at;
  std::map<Label, std::set<Label>> cell;
  std::vector<Label> ideals;

  explicit View(const Sequent &seq) : s(seq), labels(seq.labels_in_order()), ideals(ideal_labels(seq)) {
    for (const auto &lf : seq.formulas())
      at[lf.label].push_back(lf.formula);
    UnionFind uf;
    for (const auto &l : labels)
      uf.find(l);
    for (const auto &a : seq.atoms())
      if (a.kind == RelAtom::Kind::C)
        uf.unite(a.from, a.to);
    for (const auto &l : labels)
      cell[uf.find(l)].insert(l);
    std::map<Label, std::set<Label>> by_label;
    for (const auto &[rep, members] : cell)
      for (const auto &l : members)
        by_label[l] = members;
    cell = std::move(by_label);
  }

  const std::vector<Formula> &formulas(const Label &l) const {
    static const std::vector<Formula> none;
    auto it = at.find(l);
    return it == at.end() ? none : it->second;
  }
  bool has(const Label &l, const Formula &f) const { return s.has_formula(l, f); }
  std::vector<Label> cell_in_order(const Label &l) const {
    std::vector<Label> out(cell.at(l).begin(), cell.at(l).end());
    std::sort(out.begin(), out.end(), label_less);
    return out;
  }
  bool some_ideal_has(const Formula &f) const {
    for (const auto &u : ideals)
      if (has(u, f))
        return true;
    return false;
  }
  bool somewhere(const Formula &f) const {
    for (const auto &u : labels)
      if (has(u, f))
        return true;
    return false;
  }
  bool in_cell(const Label &w, const Formula &f) const {
    for (const auto &u : cell.at(w))
      if (has(u, f))
        return true;
    return false;
  }
};

bool label_saturated(const View &v, const Label &w) {
  for (const auto &f : v.formulas(w)) {
    if (f.kind() == Kind::Top || v.has(w, negate(f)))
      return false;
    if (f.kind() == Kind::Or && !(v.has(w, f.left()) && v.has(w, f.right())))
      return false;
    if (f.kind() == Kind::And && !(v.has(w, f.left()) || v.has(w, f.right())))
      return false;
  }
  return true;
}

} // namespace

StabilityReport stability_report(int k, const Sequent &s) {
  auto trees = forest(s);
  View v(s);
  StabilityReport r;
  r.d2_satisfied = true;
  for (const auto &w : v.labels) {
    LabelFlags f;
    f.saturated = label_saturated(v, w);
    f.box_realized = f.choice_realized = f.obl_realized = true;
    f.dia_propagated = f.chdia_propagated = f.perm_propagated = true;
    for (const auto &g : v.formulas(w)) {
      switch (g.kind()) {
      case Kind::SBox:
        f.box_realized = f.box_realized && v.somewhere(g.body());
        break;
      case Kind::CBox:
        f.choice_realized = f.choice_realized && v.in_cell(w, g.body());
        break;
      case Kind::OBox:
        f.obl_realized = f.obl_realized && v.some_ideal_has(g.body());
        break;
      case Kind::SDia:
        for (const auto &u : v.labels)
          f.dia_propagated = f.dia_propagated && v.has(u, g.body());
        break;
      case Kind::CDia:
        for (const auto &u : v.cell.at(w))
          f.chdia_propagated = f.chdia_propagated && v.has(u, g.body());
        break;
      case Kind::ODia:
        for (const auto &i : v.ideals)
          for (const auto &u : v.cell.at(i))
            f.perm_propagated = f.perm_propagated && v.has(u, g.body());
        r.d2_satisfied = r.d2_satisfied && v.some_ideal_has(g.body());
        break;
      default:
        break;
      }
    }
    r.labels[w] = f;
  }
  r.ck_satisfied = k <= 0 || trees.size() <= static_cast<std::size_t>(k);
  r.stable = r.d2_satisfied && r.ck_satisfied;
  for (const auto &[l, f] : r.labels)
    r.stable = r.stable && f.all();
  return r;
}

std::vector<Sequent> apc_branches(int k, const Sequent &s) {
  auto trees = forest(s);
  if (k <= 0 || trees.size() <= static_cast<std::size_t>(k))
    throw StitError(StitError::Kind::NotApplicable,
                    std::to_string(trees.size()) + " choice-trees with k = " + std::to_string(k));
  std::vector<Label> roots;
  for (const auto &t : trees)
    roots.push_back(t.root);
  std::vector<Sequent> out;
  for (int m = 0; m < k; ++m)
    for (int j = m + 1; j <= k; ++j) {
      Sequent b = s;
      b.add_atom(RelAtom::crel(roots[m], roots[j]));
      out.push_back(std::move(b));
    }
  return out;
}

DsModel extract_model(int k, const Sequent &s, const Label &root) {
  if (!stability_report(k, s).stable)
    throw StitError(StitError::Kind::NotStable, "sequent is not stable: " + to_string(s));
  View v(s);
  DsModel m;
  m.k = k;
  for (const auto &l : v.labels) {
    m.worlds.insert(l);
    for (const auto &u : v.cell.at(l))
      m.choice.insert({l, u});
  }
  if (!m.worlds.count(root)) {
    m.worlds.insert(root);
    m.choice.insert({root, root});
  }
  if (v.ideals.empty()) {
    for (const auto &[a, b] : m.choice)
      if (a == root)
        m.ideal.insert(b);
  } else {
    for (const auto &i : v.ideals)
      m.ideal.insert(v.cell.at(i).begin(), v.cell.at(i).end());
  }
  // Literals fix the value only where they occur. An atom that occurs
  // positively somewhere is true everywhere else; any other atom is true
  // exactly where its negation occurs.
  std::map<std::string, std::set<Label>> pos, neg;
  for (const auto &lf : s.formulas()) {
    for (const auto &a : atoms(lf.formula))
      m.valuation[a];
    if (lf.formula.kind() == Kind::Lit)
      (lf.formula.positive() ? pos : neg)[lf.formula.atom()].insert(lf.label);
  }
  for (auto &[a, set] : m.valuation) {
    if (pos.count(a)) {
      for (const auto &w : m.worlds)
        if (!pos[a].count(w))
          set.insert(w);
    } else {
      set = neg[a];
    }
  }
  return m;
}

std::string to_string(DsResult::Verdict v) {
  return v == DsResult::Verdict::Proved ? "Proved" : "Refuted";
}

namespace {

// Upper bound on labels in one sequent; reaching it means the blocking
// conditions are broken.
constexpr std::size_t kLabelGuard = 4096;

struct Outcome {
  bool proved = false;
  Proof proof;
  std::optional<Sequent> stable;
};

class Search {
public:
  Search(int k, bool tracing, DsResult &r) : k_(k), tracing_(tracing), r_(r) {}

  Outcome run(const Sequent &s, int next, int depth) {
    ++r_.steps;
    View v(s);
    r_.max_labels = std::max(r_.max_labels, v.labels.size());
    if (v.labels.size() > kLabelGuard)
      throw std::logic_error("prove_ds: label guard exceeded");
    std::vector<ChoiceTree> trees;
    try {
      trees = choice_trees(s);
    } catch (const SequentError &) {
      r_.forest_ok = false;
      throw std::logic_error("prove_ds: left the forest fragment at " + to_string(s));
    }

    for (const auto &w : v.labels)
      for (const auto &f : v.formulas(w)) {
        if (f.kind() == Kind::Top) {
          log(depth, "TopR " + w);
          return closed(Rule::TopR, s, {w, f});
        }
        if (v.has(w, negate(f))) {
          log(depth, "Id " + to_string(LabelledFormula{w, f}));
          return closed(Rule::Id, s, {w, f});
        }
      }

    // Line order of the algorithm; within a line, labels then formulas.
    for (const auto &w : v.labels)
      for (const auto &f : v.formulas(w))
        if (f.kind() == Kind::Or && !(v.has(w, f.left()) && v.has(w, f.right())))
          return unary(Rule::OrR, s, on({w, f}), {}, {{w, f.left()}, {w, f.right()}}, next, depth);

    for (const auto &w : v.labels)
      for (const auto &f : v.formulas(w))
        if (f.kind() == Kind::And && !v.has(w, f.left()) && !v.has(w, f.right())) {
          log(depth, "AndR " + to_string(LabelledFormula{w, f}));
          Outcome out;
          out.proof = Proof{Rule::AndR, s, on({w, f}), {}};
          for (const auto &side : {f.left(), f.right()}) {
            Sequent prem = s;
            prem.add_formula(w, side);
            check_roots(trees, prem, false);
            Outcome o = run(prem, next, depth + 1);
            if (!o.proved)
              return o;
            out.proof.premises.push_back(std::move(o.proof));
          }
          out.proved = true;
          return out;
        }

    for (const auto &w : v.labels)
      for (const auto &f : v.formulas(w))
        if (f.kind() == Kind::SBox && !v.somewhere(f.body())) {
          Label u = fresh(next);
          Witness wt = on({w, f});
          wt.fresh = u;
          return unary(Rule::BoxR, s, wt, {}, {{u, f.body()}}, next + 1, depth);
        }

    for (const auto &w : v.labels)
      for (const auto &f : v.formulas(w))
        if (f.kind() == Kind::CBox && !v.in_cell(w, f.body())) {
          Label u = fresh(next);
          Witness wt = on({w, f});
          wt.fresh = u;
          return unary(Rule::ChBoxR, s, wt, {RelAtom::crel(w, u)}, {{u, f.body()}}, next + 1,
                       depth);
        }

    for (const auto &w : v.labels)
      for (const auto &f : v.formulas(w))
        if (f.kind() == Kind::OBox && !v.some_ideal_has(f.body())) {
          Label u = fresh(next);
          Witness wt = on({w, f});
          wt.fresh = u;
          return unary(Rule::OblR, s, wt, {RelAtom::ideal(u)}, {{u, f.body()}}, next + 1, depth);
        }

    for (const auto &w : v.labels)
      for (const auto &f : v.formulas(w))
        if (f.kind() == Kind::SDia)
          for (const auto &u : v.labels)
            if (!v.has(u, f.body())) {
              Witness wt = on({w, f});
              wt.target = u;
              return unary(Rule::DiaP, s, wt, {}, {{u, f.body()}}, next, depth);
            }

    for (const auto &w : v.labels)
      for (const auto &f : v.formulas(w))
        if (f.kind() == Kind::CDia)
          for (const auto &u : v.cell_in_order(w))
            if (!v.has(u, f.body())) {
              Witness wt = on({w, f});
              wt.target = u;
              return unary(Rule::ChDiaP, s, wt, {}, {{u, f.body()}}, next, depth);
            }

    for (const auto &w : v.labels)
      for (const auto &f : v.formulas(w))
        if (f.kind() == Kind::ODia)
          for (const auto &i : v.ideals)
            for (const auto &u : v.cell_in_order(i))
              if (!v.has(u, f.body())) {
                Witness wt = on({w, f});
                wt.via = i;
                wt.target = u;
                return unary(Rule::PermP1, s, wt, {}, {{u, f.body()}}, next, depth);
              }

    for (const auto &w : v.labels)
      for (const auto &f : v.formulas(w))
        if (f.kind() == Kind::ODia && !v.some_ideal_has(f.body())) {
          Label u = fresh(next);
          Witness wt = on({w, f});
          wt.fresh = u;
          return unary(Rule::PermP2, s, wt, {RelAtom::ideal(u)}, {{u, f.body()}}, next + 1,
                       depth);
        }

    if (k_ > 0 && trees.size() > static_cast<std::size_t>(k_)) {
      Witness wt;
      for (int i = 0; i <= k_; ++i)
        wt.roots.push_back(trees[i].root);
      std::string names;
      for (const auto &r : wt.roots)
        names += (names.empty() ? "" : ",") + r;
      log(depth, "APC " + names);
      Outcome out;
      out.proof = Proof{Rule::APC, s, wt, {}};
      for (const auto &prem : apc_branches(k_, s)) {
        check_roots(trees, prem, true);
        if (forest(prem).size() + 1 != trees.size())
          throw std::logic_error("prove_ds: APC did not merge two choice-trees");
        Outcome o = run(prem, next, depth + 1);
        if (!o.proved)
          return o;
        out.proof.premises.push_back(std::move(o.proof));
      }
      out.proved = true;
      return out;
    }

    log(depth, "stable");
    Outcome out;
    out.stable = s;
    return out;
  }

private:
  static Label fresh(int next) { return "w" + std::to_string(next); }

  void log(int depth, const std::string &line) {
    if (tracing_)
      r_.trace.push_back(std::string(static_cast<std::size_t>(depth) * 2, ' ') + line);
  }

  Outcome closed(Rule r, const Sequent &s, const LabelledFormula &lf) {
    Outcome out;
    out.proved = true;
    out.proof = Proof{r, s, on(lf), {}};
    return out;
  }

  // Roots of the conclusion stay roots, except the ones APC attaches.
  void check_roots(const std::vector<ChoiceTree> &before, const Sequent &prem, bool apc) {
    std::vector<ChoiceTree> after;
    try {
      after = choice_trees(prem);
    } catch (const SequentError &) {
      r_.forest_ok = false;
      return;
    }
    std::set<Label> roots;
    for (const auto &t : after)
      roots.insert(t.root);
    std::size_t lost = 0;
    for (const auto &t : before)
      if (!roots.count(t.root))
        ++lost;
    if (lost > (apc ? 1u : 0u))
      r_.forest_ok = false;
  }

  Outcome unary(Rule r, const Sequent &s, const Witness &wt, const std::vector<RelAtom> &atoms,
                const std::vector<LabelledFormula> &fs, int next, int depth) {
    std::string line = rule_name(r) + " " + to_string(*wt.principal);
    for (const auto &lf : fs)
      line += " ; " + to_string(lf);
    log(depth, line);
    Sequent prem = extend(s, atoms, fs);
    check_roots(choice_trees(s), prem, false);
    Outcome o = run(prem, next, depth + 1);
    if (!o.proved)
      return o;
    Proof p{r, s, wt, {}};
    p.premises.push_back(std::move(o.proof));
    o.proof = std::move(p);
    return o;
  }

  int k_;
  bool tracing_;
  DsResult &r_;
};

} // namespace

DsResult prove_ds(int k, const Formula &f, bool trace) {
  DsResult r;
  Sequent start({}, {{r.root, f}});
  Search search(k, trace, r);
  Outcome o = search.run(start, 1, 0);
  if (o.proved) {
    r.verdict = DsResult::Verdict::Proved;
    r.proof = std::move(o.proof);
  } else {
    r.verdict = DsResult::Verdict::Refuted;
    r.model = extract_model(k, *o.stable, r.root);
    r.stable = std::move(o.stable);
  }
  return r;
}

namespace {

using K = ProofError::Kind;

struct DsChecker {
  int k;
  std::vector<std::size_t> path;

  ProofError error(K kind, std::string msg) const { return {kind, path, std::move(msg)}; }

  std::optional<ProofError> node(const Proof &p) {
    const Sequent &c = p.conclusion;
    for (const auto &lf : c.formulas()) {
      Family fam;
      try {
        fam = family(lf.formula);
      } catch (const std::invalid_argument &e) {
        return error(K::WrongShape, e.what());
      }
      if (fam == Family::Grammar)
        return error(K::WrongShape, "grammar formula in a STIT proof");
    }
    for (const auto &a : c.atoms())
      if (a.kind == RelAtom::Kind::G)
        return error(K::WrongShape, "grammar relational atom in a STIT proof");

    const auto &w = p.witness;
    bool initial = p.rule == Rule::Id || p.rule == Rule::TopR;
    if (!initial && p.premises.empty())
      return error(K::LeafNotInitial, rule_name(p.rule) + " leaf without premises");
    auto premises = [&](std::size_t n) -> std::optional<ProofError> {
      if (p.premises.size() != n)
        return error(K::WrongShape, rule_name(p.rule) + " needs " + std::to_string(n) +
                                        " premise(s), got " +
                                        std::to_string(p.premises.size()));
      return std::nullopt;
    };

    if (p.rule == Rule::APC) {
      if (k <= 0)
        return error(K::WrongShape, "APC is not a rule when k = 0");
      if (w.roots.size() != static_cast<std::size_t>(k) + 1)
        return error(K::WrongShape, "APC needs k+1 labels");
      std::set<Label> distinct(w.roots.begin(), w.roots.end());
      if (distinct.size() != w.roots.size())
        return error(K::SideConditionFails, "APC labels are not distinct");
      for (const auto &l : w.roots)
        if (!c.has_label(l))
          return error(K::SideConditionFails, "APC label " + l + " not in the conclusion");
      if (auto e = premises(static_cast<std::size_t>(k * (k + 1) / 2)))
        return e;
      std::size_t i = 0;
      for (int m = 0; m < k; ++m)
        for (int j = m + 1; j <= k; ++j, ++i)
          if (!premise_matches(c, p.premises[i].conclusion, std::nullopt,
                               {RelAtom::crel(w.roots[m], w.roots[j])}, {}))
            return error(K::WrongShape, "APC premise " + std::to_string(i) + " does not match");
      return std::nullopt;
    }

    if (!w.principal)
      return error(K::WrongShape, "missing principal formula");
    const LabelledFormula &pr = *w.principal;
    if (!c.has_formula(pr.label, pr.formula))
      return error(K::WrongShape, "principal " + to_string(pr) + " not in conclusion");
    const Formula &f = pr.formula;
    auto shape = [&](const Sequent &prem, std::vector<RelAtom> atoms,
                     std::vector<LabelledFormula> fs) -> std::optional<ProofError> {
      if (!premise_matches(c, prem, pr, atoms, fs))
        return error(K::WrongShape, rule_name(p.rule) + " premise does not match: " +
                                        to_string(prem));
      return std::nullopt;
    };
    auto need = [&](Kind kind, const char *what) -> std::optional<ProofError> {
      if (f.kind() != kind)
        return error(K::WrongShape, rule_name(p.rule) + " needs " + what);
      return std::nullopt;
    };
    auto eigen = [&]() -> std::optional<ProofError> {
      if (!w.fresh)
        return error(K::WrongShape, rule_name(p.rule) + " without eigenvariable");
      if (c.has_label(*w.fresh))
        return error(K::EigenvariableClash, "label " + *w.fresh + " occurs in the conclusion");
      return std::nullopt;
    };

    switch (p.rule) {
    case Rule::Id:
      if (auto e = premises(0))
        return e;
      if (!c.has_formula(pr.label, negate(f)))
        return error(K::WrongShape, "Id: dual of " + to_string(pr) + " missing");
      return std::nullopt;
    case Rule::TopR:
      if (auto e = premises(0))
        return e;
      return need(Kind::Top, "top");
    case Rule::OrR:
      if (auto e = premises(1))
        return e;
      if (auto e = need(Kind::Or, "a disjunction"))
        return e;
      return shape(p.premises[0].conclusion, {}, {{pr.label, f.left()}, {pr.label, f.right()}});
    case Rule::AndR:
      if (auto e = premises(2))
        return e;
      if (auto e = need(Kind::And, "a conjunction"))
        return e;
      if (auto e = shape(p.premises[0].conclusion, {}, {{pr.label, f.left()}}))
        return e;
      return shape(p.premises[1].conclusion, {}, {{pr.label, f.right()}});
    case Rule::BoxR:
      if (auto e = premises(1))
        return e;
      if (auto e = need(Kind::SBox, "[*]"))
        return e;
      if (auto e = eigen())
        return e;
      return shape(p.premises[0].conclusion, {}, {{*w.fresh, f.body()}});
    case Rule::ChBoxR:
      if (auto e = premises(1))
        return e;
      if (auto e = need(Kind::CBox, "[0]"))
        return e;
      if (auto e = eigen())
        return e;
      return shape(p.premises[0].conclusion, {RelAtom::crel(pr.label, *w.fresh)},
                   {{*w.fresh, f.body()}});
    case Rule::OblR:
      if (auto e = premises(1))
        return e;
      if (auto e = need(Kind::OBox, "[o]"))
        return e;
      if (auto e = eigen())
        return e;
      return shape(p.premises[0].conclusion, {RelAtom::ideal(*w.fresh)}, {{*w.fresh, f.body()}});
    case Rule::DiaP:
      if (auto e = premises(1))
        return e;
      if (auto e = need(Kind::SDia, "<*>"))
        return e;
      if (!w.target)
        return error(K::WrongShape, "DiaP without target");
      return shape(p.premises[0].conclusion, {}, {{*w.target, f.body()}});
    case Rule::ChDiaP:
      if (auto e = premises(1))
        return e;
      if (auto e = need(Kind::CDia, "<0>"))
        return e;
      if (!w.target)
        return error(K::WrongShape, "ChDiaP without target");
      if (!undirected_path(c.atoms(), pr.label, *w.target))
        return error(K::SideConditionFails,
                     "no undirected 0-path from " + pr.label + " to " + *w.target);
      return shape(p.premises[0].conclusion, {}, {{*w.target, f.body()}});
    case Rule::PermP1:
      if (auto e = premises(1))
        return e;
      if (auto e = need(Kind::ODia, "<o>"))
        return e;
      if (!w.target || !w.via)
        return error(K::WrongShape, "PermP1 without ideal label and target");
      if (!c.has_atom(RelAtom::ideal(*w.via)))
        return error(K::SideConditionFails, "I " + *w.via + " missing");
      if (!undirected_path(c.atoms(), *w.via, *w.target))
        return error(K::SideConditionFails,
                     "no undirected 0-path from " + *w.via + " to " + *w.target);
      return shape(p.premises[0].conclusion, {}, {{*w.target, f.body()}});
    case Rule::PermP2:
      if (auto e = premises(1))
        return e;
      if (auto e = need(Kind::ODia, "<o>"))
        return e;
      if (auto e = eigen())
        return e;
      return shape(p.premises[0].conclusion, {RelAtom::ideal(*w.fresh)}, {{*w.fresh, f.body()}});
    default:
      return error(K::WrongShape, rule_name(p.rule) + " is not a DS rule");
    }
  }

  std::optional<ProofError> walk(const Proof &p) {
    if (auto e = node(p))
      return e;
    for (std::size_t i = 0; i < p.premises.size(); ++i) {
      path.push_back(i);
      if (auto e = walk(p.premises[i]))
        return e;
      path.pop_back();
    }
    return std::nullopt;
  }
};

} // namespace

std::optional<ProofError> check_ds_proof(int k, const Proof &p) {
  DsChecker c{k, {}};
  return c.walk(p);
}

} // namespace refine
