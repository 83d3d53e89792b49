#include "refine/calculus.hpp"

#include <algorithm>
#include <functional>

namespace refine {

namespace {

using K = ProofError::Kind;

struct Checker {
  const CfcstSystem &sys;
  std::vector<std::size_t> path;

  ProofError error(K k, std::string msg) const { return {k, path, std::move(msg)}; }

  std::optional<ProofError> node(const Proof &p) {
    const Sequent &c = p.conclusion;
    for (const auto &lf : c.formulas()) {
      Family fam;
      try {
        fam = family(lf.formula);
      } catch (const std::invalid_argument &e) {
        return error(K::WrongShape, e.what());
      }
      if (fam == Family::Stit)
        return error(K::WrongShape, "STIT formula in a grammar-logic proof");
    }
    for (const auto &a : c.atoms())
      if (a.kind != RelAtom::Kind::G)
        return error(K::WrongShape, "STIT relational atom in a grammar-logic proof");

    const auto &w = p.witness;
    bool initial = p.rule == Rule::Id || p.rule == Rule::TopR;
    if (!initial && p.premises.empty())
      return error(K::LeafNotInitial, rule_name(p.rule) + " leaf without premises");
    if (!w.principal)
      return error(K::WrongShape, "missing principal formula");
    const LabelledFormula &pr = *w.principal;
    if (!c.has_formula(pr.label, pr.formula))
      return error(K::WrongShape, "principal " + to_string(pr) + " not in conclusion");
    const Formula &f = pr.formula;
    auto premises = [&](std::size_t n) -> std::optional<ProofError> {
      if (p.premises.size() != n)
        return error(K::WrongShape, rule_name(p.rule) + " needs " + std::to_string(n) +
                                        " premise(s), got " +
                                        std::to_string(p.premises.size()));
      return std::nullopt;
    };
    auto shape = [&](const Sequent &prem, std::vector<RelAtom> atoms,
                     std::vector<LabelledFormula> fs) -> std::optional<ProofError> {
      if (!premise_matches(c, prem, pr, atoms, fs))
        return error(K::WrongShape, rule_name(p.rule) + " premise does not match: " +
                                        to_string(prem));
      return std::nullopt;
    };

    switch (p.rule) {
    case Rule::Id:
      if (auto e = premises(0))
        return e;
      if (f.kind() != Kind::Lit)
        return error(K::WrongShape, "Id needs a literal");
      if (!c.has_formula(pr.label, negate(f)))
        return error(K::WrongShape, "Id: dual of " + to_string(pr) + " missing");
      return std::nullopt;
    case Rule::TopR:
      if (auto e = premises(0))
        return e;
      if (f.kind() != Kind::Top)
        return error(K::WrongShape, "TopR needs top");
      return std::nullopt;
    case Rule::OrR:
      if (auto e = premises(1))
        return e;
      if (f.kind() != Kind::Or)
        return error(K::WrongShape, "OrR needs a disjunction");
      return shape(p.premises[0].conclusion, {},
                   {{pr.label, f.left()}, {pr.label, f.right()}});
    case Rule::AndR:
      if (auto e = premises(2))
        return e;
      if (f.kind() != Kind::And)
        return error(K::WrongShape, "AndR needs a conjunction");
      if (auto e = shape(p.premises[0].conclusion, {}, {{pr.label, f.left()}}))
        return e;
      return shape(p.premises[1].conclusion, {}, {{pr.label, f.right()}});
    case Rule::BoxR: {
      if (auto e = premises(1))
        return e;
      if (f.kind() != Kind::GBox)
        return error(K::WrongShape, "BoxR needs [x]");
      if (!w.fresh)
        return error(K::WrongShape, "BoxR without eigenvariable");
      const Label &u = *w.fresh;
      if (u == pr.label || c.has_label(u))
        return error(K::EigenvariableClash, "label " + u + " occurs in the conclusion");
      return shape(p.premises[0].conclusion, {RelAtom::grel(f.character(), pr.label, u)},
                   {{u, f.body()}});
    }
    case Rule::PrDia: {
      if (auto e = premises(1))
        return e;
      if (f.kind() != Kind::GDia)
        return error(K::WrongShape, "PrDia needs <x>");
      if (!w.target || !w.path)
        return error(K::WrongShape, "PrDia without target and path");
      const Label &u = *w.target;
      PropGraph g = propagation_graph(c);
      if (!witness_valid(g, sys, f.character(), pr.label, u, *w.path)) {
        auto again = reachable(g, sys, f.character(), pr.label, u);
        return error(K::SideConditionFails,
                     "path " + to_string(*w.path) + " is not a witness; recomputed: " +
                         (again ? to_string(*again) : std::string("none")));
      }
      // the premise adds no relational atom, so both graphs coincide
      return shape(p.premises[0].conclusion, {}, {{u, f.body()}});
    }
    default:
      return error(K::WrongShape, rule_name(p.rule) + " is not a Km(S)L rule");
    }
  }

  std::optional<ProofError> run(const Proof &p) {
    if (auto e = node(p))
      return e;
    for (std::size_t i = 0; i < p.premises.size(); ++i) {
      path.push_back(i);
      if (auto e = run(p.premises[i]))
        return e;
      path.pop_back();
    }
    return std::nullopt;
  }
};

} // namespace

std::optional<ProofError> check_proof(const CfcstSystem &s, const Proof &p) {
  Checker c{s, {}};
  return c.run(p);
}

std::string to_string(GrammarResult::Verdict v) {
  switch (v) {
  case GrammarResult::Verdict::Valid: return "Valid";
  case GrammarResult::Verdict::Refuted: return "Refuted";
  case GrammarResult::Verdict::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

struct Outcome {
  GrammarResult::Verdict verdict;
  std::optional<Proof> proof;
  std::optional<SigmaModel> model;
  std::string reason;
};

class GrammarProver {
public:
  GrammarProver(const CfcstSystem &s, const Sequent &start, const Budget &b)
      : sys_(s), start_(start), budget_(b) {
    for (const auto &l : start.labels())
      note_label(l);
  }

  Outcome search(Sequent s) {
    struct Step {
      Rule rule;
      Sequent conclusion;
      Witness witness;
    };
    std::vector<Step> chain;
    std::optional<Proof> top;
    while (!top) {
      if (++steps_ > budget_.max_steps)
        return {GrammarResult::Verdict::Unknown, {}, {}, "step budget exhausted"};

      if (auto id = find_initial(s)) {
        top = Proof{id->first, s, on(id->second), {}};
        break;
      }

      if (auto pr = first_formula(s, [&](const LabelledFormula &lf) {
            const Formula &f = lf.formula;
            return f.kind() == Kind::Or &&
                   !(s.has_formula(lf.label, f.left()) && s.has_formula(lf.label, f.right()));
          })) {
        Sequent next = extend(s, {}, {{pr->label, pr->formula.left()},
                                      {pr->label, pr->formula.right()}});
        chain.push_back({Rule::OrR, std::move(s), on(*pr)});
        s = std::move(next);
        continue;
      }

      if (auto pr = first_formula(s, [&](const LabelledFormula &lf) {
            const Formula &f = lf.formula;
            return f.kind() == Kind::And && !s.has_formula(lf.label, f.left()) &&
                   !s.has_formula(lf.label, f.right());
          })) {
        Sequent a = extend(s, {}, {{pr->label, pr->formula.left()}});
        Sequent b = extend(s, {}, {{pr->label, pr->formula.right()}});
        Outcome left = search(std::move(a));
        if (left.verdict != GrammarResult::Verdict::Valid)
          return left;
        Outcome right = search(std::move(b));
        if (right.verdict != GrammarResult::Verdict::Valid)
          return right;
        Proof node{Rule::AndR, s, on(*pr), {}};
        node.premises.push_back(std::move(*left.proof));
        node.premises.push_back(std::move(*right.proof));
        top = std::move(node);
        break;
      }

      if (auto step = find_propagation(s)) {
        auto &[pr, u, path] = *step;
        Sequent next = extend(s, {}, {{u, pr.formula.body()}});
        Witness w = on(pr);
        w.target = u;
        w.path = path;
        chain.push_back({Rule::PrDia, std::move(s), std::move(w)});
        s = std::move(next);
        continue;
      }

      if (auto pr = first_formula(s, [&](const LabelledFormula &lf) {
            const Formula &f = lf.formula;
            if (f.kind() != Kind::GBox)
              return false;
            for (const auto &a : s.atoms())
              if (a.kind == RelAtom::Kind::G && a.ch == f.character() &&
                  a.from == lf.label && s.has_formula(a.to, f.body()))
                return false;
            return true;
          })) {
        if (s.labels().size() >= budget_.max_labels)
          return {GrammarResult::Verdict::Unknown, {}, {}, "label budget exhausted"};
        Label u = fresh();
        Sequent next = extend(s, {RelAtom::grel(pr->formula.character(), pr->label, u)},
                              {{u, pr->formula.body()}});
        Witness w = on(*pr);
        w.fresh = u;
        chain.push_back({Rule::BoxR, std::move(s), std::move(w)});
        s = std::move(next);
        continue;
      }

      return refute(s);
    }
    Proof p = std::move(*top);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      Proof node{it->rule, std::move(it->conclusion), std::move(it->witness), {}};
      node.premises.push_back(std::move(p));
      p = std::move(node);
    }
    return {GrammarResult::Verdict::Valid, std::move(p), {}, {}};
  }

  std::size_t steps() const { return steps_; }

private:
  void note_label(const Label &l) {
    if (l.size() > 1 && l[0] == 'w') {
      bool digits = std::all_of(l.begin() + 1, l.end(), ::isdigit);
      if (digits && l.size() < 10)
        next_ = std::max(next_, std::stoul(l.substr(1)) + 1);
    }
  }

  Label fresh() { return "w" + std::to_string(next_++); }

  template <class P>
  std::optional<LabelledFormula> first_formula(const Sequent &s, P &&pred) const {
    for (const auto &lf : s.formulas())
      if (pred(lf))
        return lf;
    return std::nullopt;
  }

  static std::optional<std::pair<Rule, LabelledFormula>> find_initial(const Sequent &s) {
    for (const auto &lf : s.formulas()) {
      if (lf.formula.kind() == Kind::Top)
        return std::make_pair(Rule::TopR, lf);
      if (lf.formula.kind() == Kind::Lit && lf.formula.positive() &&
          s.has_formula(lf.label, negate(lf.formula)))
        return std::make_pair(Rule::Id, lf);
    }
    return std::nullopt;
  }

  std::optional<std::tuple<LabelledFormula, Label, PathWitness>>
  find_propagation(const Sequent &s) {
    std::shared_ptr<const CflSolver> solver;
    for (const auto &lf : s.formulas()) {
      if (lf.formula.kind() != Kind::GDia)
        continue;
      if (!solver)
        solver = cache_.get(propagation_graph(s), sys_);
      for (const auto &u : s.labels_in_order()) {
        if (s.has_formula(u, lf.formula.body()))
          continue;
        if (auto p = solver->query(lf.formula.character(), lf.label, u))
          return std::make_tuple(lf, u, *p);
      }
    }
    return std::nullopt;
  }

  Outcome refute(const Sequent &s) {
    SigmaModel m;
    m.worlds = s.labels();
    for (const auto &a : s.atoms())
      m.relations[a.ch].insert({a.from, a.to});
    for (const auto &lf : s.formulas())
      if (lf.formula.kind() == Kind::Lit && !lf.formula.positive())
        m.valuation[lf.formula.atom()].insert(lf.label);
    for (const auto &lf : start_.formulas())
      for (const auto &a : atoms(lf.formula))
        m.valuation[a];
    m = saturate(sys_, m);
    for (const auto &lf : start_.formulas())
      if (check_sigma(m, lf.label, lf.formula))
        return {GrammarResult::Verdict::Unknown, {}, {},
                "stable sequent does not falsify " + to_string(lf) + " after saturation"};
    return {GrammarResult::Verdict::Refuted, {}, std::move(m), {}};
  }

  const CfcstSystem &sys_;
  Sequent start_;
  Budget budget_;
  ReachabilityCache cache_;
  std::size_t steps_ = 0;
  std::size_t next_ = 0;
};

} // namespace

GrammarResult prove_sequent(const CfcstSystem &s, const Sequent &start, const Label &root,
                            const Budget &b) {
  GrammarProver prover(s, start, b);
  Outcome o = prover.search(start);
  GrammarResult r;
  r.verdict = o.verdict;
  r.proof = std::move(o.proof);
  r.model = std::move(o.model);
  r.root = root;
  r.reason = std::move(o.reason);
  r.steps = prover.steps();
  return r;
}

GrammarResult prove_bounded(const CfcstSystem &s, const Formula &f, const Budget &b) {
  Sequent start;
  start.add_formula("w0", f);
  return prove_sequent(s, start, "w0", b);
}

Proof flip_atom(const Proof &p, const RelAtom &atom) {
  if (atom.kind != RelAtom::Kind::G)
    throw FlipError("only grammar relational atoms can be flipped");
  if (!p.conclusion.has_atom(atom))
    throw FlipError("atom " + to_string(atom) + " not in the end sequent");
  RelAtom flipped = RelAtom::grel(atom.ch.converse(), atom.to, atom.from);
  std::function<Proof(const Proof &)> go = [&](const Proof &q) {
    Proof out;
    out.rule = q.rule;
    out.witness = q.witness;
    std::vector<RelAtom> atoms;
    for (const auto &a : q.conclusion.atoms())
      atoms.push_back(a == atom ? flipped : a);
    out.conclusion = Sequent(std::move(atoms), q.conclusion.formulas());
    for (const auto &r : q.premises)
      out.premises.push_back(go(r));
    return out;
  };
  return go(p);
}

} // namespace refine
