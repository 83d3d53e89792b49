#include "refine/interpolation.hpp"

#include <algorithm>
#include <functional>

namespace refine {

std::string to_string(const FlatSequent &s) {
  std::string out = "(|-";
  bool first = true;
  for (const auto &lf : s) {
    out += first ? " " : ", ";
    out += to_string(lf);
    first = false;
  }
  return out + ")";
}

std::string to_string(const Interpolant &i) {
  std::string out = "{";
  bool first = true;
  for (const auto &s : i) {
    if (!first)
      out += ", ";
    out += to_string(s);
    first = false;
  }
  return out + "}";
}

namespace {

LabelledFormula neg(const LabelledFormula &lf) { return {lf.label, negate(lf.formula)}; }

bool contains_all(const std::set<LabelledFormula> &big, const FlatSequent &small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Some formula of e has its negation in x.
bool hits(const std::set<LabelledFormula> &x, const FlatSequent &e) {
  for (const auto &lf : e)
    if (x.count(neg(lf)))
      return true;
  return false;
}

std::set<LabelledFormula> as_set(const std::vector<LabelledFormula> &v) {
  return {v.begin(), v.end()};
}

} // namespace

Interpolant orthogonal(const Interpolant &i) {
  Interpolant out{FlatSequent{}};
  for (const auto &gamma : i) {
    Interpolant next;
    for (const auto &partial : out)
      for (const auto &lf : gamma) {
        FlatSequent s = partial;
        s.insert(neg(lf));
        next.insert(std::move(s));
      }
    out = std::move(next);
  }
  return out;
}

Interpolant minimal(const Interpolant &i) {
  std::vector<FlatSequent> v(i.begin(), i.end());
  std::stable_sort(v.begin(), v.end(),
                   [](const auto &a, const auto &b) { return a.size() < b.size(); });
  Interpolant out;
  std::vector<const FlatSequent *> kept;
  for (const auto &s : v) {
    bool dominated = false;
    for (const auto *k : kept)
      if (contains_all(s, *k)) {
        dominated = true;
        break;
      }
    if (!dominated) {
      kept.push_back(&s);
      out.insert(s);
    }
  }
  return out;
}

Interpolant minimal_orthogonal(const Interpolant &i) {
  // transversals of the negated sequents, minimised after every step
  Interpolant out{FlatSequent{}};
  for (const auto &gamma : minimal(i)) {
    FlatSequent negated;
    for (const auto &lf : gamma)
      negated.insert(neg(lf));
    Interpolant next;
    for (const auto &t : out) {
      bool already = false;
      for (const auto &lf : negated)
        if (t.count(lf)) {
          already = true;
          break;
        }
      if (already) {
        next.insert(t);
        continue;
      }
      for (const auto &lf : negated) {
        FlatSequent s = t;
        s.insert(lf);
        next.insert(std::move(s));
      }
    }
    out = minimal(next);
  }
  return out;
}

Interpolant boxed(const Interpolant &i, const Character &x, const Label &w, const Label &u) {
  if (u == w)
    throw InterpolationError(InterpolationError::Kind::PreconditionViolated,
                             "boxed: the eigenvariable " + u + " equals " + w);
  Interpolant out;
  for (const auto &s : i) {
    FlatSequent t;
    std::vector<Formula> at_u;
    for (const auto &lf : s) {
      if (lf.label == u)
        at_u.push_back(lf.formula);
      else
        t.insert(lf);
    }
    t.insert({w, gbox(x, big_or(at_u))});
    out.insert(std::move(t));
  }
  return out;
}

Formula interpolant_formula(const Interpolant &i, const Label &w) {
  std::vector<Formula> conjuncts;
  for (const auto &s : i) {
    std::vector<Formula> disjuncts;
    for (const auto &lf : s) {
      if (lf.label != w)
        throw InterpolationError(InterpolationError::Kind::MixedLabels,
                                 "formula " + to_string(lf) + " is not labelled " + w);
      disjuncts.push_back(lf.formula);
    }
    conjuncts.push_back(big_or(disjuncts));
  }
  return big_and(conjuncts);
}

std::size_t interp_size(const InterpNode &n) {
  std::size_t k = 1;
  for (const auto &p : n.premises)
    k += interp_size(p);
  return k;
}

namespace {

using Multiset = std::vector<LabelledFormula>;

Multiset sorted(Multiset m) {
  std::sort(m.begin(), m.end());
  return m;
}

Multiset plus(const Multiset &a, const Multiset &b) {
  Multiset out = a;
  out.insert(out.end(), b.begin(), b.end());
  return sorted(std::move(out));
}

bool has(const Multiset &m, const LabelledFormula &lf) {
  return std::binary_search(m.begin(), m.end(), lf);
}

// a - b as multisets; nullopt unless b is contained in a.
std::optional<Multiset> minus(const Multiset &a, const Multiset &b) {
  Multiset out;
  std::size_t j = 0;
  for (const auto &x : a) {
    if (j < b.size() && b[j] == x)
      ++j;
    else
      out.push_back(x);
  }
  if (j != b.size())
    return std::nullopt;
  return out;
}

[[noreturn]] void bad(InterpolationError::Kind k, const std::string &msg) {
  throw InterpolationError(k, msg);
}

InterpNode orth(InterpNode inner) {
  InterpNode n;
  n.kind = InterpNode::Kind::Orth;
  n.atoms = inner.atoms;
  n.left = inner.right;
  n.right = inner.left;
  n.interpolant = minimal_orthogonal(inner.interpolant);
  n.premises.push_back(std::move(inner));
  return n;
}

class Annotator {
public:
  // Frame left | right for the conclusion of p.
  InterpNode node(const Proof &p, const Multiset &left) {
    Multiset all = sorted(p.conclusion.formulas());
    auto right = minus(all, left);
    if (!right)
      bad(InterpolationError::Kind::PartitionMismatch,
          "left part is not contained in " + to_string(p.conclusion));
    const LabelledFormula &pr = *p.witness.principal;

    if (p.rule == Rule::Id) {
      LabelledFormula dual = neg(pr);
      bool rp = has(*right, pr), rd = has(*right, dual);
      bool lp = has(left, pr), ld = has(left, dual);
      if (rp && rd)
        return leaf(p, left, *right, Interpolant{{{pr.label, top()}}}, pr);
      if (lp && ld)
        return orth(leaf(p, *right, left, Interpolant{{{pr.label, top()}}}, pr));
      // one literal on each side: the right one is the interpolant
      LabelledFormula r = rp ? pr : dual;
      return leaf(p, left, *right, Interpolant{{r}}, r);
    }
    if (p.rule == Rule::TopR) {
      if (has(*right, pr))
        return leaf(p, left, *right, Interpolant{{{pr.label, top()}}}, pr);
      return orth(leaf(p, *right, left, Interpolant{{{pr.label, top()}}}, pr));
    }

    bool principal_right = has(*right, pr);
    InterpNode n;
    n.rule = p.rule;
    n.atoms = p.conclusion.atoms();
    n.witness = p.witness;
    if (principal_right) {
      n.left = left;
      n.right = *right;
      for (const auto &q : p.premises)
        n.premises.push_back(node(q, left));
    } else {
      // the premises keep `right` fixed; flip them so the principal side
      // becomes the right one
      n.left = *right;
      n.right = left;
      for (const auto &q : p.premises) {
        auto qleft = minus(sorted(q.conclusion.formulas()), *right);
        if (!qleft)
          bad(InterpolationError::Kind::InvalidProof,
              "premise drops a side formula: " + to_string(q.conclusion));
        n.premises.push_back(orth(node(q, *qleft)));
      }
    }
    n.interpolant = combine(n);
    return principal_right ? n : orth(std::move(n));
  }

private:
  static InterpNode leaf(const Proof &p, const Multiset &left, const Multiset &right,
                         Interpolant i, const LabelledFormula &principal) {
    InterpNode n;
    n.rule = p.rule;
    n.atoms = p.conclusion.atoms();
    n.left = left;
    n.right = right;
    n.witness = on(principal);
    n.interpolant = std::move(i);
    return n;
  }

  static Interpolant combine(const InterpNode &n) {
    switch (n.rule) {
    case Rule::OrR:
    case Rule::PrDia:
      return n.premises[0].interpolant;
    case Rule::AndR: {
      Interpolant u = n.premises[0].interpolant;
      u.insert(n.premises[1].interpolant.begin(), n.premises[1].interpolant.end());
      return minimal(u);
    }
    case Rule::BoxR: {
      const auto &pr = *n.witness.principal;
      return minimal(boxed(n.premises[0].interpolant, pr.formula.character(), pr.label,
                           *n.witness.fresh));
    }
    default:
      bad(InterpolationError::Kind::InvalidProof, rule_name(n.rule) + " in a grammar proof");
    }
  }
};

// Witness proofs. Both functions are tolerant: extra formulas in xi/theta
// are carried along as context.

[[noreturn]] void broken(const std::string &msg) { throw std::logic_error("interpolation: " + msg); }

Proof make(Rule r, const std::vector<RelAtom> &atoms, const Multiset &fs, Witness w) {
  return Proof{r, Sequent(atoms, fs), std::move(w), {}};
}

std::set<Label> node_labels(const InterpNode &n) {
  std::set<Label> out;
  for (const auto &a : n.atoms) {
    out.insert(a.from);
    out.insert(a.to);
  }
  for (const auto &lf : n.left)
    out.insert(lf.label);
  for (const auto &lf : n.right)
    out.insert(lf.label);
  return out;
}

void check_labels(const InterpNode &n, const Multiset &x) {
  auto ls = node_labels(n);
  for (const auto &lf : x)
    if (!ls.count(lf.label))
      broken("context label " + lf.label + " is not in the node");
}

// Unfolds the left-folded disjunction `f` of `count` disjuncts at label l
// (consumed form) and hands the final context to `top`.
template <class Top>
Proof or_spine(const std::vector<RelAtom> &atoms, Multiset ctx, const Label &l, Formula f,
               std::size_t count, Top &&top) {
  ctx = plus(ctx, {{l, f}});
  std::vector<Proof> chain;
  Multiset cur = ctx;
  while (count > 1) {
    Multiset next = cur;
    next.erase(std::find(next.begin(), next.end(), LabelledFormula{l, f}));
    next = plus(next, {{l, f.left()}, {l, f.right()}});
    chain.push_back(make(Rule::OrR, atoms, cur, on({l, f})));
    cur = std::move(next);
    f = f.left();
    --count;
  }
  Proof p = top(cur);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    it->premises.push_back(std::move(p));
    p = std::move(*it);
  }
  return p;
}

// Splits the left-folded conjunction `f` of `count` conjuncts at label l;
// `leaf(ctx, conjunct)` closes each branch.
template <class Leaf>
Proof and_spine(const std::vector<RelAtom> &atoms, const Multiset &ctx, const Label &l,
                const Formula &f, std::size_t count, Leaf &&leaf) {
  Multiset here = plus(ctx, {{l, f}});
  if (count <= 1)
    return leaf(ctx, f);
  Proof p = make(Rule::AndR, atoms, here, on({l, f}));
  p.premises.push_back(and_spine(atoms, ctx, l, f.left(), count - 1, leaf));
  p.premises.push_back(leaf(ctx, f.right()));
  return p;
}

} // namespace

InterpNode annotate(const CfcstSystem &s, const Proof &p, const std::vector<LabelledFormula> &left) {
  if (auto e = check_proof(s, p))
    throw InterpolationError(InterpolationError::Kind::InvalidProof, to_string(*e));
  Annotator a;
  return a.node(p, sorted(left));
}

Proof interpolant_right_proof(const InterpNode &n, const Multiset &theta_in);

Proof interpolant_left_proof(const InterpNode &n, const Multiset &xi_in) {
  Multiset xi = sorted(xi_in);
  check_labels(n, xi);
  auto xs = as_set(xi);
  if (n.kind == InterpNode::Kind::Orth)
    return interpolant_right_proof(n.premises[0], xi);

  const FlatSequent *elem = nullptr;
  for (const auto &e : n.interpolant)
    if (contains_all(xs, e)) {
      elem = &e;
      break;
    }
  if (!elem)
    broken("left context " + to_string(FlatSequent(xs.begin(), xs.end())) +
           " contains no member of " + to_string(n.interpolant));
  Multiset here = plus(n.left, xi);
  const LabelledFormula &pr = *n.witness.principal;

  switch (n.rule) {
  case Rule::Id:
  case Rule::TopR: {
    // the member is {w:top} or the right-hand literal; either way the
    // sequent is initial
    const LabelledFormula &m = *elem->begin();
    if (m.formula.kind() == Kind::Top)
      return make(Rule::TopR, n.atoms, here, on(m));
    LabelledFormula positive = m.formula.positive() ? m : neg(m);
    return make(Rule::Id, n.atoms, here, on(positive));
  }
  case Rule::OrR:
  case Rule::PrDia:
    return interpolant_left_proof(n.premises[0], xi);
  case Rule::AndR:
    for (const auto &q : n.premises)
      for (const auto &e : q.interpolant)
        if (contains_all(xs, e))
          return interpolant_left_proof(q, xi);
    broken("AndR: no premise member inside the context");
  case Rule::BoxR: {
    const Label &w = pr.label, &u = *n.witness.fresh;
    const Character &x = pr.formula.character();
    const InterpNode &child = n.premises[0];
    for (const auto &e : child.interpolant) {
      FlatSequent b = *boxed({e}, x, w, u).begin();
      if (!contains_all(xs, b))
        continue;
      std::vector<Formula> us;
      for (const auto &lf : e)
        if (lf.label == u)
          us.push_back(lf.formula);
      Formula boxf = gbox(x, big_or(us));
      Multiset rest = xi;
      // consumed form, unless the member itself still needs the box
      if (!e.count({w, boxf}))
        rest.erase(std::find(rest.begin(), rest.end(), LabelledFormula{w, boxf}));
      std::vector<RelAtom> atoms = child.atoms;
      Witness bw = on({w, boxf});
      bw.fresh = u;
      Proof p = make(Rule::BoxR, n.atoms, here, bw);
      // BoxR consumes the boxed formula, the disjunction is then unfolded
      Formula body = big_or(us);
      p.premises.push_back(or_spine(atoms, plus(n.left, rest), u, body,
                                    std::max<std::size_t>(us.size(), 1),
                                    [&](const Multiset &ctx) {
                                      auto extra = minus(ctx, child.left);
                                      if (!extra)
                                        broken("BoxR: lost left context");
                                      return interpolant_left_proof(child, *extra);
                                    }));
      return p;
    }
    broken("BoxR: no boxed member inside the context");
  }
  default:
    broken("unexpected rule " + rule_name(n.rule));
  }
}

Proof interpolant_right_proof(const InterpNode &n, const Multiset &theta_in) {
  Multiset theta = sorted(theta_in);
  check_labels(n, theta);
  auto ts = as_set(theta);
  if (n.kind == InterpNode::Kind::Orth)
    return interpolant_left_proof(n.premises[0], theta);
  for (const auto &e : n.interpolant)
    if (!hits(ts, e))
      broken("right context misses " + to_string(e));
  Multiset here = plus(theta, n.right);
  const LabelledFormula &pr = *n.witness.principal;

  auto mirror = [&](const InterpNode &child, const Multiset &ctx) {
    return interpolant_right_proof(child, ctx);
  };

  switch (n.rule) {
  case Rule::Id:
  case Rule::TopR: {
    if (pr.formula.kind() == Kind::Top)
      return make(Rule::TopR, n.atoms, here, on(pr));
    LabelledFormula positive = pr.formula.positive() ? pr : neg(pr);
    return make(Rule::Id, n.atoms, here, on(positive));
  }
  case Rule::OrR:
  case Rule::PrDia: {
    Proof p = make(n.rule, n.atoms, here, n.witness);
    p.premises.push_back(mirror(n.premises[0], theta));
    return p;
  }
  case Rule::AndR: {
    Proof p = make(n.rule, n.atoms, here, n.witness);
    p.premises.push_back(mirror(n.premises[0], theta));
    p.premises.push_back(mirror(n.premises[1], theta));
    return p;
  }
  case Rule::BoxR: {
    const Label &w = pr.label, &u = *n.witness.fresh;
    const Character &x = pr.formula.character();
    const InterpNode &child = n.premises[0];
    // members of the premise interpolant not hit outside u need a diamond
    // w:<x>(conjunction) from theta pushed to u and split there
    std::vector<std::vector<Formula>> needed;
    for (const auto &e : child.interpolant) {
      bool outside = false;
      for (const auto &lf : e)
        if (lf.label != u && ts.count(neg(lf)))
          outside = true;
      if (outside)
        continue;
      std::vector<Formula> us;
      for (const auto &lf : e)
        if (lf.label == u)
          us.push_back(negate(lf.formula));
      if (!ts.count({w, gdia(x, big_and(us))}))
        broken("BoxR: no diamond for " + to_string(e));
      if (std::find(needed.begin(), needed.end(), us) == needed.end())
        needed.push_back(us);
    }
    Witness bw = n.witness;
    Proof p = make(Rule::BoxR, n.atoms, here, bw);
    const std::vector<RelAtom> &atoms = child.atoms;
    // premise context: theta plus the child's right side
    std::function<Proof(std::size_t, Multiset)> go = [&](std::size_t k, Multiset ctx) -> Proof {
      if (k == needed.size()) {
        auto extra = minus(ctx, child.right);
        if (!extra)
          broken("BoxR: lost right context");
        return interpolant_right_proof(child, *extra);
      }
      Formula conj = big_and(needed[k]);
      if (conj.kind() == Kind::Top) {
        // empty disjunction: the diamond carries top
        Multiset with = plus(ctx, {{u, conj}});
        Witness pw = on({w, gdia(x, conj)});
        pw.target = u;
        pw.path = PathWitness{{w, u}, {x}, 0};
        Proof prd = make(Rule::PrDia, atoms, ctx, pw);
        prd.premises.push_back(make(Rule::TopR, atoms, with, on({u, conj})));
        return prd;
      }
      Witness pw = on({w, gdia(x, conj)});
      pw.target = u;
      pw.path = PathWitness{{w, u}, {x}, 0};
      Proof prd = make(Rule::PrDia, atoms, ctx, pw);
      prd.premises.push_back(and_spine(atoms, ctx, u, conj, needed[k].size(),
                                       [&](const Multiset &c, const Formula &pick) {
                                         return go(k + 1, plus(c, {{u, pick}}));
                                       }));
      return prd;
    };
    p.premises.push_back(go(0, plus(theta, child.right)));
    return p;
  }
  default:
    broken("unexpected rule " + rule_name(n.rule));
  }
}

std::string to_string(InterpolationResult::Status s) {
  switch (s) {
  case InterpolationResult::Status::Interpolated: return "Interpolated";
  case InterpolationResult::Status::NotDerivable: return "NotDerivable";
  case InterpolationResult::Status::Unknown: return "Unknown";
  }
  return "?";
}

InterpolationResult lyndon_interpolate(const CfcstSystem &s, const Formula &phi,
                                       const Formula &psi, const Budget &b) {
  const Label w = "w0";
  InterpolationResult out;
  Sequent start;
  start.add_formula(w, negate(phi));
  start.add_formula(w, psi);
  auto r = prove_sequent(s, start, w, b);
  if (r.verdict == GrammarResult::Verdict::Refuted) {
    out.status = InterpolationResult::Status::NotDerivable;
    out.model = r.model;
    return out;
  }
  if (r.verdict == GrammarResult::Verdict::Unknown) {
    out.status = InterpolationResult::Status::Unknown;
    out.reason = r.reason;
    return out;
  }
  InterpNode root = annotate(s, *r.proof, {{w, negate(phi)}});
  out.source = r.proof;
  out.interpolant = root.interpolant;
  out.chi = interpolant_formula(root.interpolant, w);
  const Formula &chi = out.chi;

  // |- w:~phi | chi  <=  |- w:~phi, w:chi  <=  one branch per member
  std::vector<FlatSequent> members(root.interpolant.begin(), root.interpolant.end());
  Multiset phi_ctx{{w, negate(phi)}};
  {
    Proof p = make(Rule::OrR, {}, {{w, implies(phi, chi)}}, on({w, implies(phi, chi)}));
    std::function<Proof(const Multiset &, const Formula &, std::size_t)> member_proof;
    auto disj_proof = [&](const Multiset &ctx, const Formula &d, std::size_t idx) {
      const FlatSequent &m = members[idx];
      if (m.empty()) {
        // bot as a disjunct: the left side alone is derivable
        return interpolant_left_proof(root, minus(plus(ctx, {{w, d}}), phi_ctx).value());
      }
      return or_spine({}, ctx, w, d, m.size(), [&](const Multiset &c) {
        return interpolant_left_proof(root, minus(c, phi_ctx).value());
      });
    };
    if (members.empty()) {
      p.premises.push_back(make(Rule::TopR, {}, plus(phi_ctx, {{w, chi}}), on({w, chi})));
    } else {
      // chi = ((D1 & D2) & ...) & Dn; the k-th conjunct leaf is member k
      std::function<Proof(const Formula &, std::size_t)> split = [&](const Formula &f,
                                                                     std::size_t count) {
        if (count == 1)
          return disj_proof(phi_ctx, f, 0);
        Proof a = make(Rule::AndR, {}, plus(phi_ctx, {{w, f}}), on({w, f}));
        a.premises.push_back(split(f.left(), count - 1));
        a.premises.push_back(disj_proof(phi_ctx, f.right(), count - 1));
        return a;
      };
      p.premises.push_back(split(chi, members.size()));
    }
    out.left_proof = std::move(p);
  }

  // |- w:~chi | psi  <=  |- w:~chi, w:psi; ~chi is a disjunction of
  // conjunctions of negated members
  {
    Multiset psi_ctx{{w, psi}};
    Formula nchi = negate(chi);
    Proof p = make(Rule::OrR, {}, {{w, implies(chi, psi)}}, on({w, implies(chi, psi)}));
    if (members.empty()) {
      // ~chi is bot: psi alone is derivable
      p.premises.push_back(interpolant_right_proof(root, {{w, nchi}}));
    } else {
      std::function<Proof(std::size_t, Multiset, Multiset)> pick =
          [&](std::size_t k, Multiset ctx, Multiset chosen) -> Proof {
        if (k == members.size())
          return interpolant_right_proof(root, minus(ctx, psi_ctx).value());
        const FlatSequent &m = members[k];
        std::vector<Formula> negs;
        for (const auto &lf : m)
          negs.push_back(negate(lf.formula));
        Formula c = big_and(negs);
        Multiset without = minus(ctx, {{w, c}}).value();
        if (c.kind() == Kind::Top)
          return make(Rule::TopR, {}, ctx, on({w, c}));
        return and_spine({}, without, w, c, negs.size(), [&](const Multiset &rest,
                                                               const Formula &f) {
          return pick(k + 1, plus(rest, {{w, f}}), chosen);
        });
      };
      // unfold ~chi = ((~D1 | ~D2) | ...) | ~Dn into its n disjuncts
      p.premises.push_back(or_spine({}, psi_ctx, w, nchi, members.size(),
                                    [&](const Multiset &ctx) { return pick(0, ctx, {}); }));
    }
    out.right_proof = std::move(p);
  }

  if (auto e = check_proof(s, *out.left_proof))
    broken("left witness proof fails: " + to_string(*e));
  if (auto e = check_proof(s, *out.right_proof))
    broken("right witness proof fails: " + to_string(*e));

  out.audit.chi = literals(chi);
  out.audit.phi = literals(phi);
  out.audit.psi = literals(psi);
  out.audit.ok = true;
  for (const auto &l : out.audit.chi)
    if (!out.audit.phi.count(l) || !out.audit.psi.count(l))
      out.audit.ok = false;
  if (!out.audit.ok)
    broken("Lyndon condition fails for " + print(chi));
  out.status = InterpolationResult::Status::Interpolated;
  return out;
}

} // namespace refine
