#include "refine/fixtures.hpp"

#include <functional>
#include <random>

namespace refine {

std::vector<Fixture> grammar_a2(const CfcstSystem &s) {
  std::vector<Fixture> out;
  Formula p = lit("p");
  for (const auto &x : s.alphabet())
    out.push_back({"A2 " + x.name(), implies(p, gbox(x, gdia(x.converse(), p)))});
  return out;
}

std::vector<Fixture> grammar_a3(const CfcstSystem &s) {
  std::vector<Fixture> out;
  Formula p = lit("p");
  for (const auto &r : s.rules()) {
    Formula lhs = p;
    for (auto it = r.tail.rbegin(); it != r.tail.rend(); ++it)
      lhs = gdia(*it, lhs);
    std::string name = "A3 " + r.head.name() + " -> " + (r.tail.empty() ? "eps" : to_string(r.tail));
    out.push_back({name, implies(lhs, gdia(r.head, p))});
  }
  return out;
}

CfcstSystem random_system(std::uint64_t seed, int max_bases, int max_rules) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int bases = pick(1, max_bases);
  auto character = [&] {
    return Character(std::string(1, static_cast<char>('a' + pick(0, bases - 1))), pick(0, 1) == 1);
  };
  std::set<Character> alphabet;
  for (int b = 0; b < bases; ++b)
    alphabet.insert(Character(std::string(1, static_cast<char>('a' + b))));
  std::vector<Production> rules;
  int n = pick(0, max_rules);
  for (int i = 0; i < n; ++i) {
    Production p{character(), {}};
    int len = pick(0, 3);
    for (int j = 0; j < len; ++j)
      p.tail.push_back(character());
    rules.push_back(p);
  }
  return CfcstSystem::build(alphabet, rules, true);
}

namespace {

const std::vector<std::pair<std::string, Formula>> &letters() {
  static const std::vector<std::pair<std::string, Formula>> l{
      {"p", lit("p")}, {"q", lit("q")}, {"~p", lit("p", false)}, {"~q", lit("q", false)}};
  return l;
}

void unary(std::vector<Fixture> &out, const std::string &name,
           const std::function<Formula(const Formula &)> &f) {
  for (const auto &[n, a] : letters())
    out.push_back({name + " [" + n + "]", f(a)});
}

void binary(std::vector<Fixture> &out, const std::string &name,
            const std::function<Formula(const Formula &, const Formula &)> &f) {
  for (const auto &[n, a] : letters())
    for (const auto &[m, b] : letters())
      out.push_back({name + " [" + n + ", " + m + "]", f(a, b)});
}

} // namespace

std::vector<Fixture> ds_axioms(int k) {
  std::vector<Fixture> out;
  Formula p = lit("p"), q = lit("q");
  const std::vector<Formula> tautologies{
      disj(p, negate(p)),
      implies(p, implies(q, p)),
      implies(implies(p, q), implies(negate(q), negate(p))),
      implies(implies(implies(p, q), p), p),
      implies(conj(p, q), p),
      implies(p, disj(p, q)),
      implies(conj(implies(p, q), implies(q, p)), disj(conj(p, q), conj(negate(p), negate(q)))),
      implies(negate(conj(p, q)), disj(negate(p), negate(q))),
      disj(implies(p, q), implies(q, p)),
      implies(top(), disj(p, top())),
      implies(conj(p, bot()), q),
  };
  for (std::size_t i = 0; i < tautologies.size(); ++i)
    out.push_back({"A0 #" + std::to_string(i + 1), tautologies[i]});

  auto k_axiom = [](Formula (*box)(const Formula &)) {
    return [box](const Formula &a, const Formula &b) {
      return implies(box(implies(a, b)), implies(box(a), box(b)));
    };
  };
  binary(out, "A1", k_axiom(sbox));
  binary(out, "A2", k_axiom(cbox));
  binary(out, "A3", k_axiom(obox));
  unary(out, "A4", [](const Formula &a) { return implies(sbox(a), cbox(a)); });
  unary(out, "A5", [](const Formula &a) { return implies(sbox(a), obox(a)); });
  unary(out, "A6", [](const Formula &a) { return implies(sbox(a), a); });
  unary(out, "A7", [](const Formula &a) { return implies(sdia(a), sbox(sdia(a))); });
  unary(out, "A8", [](const Formula &a) { return implies(cbox(a), a); });
  unary(out, "A9", [](const Formula &a) { return implies(cdia(a), cbox(cdia(a))); });
  unary(out, "A10", [](const Formula &a) { return implies(obox(a), odia(a)); });
  unary(out, "A11", [](const Formula &a) { return implies(sdia(obox(a)), sbox(obox(a))); });
  unary(out, "A12", [](const Formula &a) { return implies(obox(a), obox(cbox(a))); });

  if (k > 0) {
    // all k-tuples of letters
    std::vector<std::vector<std::size_t>> tuples{{}};
    for (int i = 0; i < k; ++i) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto &t : tuples)
        for (std::size_t l = 0; l < letters().size(); ++l) {
          auto u = t;
          u.push_back(l);
          next.push_back(u);
        }
      tuples = std::move(next);
    }
    for (const auto &t : tuples) {
      std::vector<Formula> conjuncts, disjuncts;
      std::string name = "A14 k=" + std::to_string(k) + " [";
      for (std::size_t i = 0; i < t.size(); ++i) {
        const Formula &phi = letters()[t[i]].second;
        name += (i ? ", " : "") + letters()[t[i]].first;
        std::vector<Formula> body;
        for (std::size_t j = 0; j < i; ++j)
          body.push_back(negate(letters()[t[j]].second));
        body.push_back(cbox(phi));
        conjuncts.push_back(sdia(big_and(body)));
        disjuncts.push_back(phi);
      }
      out.push_back({name + "]", implies(big_and(conjuncts), big_or(disjuncts))});
    }
  }
  return out;
}

std::vector<Fixture> ds_non_theorems() {
  Formula p = lit("p"), q = lit("q");
  return {
      {"p -> [*]p", implies(p, sbox(p))},
      {"p -> [0]p", implies(p, cbox(p))},
      {"[o]p -> p", implies(obox(p), p)},
      {"[0]p -> [*]p", implies(cbox(p), sbox(p))},
      {"<o>p -> [o]p", implies(odia(p), obox(p))},
      {"[0][o](p | ~q)", cbox(obox(disj(p, negate(q))))},
      {"p | q", disj(p, q)},
  };
}

} // namespace refine
