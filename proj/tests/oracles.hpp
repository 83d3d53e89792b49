// Independent brute-force checks used by the tests. Nothing here calls the
// saturation solver, the provers or the union-find.
#pragma once

#include "refine/grammar.hpp"
#include "refine/interpolation.hpp"
#include "refine/semantics.hpp"
#include "refine/sequent.hpp"
#include "refine/syntax.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using namespace refine;

// Enumerate every path of length <= max_len from w to u and ask whether its
// string derives from x within depth rewrites.
inline bool path_reachable(const PropGraph &g, const CfcstSystem &s, const Character &x,
                           const Label &w, const Label &u, std::size_t max_len,
                           std::size_t depth) {
  std::map<Label, std::vector<std::pair<Label, Character>>> succ;
  for (const auto &e : g.edges)
    succ[e.from].push_back({e.to, e.ch});
  Str str;
  std::set<Str> tried;
  std::function<bool(const Label &)> go = [&](const Label &v) {
    if (v == u && tried.insert(str).second && derives(s, {x}, str, depth))
      return true;
    if (str.size() == max_len)
      return false;
    for (const auto &[to, c] : succ[v]) {
      str.push_back(c);
      if (go(to))
        return true;
      str.pop_back();
    }
    return false;
  };
  return go(w);
}

// Iterative deepening until derives succeeds or the cap is hit.
inline bool derives_eventually(const CfcstSystem &s, const Character &x, const Str &str,
                               std::size_t cap) {
  for (std::size_t d = 0; d <= cap; ++d)
    if (derives(s, {x}, str, d))
      return true;
  return false;
}

// Exhaustive product, no minimisation. Partial choices are kept in a set so
// duplicates collapse early.
inline Interpolant brute_orthogonal(const Interpolant &i) {
  Interpolant out{FlatSequent{}};
  for (const auto &gamma : i) {
    Interpolant next;
    for (const auto &partial : out)
      for (const auto &lf : gamma) {
        FlatSequent s = partial;
        s.insert({lf.label, negate(lf.formula)});
        next.insert(s);
      }
    out = next;
  }
  return out;
}

inline bool bfs_connected(const std::vector<RelAtom> &atoms, const Label &w, const Label &u) {
  std::map<Label, std::vector<Label>> adj;
  for (const auto &a : atoms)
    if (a.kind == RelAtom::Kind::C) {
      adj[a.from].push_back(a.to);
      adj[a.to].push_back(a.from);
    }
  std::set<Label> seen{w};
  std::deque<Label> q{w};
  while (!q.empty()) {
    Label v = q.front();
    q.pop_front();
    if (v == u)
      return true;
    for (const auto &n : adj[v])
      if (seen.insert(n).second)
        q.push_back(n);
  }
  return false;
}

// Propositional evaluation; modal formulas are rejected.
inline bool eval(const Formula &f, const std::map<std::string, bool> &v) {
  switch (f.kind()) {
  case Kind::Lit: {
    auto it = v.find(f.atom());
    bool val = it != v.end() && it->second;
    return f.positive() ? val : !val;
  }
  case Kind::Top:
    return true;
  case Kind::Bot:
    return false;
  case Kind::Or:
    return eval(f.left(), v) || eval(f.right(), v);
  case Kind::And:
    return eval(f.left(), v) && eval(f.right(), v);
  default:
    throw std::invalid_argument("eval: modal formula");
  }
}

inline std::vector<std::map<std::string, bool>> assignments(const std::set<std::string> &atoms) {
  std::vector<std::string> as(atoms.begin(), atoms.end());
  std::vector<std::map<std::string, bool>> out;
  for (unsigned mask = 0; mask < (1u << as.size()); ++mask) {
    std::map<std::string, bool> v;
    for (std::size_t i = 0; i < as.size(); ++i)
      v[as[i]] = (mask >> i) & 1u;
    out.push_back(v);
  }
  return out;
}

inline bool tautology(const Formula &f) {
  for (const auto &v : assignments(refine::atoms(f)))
    if (!eval(f, v))
      return false;
  return true;
}

inline bool equivalent(const Formula &a, const Formula &b) {
  auto as = refine::atoms(a);
  auto bs = refine::atoms(b);
  as.insert(bs.begin(), bs.end());
  for (const auto &v : assignments(as))
    if (eval(a, v) != eval(b, v))
      return false;
  return true;
}

// Backtracking isomorphism test for sequent graphs: a bijection on vertices
// preserving tagged edges, formula multisets and ideal marks.
inline bool isomorphic(const SequentGraph &a, const SequentGraph &b) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size() ||
      a.ideal.size() != b.ideal.size())
    return false;
  auto sig = [](const SequentGraph &g, const Label &v) {
    auto fs = g.labeling.count(v) ? g.labeling.at(v) : std::vector<Formula>{};
    std::sort(fs.begin(), fs.end());
    std::string s;
    for (const auto &f : fs)
      s += print(f) + ";";
    s += g.ideal.count(v) ? "I" : "-";
    int in = 0, out = 0;
    for (const auto &[x, y, t] : g.edges) {
      in += y == v;
      out += x == v;
    }
    return s + "/" + std::to_string(in) + "/" + std::to_string(out);
  };
  std::vector<Label> av(a.vertices.begin(), a.vertices.end());
  std::vector<Label> bv(b.vertices.begin(), b.vertices.end());
  std::map<Label, Label> map;
  std::set<Label> used;
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == av.size()) {
      for (const auto &[x, y, t] : a.edges)
        if (!b.edges.count({map[x], map[y], t}))
          return false;
      return true;
    }
    for (const auto &cand : bv) {
      if (used.count(cand) || sig(a, av[i]) != sig(b, cand))
        continue;
      map[av[i]] = cand;
      used.insert(cand);
      if (go(i + 1))
        return true;
      used.erase(cand);
    }
    map.erase(av[i]);
    return false;
  };
  return go(0);
}

// All set partitions of {0..n-1} as class indices.
inline std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  std::function<void(int, int)> go = [&](int i, int classes) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int c = 0; c <= classes; ++c) {
      cur[i] = c;
      go(i + 1, std::max(classes, c + 1));
    }
  };
  if (n > 0)
    go(0, 0);
  return out;
}

// Exhaustive search for a DS model with at most max_worlds worlds in which f
// fails somewhere. Valuations range over the atoms of f.
inline std::optional<DsModel> ds_countermodel(const Formula &f, int k, int max_worlds) {
  auto as = refine::atoms(f);
  std::vector<std::string> atoms(as.begin(), as.end());
  for (int n = 1; n <= max_worlds; ++n) {
    std::vector<World> ws;
    for (int i = 0; i < n; ++i)
      ws.push_back("x" + std::to_string(i));
    for (const auto &part : partitions(n)) {
      int classes = *std::max_element(part.begin(), part.end()) + 1;
      if (k > 0 && classes > k)
        continue;
      for (unsigned ideal_mask = 1; ideal_mask < (1u << classes); ++ideal_mask) {
        DsModel m;
        m.k = k;
        m.worlds.insert(ws.begin(), ws.end());
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (part[i] == part[j])
              m.choice.insert({ws[i], ws[j]});
        for (int i = 0; i < n; ++i)
          if ((ideal_mask >> part[i]) & 1u)
            m.ideal.insert(ws[i]);
        std::size_t bits = atoms.size() * static_cast<std::size_t>(n);
        for (std::uint64_t val = 0; val < (std::uint64_t{1} << bits); ++val) {
          m.valuation.clear();
          for (std::size_t a = 0; a < atoms.size(); ++a) {
            auto &set = m.valuation[atoms[a]];
            for (int i = 0; i < n; ++i)
              if ((val >> (a * n + i)) & 1u)
                set.insert(ws[i]);
          }
          for (const auto &w : ws)
            if (!check_ds(m, w, f))
              return m;
        }
      }
    }
  }
  return std::nullopt;
}

// Exhaustive search over Σ-models with at most max_worlds worlds for the
// given characters (converse pairs completed, then saturated).
inline std::optional<SigmaModel> sigma_countermodel(const CfcstSystem &s, const Formula &f,
                                                    const std::set<Character> &chars,
                                                    int max_worlds) {
  auto as = refine::atoms(f);
  std::vector<std::string> atoms(as.begin(), as.end());
  std::vector<Character> cs;
  for (const auto &c : chars)
    if (!c.backward)
      cs.push_back(c);
  for (int n = 1; n <= max_worlds; ++n) {
    std::vector<World> ws;
    for (int i = 0; i < n; ++i)
      ws.push_back("x" + std::to_string(i));
    std::size_t rel_bits = cs.size() * n * n;
    std::size_t val_bits = atoms.size() * n;
    if (rel_bits + val_bits > 22)
      break;
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << rel_bits); ++r) {
      SigmaModel base;
      base.worlds.insert(ws.begin(), ws.end());
      std::size_t bit = 0;
      for (const auto &c : cs) {
        auto &rel = base.relations[c];
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j, ++bit)
            if ((r >> bit) & 1u)
              rel.insert({ws[i], ws[j]});
      }
      SigmaModel sat = saturate(s, base);
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << val_bits); ++v) {
        sat.valuation.clear();
        for (std::size_t a = 0; a < atoms.size(); ++a) {
          auto &set = sat.valuation[atoms[a]];
          for (int i = 0; i < n; ++i)
            if ((v >> (a * n + i)) & 1u)
              set.insert(ws[i]);
        }
        for (const auto &w : ws)
          if (!check_sigma(sat, w, f))
            return sat;
      }
    }
  }
  return std::nullopt;
}

} // namespace oracle
