#include "refine/grammar.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace refine {

std::string to_string(const Production &p) {
  return p.head.name() + " -> " + to_string(p.tail);
}

CfcstSystem CfcstSystem::build(const std::set<Character> &alphabet,
                               const std::vector<Production> &rules,
                               bool auto_close) {
  CfcstSystem s;
  for (const auto &c : alphabet) {
    s.alphabet_.insert(c);
    s.alphabet_.insert(c.converse());
  }
  auto known = [&](const Character &c) { return s.alphabet_.count(c) > 0; };
  std::set<Production> set;
  for (const auto &r : rules) {
    if (!known(r.head))
      throw GrammarError(GrammarError::Kind::UnknownCharacter,
                         "character " + r.head.name() + " not in alphabet (rule " +
                             to_string(r) + ")");
    for (const auto &c : r.tail)
      if (!known(c))
        throw GrammarError(GrammarError::Kind::UnknownCharacter,
                           "character " + c.name() + " not in alphabet (rule " +
                               to_string(r) + ")");
    set.insert(r);
  }
  if (auto_close) {
    std::set<Production> closed = set;
    for (const auto &r : set)
      closed.insert({r.head.converse(), converse(r.tail)});
    set = std::move(closed);
  } else {
    for (const auto &r : set) {
      Production dual{r.head.converse(), converse(r.tail)};
      if (!set.count(dual))
        throw GrammarError(GrammarError::Kind::ClosureViolation,
                           "rule " + to_string(r) + " has no converse rule " +
                               to_string(dual));
    }
  }
  s.rules_.assign(set.begin(), set.end());
  return s;
}

bool CfcstSystem::contains(const Production &p) const {
  return std::binary_search(rules_.begin(), rules_.end(), p);
}

bool CfcstSystem::closed() const {
  for (const auto &r : rules_)
    if (!contains({r.head.converse(), converse(r.tail)}))
      return false;
  return true;
}

std::string CfcstSystem::key() const { return print_system(*this); }

static std::vector<std::string> split_words(const std::string &s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w)
    out.push_back(w);
  return out;
}

CfcstSystem parse_system(const std::string &text, bool auto_close) {
  std::set<Character> alphabet;
  std::vector<Production> rules;
  bool have_alphabet = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string &msg) {
    throw GrammarError(GrammarError::Kind::Syntax,
                       "line " + std::to_string(lineno) + ": " + msg);
  };
  auto character = [&](const std::string &w) {
    try {
      Character c = parse_character(w);
      if (c.base == "o")
        fail("'o' is reserved for the obligation modality");
      return c;
    } catch (const std::invalid_argument &e) {
      fail(e.what());
    }
    return Character();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos)
      line.erase(h);
    auto words = split_words(line);
    if (words.empty())
      continue;
    if (line.find("alphabet:") != std::string::npos) {
      auto rest = line.substr(line.find("alphabet:") + 9);
      for (const auto &w : split_words(rest))
        alphabet.insert(character(w));
      have_alphabet = true;
      continue;
    }
    if (words.size() < 3 || words[1] != "->")
      fail("expected 'x -> s'");
    Production p;
    p.head = character(words[0]);
    if (!(words.size() == 3 && (words[2] == "eps" || words[2] == "ε")))
      for (std::size_t i = 2; i < words.size(); ++i)
        p.tail.push_back(character(words[i]));
    rules.push_back(p);
  }
  if (!have_alphabet) {
    // Without an explicit alphabet, take every character that is mentioned.
    for (const auto &r : rules) {
      alphabet.insert(r.head);
      for (const auto &c : r.tail)
        alphabet.insert(c);
    }
  }
  return CfcstSystem::build(alphabet, rules, auto_close);
}

std::string print_system(const CfcstSystem &s) {
  std::string out = "alphabet:";
  for (const auto &c : s.alphabet())
    if (!c.backward)
      out += " " + c.name();
  out += "\n";
  for (const auto &r : s.rules())
    out += to_string(r) + "\n";
  return out;
}

std::set<Character> nullable(const CfcstSystem &s) {
  std::set<Character> out;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto &r : s.rules()) {
      if (out.count(r.head))
        continue;
      bool all = std::all_of(r.tail.begin(), r.tail.end(),
                             [&](const Character &c) { return out.count(c) > 0; });
      if (all) {
        out.insert(r.head);
        changed = true;
      }
    }
  }
  return out;
}

bool derives(const CfcstSystem &s, const Str &start, const Str &target,
             std::size_t max_steps) {
  if (start == target)
    return true;
  auto null = nullable(s);
  auto hopeless = [&](const Str &str) {
    std::size_t solid = 0;
    for (const auto &c : str)
      if (!null.count(c))
        ++solid;
    return solid > target.size();
  };
  std::set<Str> seen{start};
  std::vector<Str> frontier{start};
  for (std::size_t step = 0; step < max_steps && !frontier.empty(); ++step) {
    std::vector<Str> next;
    for (const auto &str : frontier) {
      for (std::size_t i = 0; i < str.size(); ++i) {
        for (const auto &r : s.rules()) {
          if (r.head != str[i])
            continue;
          Str out(str.begin(), str.begin() + i);
          out.insert(out.end(), r.tail.begin(), r.tail.end());
          out.insert(out.end(), str.begin() + i + 1, str.end());
          if (out == target)
            return true;
          if (hopeless(out) || !seen.insert(out).second)
            continue;
          next.push_back(std::move(out));
        }
      }
    }
    frontier = std::move(next);
  }
  return false;
}

std::string to_string(const PathWitness &p) {
  std::string out;
  for (std::size_t i = 0; i < p.labels.size(); ++i) {
    if (i > 0)
      out += "," + p.chars[i - 1].name() + ",";
    out += p.labels[i];
  }
  return out;
}

// --- CFL-reachability -------------------------------------------------------

int CflSolver::symbol(const Character &c) {
  auto it = symbol_index_.find(c);
  if (it != symbol_index_.end())
    return it->second;
  int id = symbol_count_++;
  symbol_index_[c] = id;
  symbols_.push_back(c);
  real_.push_back(true);
  return id;
}

std::uint64_t CflSolver::key(int v1, int sym, int v2) const {
  return (static_cast<std::uint64_t>(v1) << 48) |
         (static_cast<std::uint64_t>(sym) << 16) | static_cast<std::uint64_t>(v2);
}

void CflSolver::add(int v1, int sym, int v2, Back b) {
  auto k = key(v1, sym, v2);
  if (back_.count(k))
    return;
  back_.emplace(k, b);
  out_[v1][sym].push_back(v2);
  in_[v2][sym].push_back(v1);
  work_.push_back(k);
}

CflSolver::CflSolver(const PropGraph &g, const CfcstSystem &s) {
  for (const auto &v : g.vertices) {
    vertex_index_[v] = static_cast<int>(vertices_.size());
    vertices_.push_back(v);
  }
  for (const auto &e : g.edges)
    for (const auto &v : {e.from, e.to})
      if (!vertex_index_.count(v)) {
        vertex_index_[v] = static_cast<int>(vertices_.size());
        vertices_.push_back(v);
      }
  if (vertices_.size() >= (1u << 16))
    throw std::length_error("propagation graph too large");

  for (const auto &c : s.alphabet())
    symbol(c);
  for (const auto &e : g.edges)
    symbol(e.ch);

  // Binarize: x -> y1 y2 ... yn becomes x -> y1 N1, N1 -> y2 N2, ...
  for (const auto &r : s.rules()) {
    int head = symbol(r.head);
    std::vector<int> tail;
    for (const auto &c : r.tail)
      tail.push_back(symbol(c));
    if (tail.empty()) {
      eps_.push_back(head);
    } else if (tail.size() == 1) {
      unary_.push_back({tail[0], head});
    } else {
      int cur = head;
      for (std::size_t i = 0; i + 2 < tail.size(); ++i) {
        int helper = symbol_count_++;
        real_.push_back(false);
        binary_.push_back({tail[i], helper, cur});
        cur = helper;
      }
      binary_.push_back({tail[tail.size() - 2], tail.back(), cur});
    }
  }

  out_.assign(vertices_.size(), {});
  in_.assign(vertices_.size(), {});

  for (const auto &e : g.edges)
    add(vertex_index_.at(e.from), symbol_index_.at(e.ch), vertex_index_.at(e.to),
        Back{Origin::Edge, true});
  for (int x : eps_)
    for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
      add(v, x, v, Back{Origin::Eps, true});

  while (!work_.empty()) {
    auto t = work_.back();
    work_.pop_back();
    int i = static_cast<int>(t >> 48);
    int a = static_cast<int>((t >> 16) & 0xffffffffu);
    int j = static_cast<int>(t & 0xffffu);
    for (const auto &[body, head] : unary_)
      if (body == a)
        add(i, head, j, Back{Origin::Unary, real_[head], t});
    for (const auto &[first, second, head] : binary_) {
      if (first == a) {
        auto it = out_[j].find(second);
        if (it != out_[j].end()) {
          auto targets = it->second;  // add() may grow the vector
          for (int k : targets)
            add(i, head, k, Back{Origin::Binary, real_[head], t, key(j, second, k)});
        }
      }
      if (second == a) {
        auto it = in_[i].find(first);
        if (it != in_[i].end()) {
          auto sources = it->second;
          for (int h : sources)
            add(h, head, j, Back{Origin::Binary, real_[head], key(h, first, i), t});
        }
      }
    }
  }
}

bool CflSolver::holds(const Character &x, const Label &w, const Label &u) const {
  auto vw = vertex_index_.find(w);
  auto vu = vertex_index_.find(u);
  auto sx = symbol_index_.find(x);
  if (vw == vertex_index_.end() || vu == vertex_index_.end() ||
      sx == symbol_index_.end())
    return false;
  return back_.count(key(vw->second, sx->second, vu->second)) > 0;
}

void CflSolver::expand(std::uint64_t t, std::vector<int> &verts,
                       std::vector<int> &syms, std::size_t &steps) const {
  const Back &b = back_.at(t);
  switch (b.origin) {
  case Origin::Edge:
    syms.push_back(static_cast<int>((t >> 16) & 0xffffffffu));
    verts.push_back(static_cast<int>(t & 0xffffu));
    return;
  case Origin::Eps:
    ++steps;
    return;
  case Origin::Unary:
    ++steps;
    expand(b.left, verts, syms, steps);
    return;
  case Origin::Binary:
    if (b.real_head)
      ++steps;
    expand(b.left, verts, syms, steps);
    expand(b.right, verts, syms, steps);
    return;
  }
}

std::optional<PathWitness> CflSolver::query(const Character &x, const Label &w,
                                            const Label &u) const {
  if (!holds(x, w, u))
    return std::nullopt;
  auto t = key(vertex_index_.at(w), symbol_index_.at(x), vertex_index_.at(u));
  std::vector<int> verts{vertex_index_.at(w)};
  std::vector<int> syms;
  PathWitness p;
  expand(t, verts, syms, p.derivation_steps);
  for (int v : verts)
    p.labels.push_back(vertices_[v]);
  for (int s : syms)
    p.chars.push_back(symbols_[s]);
  return p;
}

std::optional<PathWitness> reachable(const PropGraph &g, const CfcstSystem &s,
                                     const Character &x, const Label &w,
                                     const Label &u) {
  if (!g.vertices.count(w) || !g.vertices.count(u))
    return std::nullopt;
  return CflSolver(g, s).query(x, w, u);
}

bool in_language(const CfcstSystem &s, const Character &x, const Str &str) {
  PropGraph chain;
  for (std::size_t i = 0; i <= str.size(); ++i)
    chain.vertices.insert(std::to_string(i));
  for (std::size_t i = 0; i < str.size(); ++i)
    chain.edges.insert({std::to_string(i), std::to_string(i + 1), str[i]});
  return CflSolver(chain, s).holds(x, "0", std::to_string(str.size()));
}

bool witness_valid(const PropGraph &g, const CfcstSystem &s, const Character &x,
                   const Label &w, const Label &u, const PathWitness &p) {
  if (p.labels.empty() || p.labels.size() != p.chars.size() + 1)
    return false;
  if (p.labels.front() != w || p.labels.back() != u)
    return false;
  for (const auto &l : p.labels)
    if (!g.vertices.count(l))
      return false;
  for (std::size_t i = 0; i < p.chars.size(); ++i)
    if (!g.edges.count({p.labels[i], p.labels[i + 1], p.chars[i]}))
      return false;
  return in_language(s, x, p.chars);
}

std::shared_ptr<const CflSolver> ReachabilityCache::get(const PropGraph &g,
                                                        const CfcstSystem &s) {
  std::string k = s.key();
  k += "|";
  for (const auto &v : g.vertices)
    k += v + ",";
  k += "|";
  for (const auto &e : g.edges)
    k += e.from + "," + e.ch.name() + "," + e.to + ";";
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(k);
    if (it != cache_.end())
      return it->second;
  }
  auto solver = std::make_shared<const CflSolver>(g, s);
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(k, solver);
  return solver;
}

std::size_t ReachabilityCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

} // namespace refine
