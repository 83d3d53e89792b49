#pragma once

#include "refine/label.hpp"
#include "refine/syntax.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace refine {

struct Production {
  Character head;
  Str tail;
  auto operator<=>(const Production &) const = default;
  bool operator==(const Production &) const = default;
};

std::string to_string(const Production &p);

class GrammarError : public std::runtime_error {
public:
  enum class Kind { ClosureViolation, UnknownCharacter, Syntax };
  GrammarError(Kind k, const std::string &msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

class CfcstSystem {
public:
  CfcstSystem() = default;

  // The alphabet is completed under converse. With auto_close the converse
  // image of every rule is added, otherwise a missing one is an error.
  static CfcstSystem build(const std::set<Character> &alphabet,
                           const std::vector<Production> &rules, bool auto_close);

  const std::set<Character> &alphabet() const { return alphabet_; }
  const std::vector<Production> &rules() const { return rules_; }
  bool contains(const Production &p) const;
  bool closed() const;
  std::string key() const;

private:
  std::set<Character> alphabet_;
  std::vector<Production> rules_;  // sorted, unique
};

CfcstSystem parse_system(const std::string &text, bool auto_close);
std::string print_system(const CfcstSystem &s);

// True iff target is reachable from start in at most max_steps one-step
// rewrites. Plain breadth-first search; strings whose non-nullable
// characters already outnumber the target length are pruned.
bool derives(const CfcstSystem &s, const Str &start, const Str &target,
             std::size_t max_steps);

// Characters that derive the empty string.
std::set<Character> nullable(const CfcstSystem &s);

struct Edge {
  Label from;
  Label to;
  Character ch;
  auto operator<=>(const Edge &) const = default;
  bool operator==(const Edge &) const = default;
};

struct PropGraph {
  std::set<Label> vertices;
  std::set<Edge> edges;
  bool operator==(const PropGraph &) const = default;
};

struct PathWitness {
  std::vector<Label> labels;  // one more than chars
  Str chars;
  std::size_t derivation_steps = 0;  // rewrites needed for x =>* chars
  bool operator==(const PathWitness &o) const {
    return labels == o.labels && chars == o.chars;
  }
};

std::string to_string(const PathWitness &p);

// Bottom-up CFL-reachability over (vertex, symbol, vertex) triples for one
// graph and one system. Immutable after construction.
class CflSolver {
public:
  CflSolver(const PropGraph &g, const CfcstSystem &s);

  bool holds(const Character &x, const Label &w, const Label &u) const;
  std::optional<PathWitness> query(const Character &x, const Label &w,
                                   const Label &u) const;
  std::size_t triple_count() const { return back_.size(); }

private:
  enum class Origin { Edge, Eps, Unary, Binary };
  struct Back {
    Origin origin;
    bool real_head;  // false for binarization helpers
    std::uint64_t left = 0;
    std::uint64_t right = 0;
  };

  int symbol(const Character &c);
  std::uint64_t key(int v1, int sym, int v2) const;
  void add(int v1, int sym, int v2, Back b);
  void expand(std::uint64_t t, std::vector<int> &verts, std::vector<int> &syms,
              std::size_t &steps) const;

  std::vector<Label> vertices_;
  std::map<Label, int> vertex_index_;
  std::vector<Character> symbols_;  // real characters; helpers have no entry
  std::map<Character, int> symbol_index_;
  int symbol_count_ = 0;

  std::vector<std::pair<int, int>> unary_;             // (body, head)
  std::vector<std::tuple<int, int, int>> binary_;      // (first, second, head)
  std::vector<int> eps_;
  std::vector<bool> real_;

  std::map<std::uint64_t, Back> back_;
  // out_[v][sym] = targets, in_[v][sym] = sources
  std::vector<std::map<int, std::vector<int>>> out_, in_;
  std::vector<std::uint64_t> work_;
};

std::optional<PathWitness> reachable(const PropGraph &g, const CfcstSystem &s,
                                     const Character &x, const Label &w,
                                     const Label &u);

// s in L_S(x), decided on the linear graph spelling s.
bool in_language(const CfcstSystem &s, const Character &x, const Str &str);

// Witness is a path of g from w to u whose string lies in L_S(x).
bool witness_valid(const PropGraph &g, const CfcstSystem &s, const Character &x,
                   const Label &w, const Label &u, const PathWitness &p);

// Saturation results keyed by (graph, system).
class ReachabilityCache {
public:
  std::shared_ptr<const CflSolver> get(const PropGraph &g, const CfcstSystem &s);
  std::size_t size() const;

private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const CflSolver>> cache_;
};

} // namespace refine
