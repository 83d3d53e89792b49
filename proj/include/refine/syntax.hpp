#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace refine {

// A character of the alphabet. Backward characters are the converses of
// forward ones and print with a trailing apostrophe.
struct Character {
  std::string base;
  bool backward = false;

  Character() = default;
  explicit Character(std::string b, bool back = false)
      : base(std::move(b)), backward(back) {}

  Character converse() const { return Character(base, !backward); }
  std::string name() const { return backward ? base + "'" : base; }

  auto operator<=>(const Character &) const = default;
  bool operator==(const Character &) const = default;
};

// Parses "a" or "a'".
Character parse_character(const std::string &text);

using Str = std::vector<Character>;

Str converse(const Str &s);
std::string to_string(const Str &s);

enum class Kind {
  Lit,
  Top,
  Bot,
  Or,
  And,
  GDia,
  GBox,
  SDia,
  SBox,
  CDia,
  CBox,
  ODia,
  OBox,
};

enum class Family { Neutral, Grammar, Stit };

struct Node;

// Immutable formula in negation normal form. Copies share structure.
class Formula {
public:
  Formula() = default;

  Kind kind() const;
  const std::string &atom() const;
  bool positive() const;  // literal polarity
  const Character &character() const;
  const Formula &left() const;   // binary left or modal body
  const Formula &right() const;  // binary right
  const Formula &body() const { return left(); }
  std::size_t hash() const;
  bool valid() const { return node_ != nullptr; }

  bool is_literal() const { return kind() == Kind::Lit; }
  bool is_binary() const { return kind() == Kind::Or || kind() == Kind::And; }
  bool is_modal() const;

  friend bool operator==(const Formula &a, const Formula &b);
  friend std::strong_ordering operator<=>(const Formula &a, const Formula &b);

  static Formula make(Kind k, std::string atom, bool pos, Character ch,
                      Formula a, Formula b);

private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind;
  std::string atom;
  bool positive;
  Character ch;
  Formula a, b;
  std::size_t hash;
};

Formula lit(const std::string &atom, bool positive = true);
Formula top();
Formula bot();
Formula disj(const Formula &a, const Formula &b);
Formula conj(const Formula &a, const Formula &b);
Formula gdia(const Character &c, const Formula &f);
Formula gbox(const Character &c, const Formula &f);
Formula sdia(const Formula &f);
Formula sbox(const Formula &f);
Formula cdia(const Formula &f);
Formula cbox(const Formula &f);
Formula odia(const Formula &f);
Formula obox(const Formula &f);

// Left folds; the empty disjunction is bot and the empty conjunction top.
Formula big_or(const std::vector<Formula> &fs);
Formula big_and(const std::vector<Formula> &fs);

// ~phi -> psi in NNF.
Formula implies(const Formula &a, const Formula &b);

Formula negate(const Formula &f);
std::size_t complexity(const Formula &f);

struct Literal {
  std::string atom;
  bool positive;
  auto operator<=>(const Literal &) const = default;
};
std::set<Literal> literals(const Formula &f);
std::set<std::string> atoms(const Formula &f);

// Neutral for formulas built only from literals, constants and connectives.
// Throws std::invalid_argument for a mixed tree.
Family family(const Formula &f);

// Characters of grammar modalities occurring in f.
std::set<Character> characters(const Formula &f);

std::string print(const Formula &f);

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &msg, std::size_t offset);
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

Formula parse(const std::string &text);

// Splits "phi -> psi" at its top-level arrow.
std::pair<Formula, Formula> parse_implication(const std::string &text);

bool is_identifier(const std::string &s);

} // namespace refine

template <> struct std::hash<refine::Formula> {
  std::size_t operator()(const refine::Formula &f) const { return f.hash(); }
};
