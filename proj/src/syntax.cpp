#include "refine/syntax.hpp"

#include <cctype>
#include <functional>

namespace refine {

Character parse_character(const std::string &text) {
  if (text.empty())
    throw std::invalid_argument("empty character");
  bool back = text.back() == '\'';
  std::string base = back ? text.substr(0, text.size() - 1) : text;
  if (!is_identifier(base))
    throw std::invalid_argument("bad character name '" + text + "'");
  return Character(base, back);
}

Str converse(const Str &s) {
  Str out;
  out.reserve(s.size());
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    out.push_back(it->converse());
  return out;
}

std::string to_string(const Str &s) {
  if (s.empty())
    return "eps";
  std::string out;
  for (const auto &c : s) {
    if (!out.empty())
      out += ' ';
    out += c.name();
  }
  return out;
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const Formula &null_formula() {
  static const Formula f;
  return f;
}

const Character &null_character() {
  static const Character c;
  return c;
}

const std::string &empty_string() {
  static const std::string s;
  return s;
}

} // namespace

Formula Formula::make(Kind k, std::string atom, bool pos, Character ch,
                      Formula a, Formula b) {
  std::size_t h = static_cast<std::size_t>(k) * 1000003u;
  h = mix(h, std::hash<std::string>{}(atom));
  h = mix(h, pos ? 1 : 2);
  h = mix(h, std::hash<std::string>{}(ch.base) + (ch.backward ? 7 : 0));
  if (a.valid())
    h = mix(h, a.hash());
  if (b.valid())
    h = mix(h, b.hash());
  auto n = std::make_shared<const Node>(
      Node{k, std::move(atom), pos, std::move(ch), std::move(a), std::move(b), h});
  return Formula(std::move(n));
}

Kind Formula::kind() const { return node_->kind; }
const std::string &Formula::atom() const {
  return node_ ? node_->atom : empty_string();
}
bool Formula::positive() const { return node_->positive; }
const Character &Formula::character() const {
  return node_ ? node_->ch : null_character();
}
const Formula &Formula::left() const {
  return node_ ? node_->a : null_formula();
}
const Formula &Formula::right() const {
  return node_ ? node_->b : null_formula();
}
std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }

bool Formula::is_modal() const {
  switch (kind()) {
  case Kind::GDia:
  case Kind::GBox:
  case Kind::SDia:
  case Kind::SBox:
  case Kind::CDia:
  case Kind::CBox:
  case Kind::ODia:
  case Kind::OBox:
    return true;
  default:
    return false;
  }
}

bool operator==(const Formula &a, const Formula &b) {
  if (a.node_ == b.node_)
    return true;
  if (!a.node_ || !b.node_)
    return false;
  if (a.hash() != b.hash())
    return false;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Formula &a, const Formula &b) {
  if (a.node_ == b.node_)
    return std::strong_ordering::equal;
  if (!a.node_)
    return std::strong_ordering::less;
  if (!b.node_)
    return std::strong_ordering::greater;
  const Node &x = *a.node_;
  const Node &y = *b.node_;
  if (auto c = x.kind <=> y.kind; c != 0)
    return c;
  switch (x.kind) {
  case Kind::Lit:
    if (auto c = x.atom <=> y.atom; c != 0)
      return c;
    return x.positive <=> y.positive;
  case Kind::Top:
  case Kind::Bot:
    return std::strong_ordering::equal;
  case Kind::Or:
  case Kind::And:
    if (auto c = x.a <=> y.a; c != 0)
      return c;
    return x.b <=> y.b;
  case Kind::GDia:
  case Kind::GBox:
    if (auto c = x.ch <=> y.ch; c != 0)
      return c;
    return x.a <=> y.a;
  default:
    return x.a <=> y.a;
  }
}

Formula lit(const std::string &atom, bool positive) {
  return Formula::make(Kind::Lit, atom, positive, {}, {}, {});
}
Formula top() {
  static const Formula t = Formula::make(Kind::Top, "", true, {}, {}, {});
  return t;
}
Formula bot() {
  static const Formula f = Formula::make(Kind::Bot, "", true, {}, {}, {});
  return f;
}
Formula disj(const Formula &a, const Formula &b) {
  return Formula::make(Kind::Or, "", true, {}, a, b);
}
Formula conj(const Formula &a, const Formula &b) {
  return Formula::make(Kind::And, "", true, {}, a, b);
}
Formula gdia(const Character &c, const Formula &f) {
  return Formula::make(Kind::GDia, "", true, c, f, {});
}
Formula gbox(const Character &c, const Formula &f) {
  return Formula::make(Kind::GBox, "", true, c, f, {});
}
Formula sdia(const Formula &f) { return Formula::make(Kind::SDia, "", true, {}, f, {}); }
Formula sbox(const Formula &f) { return Formula::make(Kind::SBox, "", true, {}, f, {}); }
Formula cdia(const Formula &f) { return Formula::make(Kind::CDia, "", true, {}, f, {}); }
Formula cbox(const Formula &f) { return Formula::make(Kind::CBox, "", true, {}, f, {}); }
Formula odia(const Formula &f) { return Formula::make(Kind::ODia, "", true, {}, f, {}); }
Formula obox(const Formula &f) { return Formula::make(Kind::OBox, "", true, {}, f, {}); }

Formula big_or(const std::vector<Formula> &fs) {
  if (fs.empty())
    return bot();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i)
    acc = disj(acc, fs[i]);
  return acc;
}

Formula big_and(const std::vector<Formula> &fs) {
  if (fs.empty())
    return top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i)
    acc = conj(acc, fs[i]);
  return acc;
}

Formula implies(const Formula &a, const Formula &b) { return disj(negate(a), b); }

Formula negate(const Formula &f) {
  switch (f.kind()) {
  case Kind::Lit:
    return lit(f.atom(), !f.positive());
  case Kind::Top:
    return bot();
  case Kind::Bot:
    return top();
  case Kind::Or:
    return conj(negate(f.left()), negate(f.right()));
  case Kind::And:
    return disj(negate(f.left()), negate(f.right()));
  case Kind::GDia:
    return gbox(f.character(), negate(f.body()));
  case Kind::GBox:
    return gdia(f.character(), negate(f.body()));
  case Kind::SDia:
    return sbox(negate(f.body()));
  case Kind::SBox:
    return sdia(negate(f.body()));
  case Kind::CDia:
    return cbox(negate(f.body()));
  case Kind::CBox:
    return cdia(negate(f.body()));
  case Kind::ODia:
    return obox(negate(f.body()));
  case Kind::OBox:
    return odia(negate(f.body()));
  }
  throw std::logic_error("negate: bad kind");
}

std::size_t complexity(const Formula &f) {
  switch (f.kind()) {
  case Kind::Lit:
    return 0;
  case Kind::Top:
  case Kind::Bot:
    return 1;
  case Kind::Or:
  case Kind::And:
    return std::max(complexity(f.left()), complexity(f.right())) + 1;
  default:
    return complexity(f.body()) + 1;
  }
}

static void collect_literals(const Formula &f, std::set<Literal> &out) {
  switch (f.kind()) {
  case Kind::Lit:
    out.insert({f.atom(), f.positive()});
    return;
  case Kind::Top:
  case Kind::Bot:
    return;
  case Kind::Or:
  case Kind::And:
    collect_literals(f.left(), out);
    collect_literals(f.right(), out);
    return;
  default:
    collect_literals(f.body(), out);
  }
}

std::set<Literal> literals(const Formula &f) {
  std::set<Literal> out;
  collect_literals(f, out);
  return out;
}

std::set<std::string> atoms(const Formula &f) {
  std::set<std::string> out;
  for (const auto &l : literals(f))
    out.insert(l.atom);
  return out;
}

static Family own_family(Kind k) {
  switch (k) {
  case Kind::GDia:
  case Kind::GBox:
    return Family::Grammar;
  case Kind::SDia:
  case Kind::SBox:
  case Kind::CDia:
  case Kind::CBox:
  case Kind::ODia:
  case Kind::OBox:
    return Family::Stit;
  default:
    return Family::Neutral;
  }
}

static Family join(Family a, Family b) {
  if (a == Family::Neutral)
    return b;
  if (b == Family::Neutral || a == b)
    return a;
  throw std::invalid_argument("formula mixes grammar and STIT modalities");
}

Family family(const Formula &f) {
  Family mine = own_family(f.kind());
  if (f.left().valid())
    mine = join(mine, family(f.left()));
  if (f.right().valid())
    mine = join(mine, family(f.right()));
  return mine;
}

static void collect_chars(const Formula &f, std::set<Character> &out) {
  if (f.kind() == Kind::GDia || f.kind() == Kind::GBox)
    out.insert(f.character());
  if (f.left().valid())
    collect_chars(f.left(), out);
  if (f.right().valid())
    collect_chars(f.right(), out);
}

std::set<Character> characters(const Formula &f) {
  std::set<Character> out;
  collect_chars(f, out);
  return out;
}

// Printing. Precedence levels: 1 = |, 2 = &, 3 = unary.
namespace {

int level(const Formula &f) {
  switch (f.kind()) {
  case Kind::Or:
    return 1;
  case Kind::And:
    return 2;
  default:
    return 3;
  }
}

void print_into(const Formula &f, std::string &out);

void print_operand(const Formula &f, int min_level, std::string &out) {
  if (level(f) < min_level) {
    out += '(';
    print_into(f, out);
    out += ')';
  } else {
    print_into(f, out);
  }
}

const char *stit_prefix(Kind k) {
  switch (k) {
  case Kind::SDia: return "<*>";
  case Kind::SBox: return "[*]";
  case Kind::CDia: return "<0>";
  case Kind::CBox: return "[0]";
  case Kind::ODia: return "<o>";
  case Kind::OBox: return "[o]";
  default: return "";
  }
}

void print_into(const Formula &f, std::string &out) {
  switch (f.kind()) {
  case Kind::Lit:
    if (!f.positive())
      out += '~';
    out += f.atom();
    return;
  case Kind::Top:
    out += "top";
    return;
  case Kind::Bot:
    out += "bot";
    return;
  case Kind::Or:
  case Kind::And: {
    int l = level(f);
    // left-associative: the left operand may share the level, the right
    // operand must bind tighter
    print_operand(f.left(), l, out);
    out += f.kind() == Kind::Or ? " | " : " & ";
    print_operand(f.right(), l + 1, out);
    return;
  }
  case Kind::GDia:
    out += '<' + f.character().name() + '>';
    print_operand(f.body(), 3, out);
    return;
  case Kind::GBox:
    out += '[' + f.character().name() + ']';
    print_operand(f.body(), 3, out);
    return;
  default:
    out += stit_prefix(f.kind());
    print_operand(f.body(), 3, out);
  }
}

} // namespace

std::string print(const Formula &f) {
  std::string out;
  print_into(f, out);
  return out;
}

ParseError::ParseError(const std::string &msg, std::size_t offset)
    : std::runtime_error(msg + " at offset " + std::to_string(offset)),
      offset_(offset) {}

bool is_identifier(const std::string &s) {
  if (s.empty())
    return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

namespace {

class Parser {
public:
  explicit Parser(const std::string &t) : text_(t) {}

  Formula formula() {
    Formula f = arrow();
    skip();
    if (pos_ != text_.size())
      throw ParseError("unexpected input", pos_);
    return f;
  }

  std::pair<Formula, Formula> implication() {
    Formula lhs = disjunction();
    skip();
    if (!eat("->"))
      throw ParseError("expected '->'", pos_);
    Formula rhs = arrow();
    skip();
    if (pos_ != text_.size())
      throw ParseError("unexpected input", pos_);
    return {lhs, rhs};
  }

private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(const char *tok) {
    skip();
    std::size_t n = std::char_traits<char>::length(tok);
    if (text_.compare(pos_, n, tok) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  Formula arrow() {
    Formula lhs = disjunction();
    if (eat("->")) {
      Formula rhs = arrow();
      return implies(lhs, rhs);
    }
    return lhs;
  }

  Formula disjunction() {
    Formula acc = conjunction();
    while (eat("|"))
      acc = disj(acc, conjunction());
    return acc;
  }

  Formula conjunction() {
    Formula acc = unary();
    while (eat("&"))
      acc = conj(acc, unary());
    return acc;
  }

  std::string identifier() {
    std::size_t start = pos_;
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  void note_family(Family f, std::size_t at) {
    if (f == Family::Neutral)
      return;
    if (family_ == Family::Neutral) {
      family_ = f;
      return;
    }
    if (family_ != f)
      throw ParseError("modality mixes grammar and STIT families", at);
  }

  Formula modal(bool box, std::size_t at) {
    char close = box ? ']' : '>';
    skip();
    std::size_t idx_at = pos_;
    Formula body;
    if (pos_ < text_.size() && (text_[pos_] == '*' || text_[pos_] == '0')) {
      char c = text_[pos_++];
      if (!eat(close == ']' ? "]" : ">"))
        throw ParseError(std::string("expected '") + close + "'", pos_);
      note_family(Family::Stit, at);
      body = unary();
      if (c == '*')
        return box ? sbox(body) : sdia(body);
      return box ? cbox(body) : cdia(body);
    }
    std::string name = identifier();
    if (name.empty())
      throw ParseError("expected modality index", idx_at);
    if (name == "o") {
      if (!eat(close == ']' ? "]" : ">"))
        throw ParseError(std::string("expected '") + close + "'", pos_);
      note_family(Family::Stit, at);
      body = unary();
      return box ? obox(body) : odia(body);
    }
    bool back = false;
    if (pos_ < text_.size() && text_[pos_] == '\'') {
      back = true;
      ++pos_;
    }
    if (!eat(close == ']' ? "]" : ">"))
      throw ParseError(std::string("expected '") + close + "'", pos_);
    note_family(Family::Grammar, at);
    body = unary();
    Character c(name, back);
    return box ? gbox(c, body) : gdia(c, body);
  }

  Formula unary() {
    skip();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of input", pos_);
    std::size_t at = pos_;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Formula f = arrow();
      if (!eat(")"))
        throw ParseError("expected ')'", pos_);
      return f;
    }
    if (c == '~') {
      ++pos_;
      skip();
      std::size_t id_at = pos_;
      std::string name = identifier();
      if (name.empty() || name == "top" || name == "bot")
        throw ParseError("negation applies only to atoms", id_at);
      return lit(name, false);
    }
    if (c == '[' || c == '<') {
      ++pos_;
      return modal(c == '[', at);
    }
    std::string name = identifier();
    if (name.empty())
      throw ParseError(std::string("unexpected character '") + c + "'", at);
    if (name == "top")
      return top();
    if (name == "bot")
      return bot();
    return lit(name, true);
  }

  const std::string &text_;
  std::size_t pos_ = 0;
  Family family_ = Family::Neutral;
};

} // namespace

Formula parse(const std::string &text) { return Parser(text).formula(); }

std::pair<Formula, Formula> parse_implication(const std::string &text) {
  return Parser(text).implication();
}

} // namespace refine
