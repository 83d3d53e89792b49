#include "refine/nested.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <regex>

namespace refine {

namespace {

std::optional<std::vector<long>> address_parts(const Label &l) {
  static const std::regex re(R"(w0(\.[1-9][0-9]*)*)");
  if (!std::regex_match(l, re))
    return std::nullopt;
  std::vector<long> out;
  std::size_t i = 2;
  while (i < l.size()) {
    std::size_t j = l.find('.', i + 1);
    out.push_back(std::stol(l.substr(i + 1, j == std::string::npos ? j : j - i - 1)));
    i = j == std::string::npos ? l.size() : j;
  }
  return out;
}

NestedSequent build(const Sequent &s, const Label &v,
                    const std::map<Label, std::vector<std::pair<Character, Label>>> &kids) {
  NestedSequent x;
  for (const auto &lf : s.formulas())
    if (lf.label == v)
      x.formulas.push_back(lf.formula);
  auto it = kids.find(v);
  if (it != kids.end())
    for (const auto &[c, u] : it->second)
      x.children.push_back({c, build(s, u, kids)});
  return x;
}

void flatten(const NestedSequent &x, const Label &here, std::vector<RelAtom> &atoms,
             std::vector<LabelledFormula> &fs) {
  for (const auto &f : x.formulas)
    fs.push_back({here, f});
  for (std::size_t i = 0; i < x.children.size(); ++i) {
    Label child = here + "." + std::to_string(i + 1);
    atoms.push_back(RelAtom::grel(x.children[i].first, here, child));
    flatten(x.children[i].second, child, atoms, fs);
  }
}

} // namespace

bool address_less(const Label &a, const Label &b) {
  auto pa = address_parts(a), pb = address_parts(b);
  if (pa && pb)
    return *pa < *pb;
  return label_less(a, b);
}

NestedSequent to_nested(const Sequent &s) {
  for (const auto &a : s.atoms())
    if (a.kind != RelAtom::Kind::G)
      throw NestedError(NestedError::Kind::NotTree, "nested sequents carry grammar atoms only");
  if (s.labels().empty())
    return {};
  auto root = tree_root(s);
  if (!root)
    throw NestedError(NestedError::Kind::NotTree,
                      "not a labelled tree sequent: " + to_string(s));
  std::map<Label, std::vector<std::pair<Character, Label>>> kids;
  for (const auto &a : s.atoms())
    kids[a.from].push_back({a.ch, a.to});
  for (auto &[v, cs] : kids)
    std::sort(cs.begin(), cs.end(),
              [](const auto &x, const auto &y) { return address_less(x.second, y.second); });
  return build(s, *root, kids);
}

Sequent to_labelled(const NestedSequent &x, const Label &root) {
  std::vector<RelAtom> atoms;
  std::vector<LabelledFormula> fs;
  flatten(x, root, atoms, fs);
  return Sequent(std::move(atoms), std::move(fs));
}

std::string print_nested(const NestedSequent &x) {
  std::string out;
  auto sep = [&] {
    if (!out.empty())
      out += ", ";
  };
  for (const auto &f : x.formulas) {
    sep();
    out += print(f);
  }
  for (const auto &[c, y] : x.children) {
    sep();
    out += "(" + c.name() + "){" + print_nested(y) + "}";
  }
  return out;
}

namespace {

class NestedParser {
public:
  explicit NestedParser(const std::string &t) : text_(t) {}

  NestedSequent run() {
    NestedSequent x = items('\0');
    if (pos_ != text_.size())
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return x;
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw NestedError(NestedError::Kind::Syntax,
                      msg + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  // "(x){" starting at pos_, or nothing.
  std::optional<Character> child_head() {
    static const std::regex re(R"(^\(\s*([A-Za-z_][A-Za-z0-9_]*'?)\s*\)\s*\{)");
    std::smatch m;
    auto begin = text_.cbegin() + static_cast<std::ptrdiff_t>(pos_);
    if (!std::regex_search(begin, text_.cend(), m, re))
      return std::nullopt;
    pos_ += static_cast<std::size_t>(m.length(0));
    return parse_character(m[1].str());
  }

  NestedSequent items(char close) {
    NestedSequent x;
    skip();
    if (pos_ == text_.size() || text_[pos_] == close)
      return finish(x, close);
    while (true) {
      skip();
      if (auto c = child_head()) {
        NestedSequent y = items('}');
        x.children.push_back({*c, std::move(y)});
      } else {
        std::size_t start = pos_;
        int depth = 0;
        while (pos_ < text_.size()) {
          char ch = text_[pos_];
          if (ch == '(' || ch == '[' || ch == '<')
            depth += ch == '(';
          if (ch == ')')
            --depth;
          if (depth == 0 && (ch == ',' || ch == '}'))
            break;
          ++pos_;
        }
        try {
          x.formulas.push_back(parse(text_.substr(start, pos_ - start)));
        } catch (const ParseError &e) {
          pos_ = start + e.offset();
          fail(e.what());
        }
      }
      skip();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      return finish(x, close);
    }
  }

  NestedSequent finish(NestedSequent &x, char close) {
    if (close) {
      if (pos_ >= text_.size() || text_[pos_] != close)
        fail("missing '}'");
      ++pos_;
    }
    std::sort(x.formulas.begin(), x.formulas.end());
    return std::move(x);
  }

  const std::string &text_;
  std::size_t pos_ = 0;
};

} // namespace

NestedSequent parse_nested(const std::string &text) { return NestedParser(text).run(); }

namespace {

struct Addresser {
  std::map<Label, Label> name;       // original label -> address
  std::map<Label, long> next_child;  // address -> next free index

  Label assign(const Label &parent_addr) {
    long i = ++next_child[parent_addr];
    return parent_addr + "." + std::to_string(i);
  }
};

Label rename(const Addresser &a, const Label &l) {
  auto it = a.name.find(l);
  if (it == a.name.end())
    throw NestedError(NestedError::Kind::NotTreeProof, "label " + l + " has no address");
  return it->second;
}

Witness rename(const Addresser &a, const Witness &w) {
  Witness out = w;
  if (w.principal)
    out.principal->label = rename(a, w.principal->label);
  if (w.fresh)
    out.fresh = rename(a, *w.fresh);
  if (w.target)
    out.target = rename(a, *w.target);
  if (w.via)
    out.via = rename(a, *w.via);
  if (w.path)
    for (auto &l : out.path->labels)
      l = rename(a, l);
  for (auto &l : out.roots)
    l = rename(a, l);
  return out;
}

Sequent rename(const Addresser &a, const Sequent &s) {
  std::vector<RelAtom> atoms;
  for (const auto &r : s.atoms())
    atoms.push_back(RelAtom::grel(r.ch, rename(a, r.from), rename(a, r.to)));
  std::vector<LabelledFormula> fs;
  for (const auto &lf : s.formulas())
    fs.push_back({rename(a, lf.label), lf.formula});
  return Sequent(std::move(atoms), std::move(fs));
}

NestedProof translate(const Proof &p, Addresser a) {
  const Sequent &s = p.conclusion;
  NestedSequent x;
  try {
    // New labels are children of known ones (the tree grows upward only at
    // the leaves), so a parent always has an address before its child.
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto &r : s.atoms())
        if (a.name.count(r.from) && !a.name.count(r.to)) {
          a.name[r.to] = a.assign(a.name[r.from]);
          grew = true;
        }
    }
    for (const auto &l : s.labels_in_order())
      if (!a.name.count(l))
        throw NestedError(NestedError::Kind::NotTreeProof,
                          "label " + l + " is not below the root in " + to_string(s));
    x = to_nested(rename(a, s));
  } catch (const NestedError &e) {
    throw NestedError(NestedError::Kind::NotTreeProof, e.what());
  }
  Addresser named = a;
  if (p.witness.fresh && !named.name.count(*p.witness.fresh)) {
    // the eigenvariable first appears in the premise, where it receives
    // exactly this address
    for (const auto &q : p.premises)
      for (const auto &r : q.conclusion.atoms())
        if (r.to == *p.witness.fresh && named.name.count(r.from) &&
            !named.name.count(r.to))
          named.name[r.to] = named.assign(named.name[r.from]);
  }
  NestedProof out{p.rule, std::move(x), rename(named, p.witness), {}};
  for (const auto &q : p.premises)
    out.premises.push_back(translate(q, a));
  return out;
}

} // namespace

NestedProof to_nested_proof(const Proof &p) {
  auto root = tree_root(p.conclusion);
  if (!root) {
    if (!p.conclusion.labels().empty())
      throw NestedError(NestedError::Kind::NotTreeProof,
                        "end sequent is not a tree: " + to_string(p.conclusion));
  }
  Addresser a;
  if (root) {
    a.name[*root] = "w0";
    // number the end sequent in its own child order
    std::function<void(const Label &)> number = [&](const Label &v) {
      std::vector<std::pair<Character, Label>> kids;
      for (const auto &r : p.conclusion.atoms())
        if (r.from == v)
          kids.push_back({r.ch, r.to});
      std::sort(kids.begin(), kids.end(),
                [](const auto &x, const auto &y) { return address_less(x.second, y.second); });
      for (const auto &[c, u] : kids) {
        a.name[u] = a.assign(a.name[v]);
        number(u);
      }
    };
    number(*root);
  }
  return translate(p, a);
}

Proof to_labelled_proof(const NestedProof &p) {
  Proof out{p.rule, to_labelled(p.conclusion, "w0"), p.witness, {}};
  for (const auto &q : p.premises)
    out.premises.push_back(to_labelled_proof(q));
  return out;
}

} // namespace refine
