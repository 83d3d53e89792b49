#include "refine/semantics.hpp"

#include <algorithm>

namespace refine {

namespace {

using Rel = std::set<Pair>;

Rel compose(const Rel &a, const Rel &b) {
  std::map<World, std::vector<World>> succ;
  for (const auto &[x, y] : b)
    succ[x].push_back(y);
  Rel out;
  for (const auto &[x, y] : a) {
    auto it = succ.find(y);
    if (it == succ.end())
      continue;
    for (const auto &z : it->second)
      out.insert({x, z});
  }
  return out;
}

Rel diagonal(const std::set<World> &ws) {
  Rel out;
  for (const auto &w : ws)
    out.insert({w, w});
  return out;
}

bool add_all(Rel &into, const Rel &from) {
  std::size_t before = into.size();
  into.insert(from.begin(), from.end());
  return into.size() != before;
}

} // namespace

SigmaModel saturate(const CfcstSystem &s, const SigmaModel &m) {
  SigmaModel out = m;
  std::set<Character> chars = s.alphabet();
  for (const auto &[c, r] : m.relations) {
    chars.insert(c);
    chars.insert(c.converse());
  }
  for (const auto &c : chars)
    out.relations[c];
  Rel diag = diagonal(out.worlds);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto &c : chars) {
      Rel flipped;
      for (const auto &[x, y] : out.relations[c])
        flipped.insert({y, x});
      changed |= add_all(out.relations[c.converse()], flipped);
    }
    for (const auto &p : s.rules()) {
      Rel rs = diag;
      for (const auto &c : p.tail) {
        rs = compose(rs, out.relations[c]);
        if (rs.empty())
          break;
      }
      changed |= add_all(out.relations[p.head], rs);
    }
  }
  return out;
}

bool is_saturated(const CfcstSystem &s, const SigmaModel &m) {
  auto sat = saturate(s, m);
  for (const auto &[c, r] : sat.relations) {
    auto it = m.relations.find(c);
    if (r.empty())
      continue;
    if (it == m.relations.end() || it->second != r)
      return false;
  }
  return true;
}

static bool holds_at(const std::map<std::string, std::set<World>> &v,
                     const std::string &atom, const World &w) {
  auto it = v.find(atom);
  return it != v.end() && it->second.count(w) > 0;
}

bool check_sigma(const SigmaModel &m, const World &w, const Formula &f) {
  if (!m.worlds.count(w))
    throw ModelError("unknown world '" + w + "'");
  switch (f.kind()) {
  case Kind::Lit:
    return holds_at(m.valuation, f.atom(), w) == f.positive();
  case Kind::Top:
    return true;
  case Kind::Bot:
    return false;
  case Kind::Or:
    return check_sigma(m, w, f.left()) || check_sigma(m, w, f.right());
  case Kind::And:
    return check_sigma(m, w, f.left()) && check_sigma(m, w, f.right());
  case Kind::GDia:
  case Kind::GBox: {
    bool dia = f.kind() == Kind::GDia;
    auto it = m.relations.find(f.character());
    if (it == m.relations.end())
      return !dia;
    for (auto p = it->second.lower_bound({w, ""}); p != it->second.end() && p->first == w; ++p) {
      bool v = check_sigma(m, p->second, f.body());
      if (dia && v)
        return true;
      if (!dia && !v)
        return false;
    }
    return !dia;
  }
  default:
    throw ModelError("STIT formula evaluated on a grammar-logic model");
  }
}

bool globally_true(const SigmaModel &m, const Formula &f) {
  return std::all_of(m.worlds.begin(), m.worlds.end(),
                     [&](const World &w) { return check_sigma(m, w, f); });
}

bool check_ds(const DsModel &m, const World &w, const Formula &f) {
  if (!m.worlds.count(w))
    throw ModelError("unknown world '" + w + "'");
  auto over = [&](bool dia, auto &&range) {
    for (const auto &u : range) {
      bool v = check_ds(m, u, f.body());
      if (dia && v)
        return true;
      if (!dia && !v)
        return false;
    }
    return !dia;
  };
  switch (f.kind()) {
  case Kind::Lit:
    return holds_at(m.valuation, f.atom(), w) == f.positive();
  case Kind::Top:
    return true;
  case Kind::Bot:
    return false;
  case Kind::Or:
    return check_ds(m, w, f.left()) || check_ds(m, w, f.right());
  case Kind::And:
    return check_ds(m, w, f.left()) && check_ds(m, w, f.right());
  case Kind::SDia:
  case Kind::SBox:
    return over(f.kind() == Kind::SDia, m.worlds);
  case Kind::CDia:
  case Kind::CBox: {
    std::vector<World> cell;
    for (auto p = m.choice.lower_bound({w, ""}); p != m.choice.end() && p->first == w; ++p)
      cell.push_back(p->second);
    return over(f.kind() == Kind::CDia, cell);
  }
  case Kind::ODia:
  case Kind::OBox:
    return over(f.kind() == Kind::ODia, m.ideal);
  default:
    throw ModelError("grammar-logic formula evaluated on a DS model");
  }
}

bool globally_true(const DsModel &m, const Formula &f) {
  return std::all_of(m.worlds.begin(), m.worlds.end(),
                     [&](const World &w) { return check_ds(m, w, f); });
}

std::vector<std::string> validate_ds(const DsModel &m) {
  std::vector<std::string> out;
  bool in_domain = true;
  for (const auto &[a, b] : m.choice)
    if (!m.worlds.count(a) || !m.worlds.count(b))
      in_domain = false;
  bool refl = std::all_of(m.worlds.begin(), m.worlds.end(),
                          [&](const World &w) { return m.choice.count({w, w}) > 0; });
  bool sym = std::all_of(m.choice.begin(), m.choice.end(),
                         [&](const Pair &p) { return m.choice.count({p.second, p.first}) > 0; });
  Rel twice = compose(m.choice, m.choice);
  bool trans = std::includes(m.choice.begin(), m.choice.end(), twice.begin(), twice.end());
  bool equivalence = in_domain && refl && sym && trans;
  if (!equivalence)
    out.push_back("P");
  if (equivalence && m.k > 0 && choice_classes(m).size() > static_cast<std::size_t>(m.k))
    out.push_back("Ck");
  if (!std::includes(m.worlds.begin(), m.worlds.end(), m.ideal.begin(), m.ideal.end()))
    out.push_back("D1");
  if (m.ideal.empty())
    out.push_back("D2");
  bool closed = true;
  for (const auto &[a, b] : m.choice)
    if (m.ideal.count(a) && !m.ideal.count(b))
      closed = false;
  if (!closed)
    out.push_back("D3");
  return out;
}

std::vector<std::set<World>> choice_classes(const DsModel &m) {
  std::vector<std::set<World>> out;
  std::set<World> done;
  for (const auto &w : m.worlds) {
    if (done.count(w))
      continue;
    std::set<World> cell;
    for (auto p = m.choice.lower_bound({w, ""}); p != m.choice.end() && p->first == w; ++p)
      cell.insert(p->second);
    cell.insert(w);
    done.insert(cell.begin(), cell.end());
    out.push_back(cell);
  }
  return out;
}

std::set<World> ModelGenerator::make_worlds() {
  std::uniform_int_distribution<std::size_t> n(1, std::max<std::size_t>(1, bounds_.max_worlds));
  std::size_t count = n(rng_);
  std::set<World> ws;
  for (std::size_t i = 0; i < count; ++i)
    ws.insert("m" + std::to_string(i));
  return ws;
}

std::map<std::string, std::set<World>>
ModelGenerator::make_valuation(const std::set<World> &ws) {
  std::map<std::string, std::set<World>> v;
  for (const auto &a : bounds_.atoms) {
    auto &set = v[a];
    for (const auto &w : ws)
      if (coin(bounds_.truth_probability))
        set.insert(w);
  }
  return v;
}

SigmaModel ModelGenerator::sigma(const CfcstSystem &s, const std::set<Character> &extra) {
  SigmaModel m;
  m.worlds = make_worlds();
  std::set<Character> chars;
  for (const auto &c : s.alphabet())
    if (!c.backward)
      chars.insert(c);
  for (const auto &c : extra)
    chars.insert(c.backward ? c.converse() : c);
  for (const auto &c : chars) {
    auto &r = m.relations[c];
    for (const auto &a : m.worlds)
      for (const auto &b : m.worlds)
        if (coin(bounds_.edge_probability))
          r.insert({a, b});
  }
  m.valuation = make_valuation(m.worlds);
  return saturate(s, m);
}

DsModel ModelGenerator::ds(int k) {
  DsModel m;
  m.k = k;
  m.worlds = make_worlds();
  std::vector<World> ws(m.worlds.begin(), m.worlds.end());
  std::size_t max_classes = ws.size();
  if (k > 0)
    max_classes = std::min<std::size_t>(max_classes, static_cast<std::size_t>(k));
  std::uniform_int_distribution<std::size_t> pick(0, max_classes - 1);
  std::map<std::size_t, std::vector<World>> classes;
  for (const auto &w : ws)
    classes[pick(rng_)].push_back(w);
  std::vector<std::vector<World>> cells;
  for (auto &[id, c] : classes)
    cells.push_back(c);
  for (const auto &c : cells)
    for (const auto &a : c)
      for (const auto &b : c)
        m.choice.insert({a, b});
  std::uniform_int_distribution<std::size_t> first(0, cells.size() - 1);
  std::size_t forced = first(rng_);
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (i == forced || coin(0.4))
      m.ideal.insert(cells[i].begin(), cells[i].end());
  m.valuation = make_valuation(m.worlds);
  return m;
}

} // namespace refine
