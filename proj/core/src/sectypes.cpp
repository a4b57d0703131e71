#include "luset/sectypes.hpp"

#include <algorithm>
#include <tuple>

#include "luset/error.hpp"

namespace luset {

CanonType::CanonType(std::initializer_list<TypeVar> vs) : vars(vs) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
}

CanonType CanonType::of(std::vector<TypeVar> vs) {
  CanonType t;
  t.vars = std::move(vs);
  std::sort(t.vars.begin(), t.vars.end());
  t.vars.erase(std::unique(t.vars.begin(), t.vars.end()), t.vars.end());
  return t;
}

bool CanonType::contains(const TypeVar& v) const {
  return std::binary_search(vars.begin(), vars.end(), v);
}

bool CanonType::subset_of(const CanonType& other) const {
  return std::includes(other.vars.begin(), other.vars.end(), vars.begin(), vars.end());
}

CanonType CanonType::join(const CanonType& other) const {
  CanonType t;
  std::set_union(vars.begin(), vars.end(), other.vars.begin(), other.vars.end(),
                 std::back_inserter(t.vars));
  return t;
}

CanonType CanonType::without(const CanonType& other) const {
  CanonType t;
  std::set_difference(vars.begin(), vars.end(), other.vars.begin(), other.vars.end(),
                      std::back_inserter(t.vars));
  return t;
}

ConstraintSet::ConstraintSet(std::initializer_list<Constraint> cs) {
  for (const auto& c : cs) add(c);
}

void ConstraintSet::add(Constraint c) {
  c.lhs = c.lhs.without(c.rhs);
  if (c.lhs.is_bottom()) return;
  items_.insert(std::move(c));
}

void ConstraintSet::add(const ConstraintSet& other) {
  for (const auto& c : other) items_.insert(c);
}

std::set<TypeVar> ConstraintSet::vars() const {
  std::set<TypeVar> out;
  for (const auto& c : items_) {
    out.insert(c.lhs.vars.begin(), c.lhs.vars.end());
    out.insert(c.rhs.vars.begin(), c.rhs.vars.end());
  }
  return out;
}

ConstraintSet unite(const ConstraintSet& a, const ConstraintSet& b) {
  ConstraintSet out = a;
  out.add(b);
  return out;
}

SecType join(const SecType& a, const SecType& b) {
  return {a.type.join(b.type), unite(a.refinement, b.refinement)};
}

SecTypeRaw SecTypeRaw::var(TypeVar v) {
  SecTypeRaw t;
  t.kind = Kind::Var;
  t.name = std::move(v);
  return t;
}

SecTypeRaw SecTypeRaw::lub(SecTypeRaw a, SecTypeRaw b) {
  SecTypeRaw t;
  t.kind = Kind::Lub;
  t.children.push_back(std::move(a));
  t.children.push_back(std::move(b));
  return t;
}

SecTypeRaw SecTypeRaw::refine(SecTypeRaw base, std::vector<std::pair<SecTypeRaw, SecTypeRaw>> rho) {
  SecTypeRaw t;
  t.kind = Kind::Refine;
  t.children.push_back(std::move(base));
  t.constraints = std::move(rho);
  return t;
}

SecType canon(const SecTypeRaw& t) {
  switch (t.kind) {
    case SecTypeRaw::Kind::Bot: return SecType::bottom();
    case SecTypeRaw::Kind::Var: return SecType::var(t.name);
    case SecTypeRaw::Kind::Lub: return join(canon(t.children[0]), canon(t.children[1]));
    case SecTypeRaw::Kind::Refine: {
      SecType out = canon(t.children[0]);
      for (const auto& [l, r] : t.constraints) out.refinement.add(canon_constraint(l, r));
      return out;
    }
  }
  return SecType::bottom();
}

ConstraintSet canon_constraint(const SecTypeRaw& lhs, const SecTypeRaw& rhs) {
  SecType l = canon(lhs);
  SecType r = canon(rhs);
  ConstraintSet out = unite(l.refinement, r.refinement);
  out.add(Constraint{l.type, r.type});
  return out;
}

SecType substitute(const CanonType& t, const Substitution& sub) {
  SecType out;
  for (const auto& v : t.vars) {
    auto it = sub.find(v);
    out = join(out, it == sub.end() ? SecType::var(v) : it->second);
  }
  return out;
}

SecType substitute(const SecType& t, const Substitution& sub) {
  SecType out = substitute(t.type, sub);
  out.refinement.add(substitute(t.refinement, sub));
  return out;
}

ConstraintSet substitute(const Constraint& c, const Substitution& sub) {
  SecType l = substitute(c.lhs, sub);
  SecType r = substitute(c.rhs, sub);
  ConstraintSet out = unite(l.refinement, r.refinement);
  out.add(Constraint{l.type, r.type});
  return out;
}

ConstraintSet substitute(const ConstraintSet& rho, const Substitution& sub) {
  ConstraintSet out;
  for (const auto& c : rho) out.add(substitute(c, sub));
  return out;
}

Level eval_ground(const CanonType& t, const Ground& s, const Lattice& L) {
  Level acc = L.bottom();
  for (const auto& v : t.vars) {
    auto it = s.find(v);
    if (it == s.end()) throw Error(ErrorKind::UnboundTypeVar, "no level assigned to type variable '" + v + "'");
    acc = L.join(acc, it->second);
  }
  return acc;
}

bool satisfies(const ConstraintSet& rho, const Ground& s, const Lattice& L) {
  return std::all_of(rho.begin(), rho.end(), [&](const Constraint& c) {
    return L.leq(eval_ground(c.lhs, s, L), eval_ground(c.rhs, s, L));
  });
}

std::vector<Constraint> violations(const ConstraintSet& rho, const Ground& s, const Lattice& L) {
  std::vector<Constraint> out;
  for (const auto& c : rho)
    if (!L.leq(eval_ground(c.lhs, s, L), eval_ground(c.rhs, s, L))) out.push_back(c);
  return out;
}

LeastSolution least_solution(const ConstraintSet& rho, const Ground& fixed, const Lattice& L) {
  LeastSolution r;
  r.assignment = fixed;
  for (const auto& v : rho.vars()) r.assignment.emplace(v, L.bottom());

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : rho) {
      Level need = eval_ground(c.lhs, r.assignment, L);
      if (L.leq(need, eval_ground(c.rhs, r.assignment, L))) continue;
      auto free = std::find_if(c.rhs.vars.begin(), c.rhs.vars.end(),
                               [&](const TypeVar& v) { return !fixed.count(v); });
      if (free == c.rhs.vars.end()) continue;
      Level& cur = r.assignment[*free];
      cur = L.join(cur, need);
      changed = true;
    }
  }
  r.violated = violations(rho, r.assignment, L);
  return r;
}

namespace {

// Display rank of a variable name by its leading Greek letter.
std::tuple<int, long, std::string> display_key(const TypeVar& v) {
  static const std::pair<std::string, int> ranks[] = {{"γ", 0}, {"α", 1}, {"β", 2}, {"δ", 3}};
  for (const auto& [prefix, rank] : ranks)
    if (v.rfind(prefix, 0) == 0) {
      std::string rest = v.substr(prefix.size());
      long num = -1;
      if (!rest.empty() && std::all_of(rest.begin(), rest.end(), ::isdigit)) num = std::stol(rest);
      return {rank, num, rest};
    }
  return {4, 0, v};
}

std::string ascii_name(const TypeVar& v) {
  static const std::pair<std::string, std::string> map[] = {
      {"α", "a"}, {"β", "b"}, {"γ", "g"}, {"δ", "d"}};
  std::string out = v;
  for (const auto& [from, to] : map)
    for (std::size_t pos; (pos = out.find(from)) != std::string::npos;) out.replace(pos, from.size(), to);
  return out;
}

std::vector<TypeVar> display_sorted(const CanonType& t) {
  std::vector<TypeVar> vs = t.vars;
  std::sort(vs.begin(), vs.end(), display_less);
  return vs;
}

}  // namespace

bool display_less(const TypeVar& a, const TypeVar& b) { return display_key(a) < display_key(b); }

std::string render(const CanonType& t, bool ascii) {
  if (t.is_bottom()) return ascii ? "bot" : "⊥";
  std::string s;
  for (const auto& v : display_sorted(t)) {
    if (!s.empty()) s += ascii ? " lub " : "⊔";
    s += ascii ? ascii_name(v) : v;
  }
  return s;
}

std::string render(const Constraint& c, bool ascii) {
  return render(c.lhs, ascii) + (ascii ? " <= " : " ⊑ ") + render(c.rhs, ascii);
}

std::string render(const ConstraintSet& rho, bool ascii) {
  std::vector<Constraint> cs(rho.begin(), rho.end());
  auto key = [](const Constraint& c) {
    std::vector<std::tuple<int, long, std::string>> k;
    for (const auto& v : display_sorted(c.rhs)) k.push_back(display_key(v));
    k.emplace_back(9, 0, "");
    for (const auto& v : display_sorted(c.lhs)) k.push_back(display_key(v));
    return k;
  };
  std::sort(cs.begin(), cs.end(), [&](const Constraint& a, const Constraint& b) { return key(a) < key(b); });
  std::string s;
  for (const auto& c : cs) {
    if (!s.empty()) s += ", ";
    s += render(c, ascii);
  }
  return s;
}

std::string render(const SecType& t, bool ascii) {
  std::string s = render(t.type, ascii);
  if (!t.refinement.empty()) s += "{| " + render(t.refinement, ascii) + " |}";
  return s;
}

std::string render(const SecTypeRaw& t, bool ascii) {
  switch (t.kind) {
    case SecTypeRaw::Kind::Bot: return ascii ? "bot" : "⊥";
    case SecTypeRaw::Kind::Var: return ascii ? ascii_name(t.name) : t.name;
    case SecTypeRaw::Kind::Lub:
      return "(" + render(t.children[0], ascii) + (ascii ? " lub " : " ⊔ ") + render(t.children[1], ascii) + ")";
    case SecTypeRaw::Kind::Refine: {
      std::string s = render(t.children[0], ascii) + "{|";
      for (std::size_t i = 0; i < t.constraints.size(); ++i) {
        if (i) s += ", ";
        s += render(t.constraints[i].first, ascii) + (ascii ? " <= " : " ⊑ ") +
             render(t.constraints[i].second, ascii);
      }
      return s + "|}";
    }
  }
  return "";
}

}  // namespace luset
