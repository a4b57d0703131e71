#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "luset/lattice.hpp"

namespace luset {

using TypeVar = std::string;

// A join of type variables; the empty join is bottom.
struct CanonType {
  std::vector<TypeVar> vars;  // sorted, unique

  CanonType() = default;
  CanonType(std::initializer_list<TypeVar> vs);
  static CanonType of(std::vector<TypeVar> vs);
  static CanonType var(TypeVar v) { return CanonType{std::move(v)}; }

  bool is_bottom() const { return vars.empty(); }
  bool contains(const TypeVar& v) const;
  bool subset_of(const CanonType& other) const;
  CanonType join(const CanonType& other) const;
  CanonType without(const CanonType& other) const;

  auto operator<=>(const CanonType&) const = default;
  bool operator==(const CanonType&) const = default;
};

struct Constraint {
  CanonType lhs;
  CanonType rhs;

  auto operator<=>(const Constraint&) const = default;
  bool operator==(const Constraint&) const = default;
};

// Canonical constraint sets: variables of the rhs are absorbed from the lhs
// (a join below a type it contains) and constraints with a bottom lhs are dropped.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(std::initializer_list<Constraint> cs);

  void add(Constraint c);
  void add(const ConstraintSet& other);
  bool erase(const Constraint& c) { return items_.erase(c) > 0; }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  bool contains(const Constraint& c) const { return items_.count(c) > 0; }
  std::set<TypeVar> vars() const;

  bool operator==(const ConstraintSet&) const = default;

 private:
  std::set<Constraint> items_;
};

ConstraintSet unite(const ConstraintSet& a, const ConstraintSet& b);

// A canonical refined type t{|rho|}.
struct SecType {
  CanonType type;
  ConstraintSet refinement;

  static SecType bottom() { return {}; }
  static SecType var(TypeVar v) { return {CanonType::var(std::move(v)), {}}; }

  bool operator==(const SecType&) const = default;
};

SecType join(const SecType& a, const SecType& b);

// Raw security types, before canonicalisation.
struct SecTypeRaw {
  enum class Kind { Bot, Var, Lub, Refine };
  Kind kind = Kind::Bot;
  TypeVar name;
  std::vector<SecTypeRaw> children;                            // Lub: two operands; Refine: the refined type
  std::vector<std::pair<SecTypeRaw, SecTypeRaw>> constraints;  // Refine

  static SecTypeRaw bot() { return {}; }
  static SecTypeRaw var(TypeVar v);
  static SecTypeRaw lub(SecTypeRaw a, SecTypeRaw b);
  static SecTypeRaw refine(SecTypeRaw t, std::vector<std::pair<SecTypeRaw, SecTypeRaw>> rho);
};

SecType canon(const SecTypeRaw& t);
// {a{|r1|} <= b{|r2|}} = {a <= b} u r1 u r2
ConstraintSet canon_constraint(const SecTypeRaw& lhs, const SecTypeRaw& rhs);

using Substitution = std::map<TypeVar, SecType>;

SecType substitute(const CanonType& t, const Substitution& sub);
SecType substitute(const SecType& t, const Substitution& sub);
ConstraintSet substitute(const Constraint& c, const Substitution& sub);
ConstraintSet substitute(const ConstraintSet& rho, const Substitution& sub);

using Ground = std::map<TypeVar, Level>;

Level eval_ground(const CanonType& t, const Ground& s, const Lattice& L);
bool satisfies(const ConstraintSet& rho, const Ground& s, const Lattice& L);
std::vector<Constraint> violations(const ConstraintSet& rho, const Ground& s, const Lattice& L);

struct LeastSolution {
  Ground assignment;               // the fixpoint, even when unsatisfiable
  std::vector<Constraint> violated;

  bool sat() const { return violated.empty(); }
};

LeastSolution least_solution(const ConstraintSet& rho, const Ground& fixed, const Lattice& L);

// Rendering. Variables are ordered by role for display: clock, inputs,
// outputs, then the rest.
bool display_less(const TypeVar& a, const TypeVar& b);
std::string render(const CanonType& t, bool ascii = false);
std::string render(const Constraint& c, bool ascii = false);
std::string render(const ConstraintSet& rho, bool ascii = false);
std::string render(const SecType& t, bool ascii = false);
std::string render(const SecTypeRaw& t, bool ascii = false);

}  // namespace luset
