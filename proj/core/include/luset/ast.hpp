#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "luset/error.hpp"

namespace luset {

enum class DataType { Int, Bool };

std::string_view to_string(DataType t);

struct Literal {
  DataType type = DataType::Int;
  std::int64_t value = 0;

  static Literal integer(std::int64_t v) { return {DataType::Int, v}; }
  static Literal boolean(bool b) { return {DataType::Bool, b ? 1 : 0}; }
  static Literal default_of(DataType t) { return {t, 0}; }
  bool as_bool() const { return value != 0; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

std::string to_string(const Literal& lit);

struct ClockStep {
  std::string var;
  bool k = true;
  friend bool operator==(const ClockStep&, const ClockStep&) = default;
};

// Base is the empty chain; On(ck, x, k) appends (x, k) to ck.
struct Clock {
  std::vector<ClockStep> steps;

  static Clock base() { return {}; }
  Clock on(std::string var, bool k) const;
  bool is_base() const { return steps.empty(); }
  Clock parent() const;
  const ClockStep& last() const { return steps.back(); }

  friend bool operator==(const Clock&, const Clock&) = default;
};

std::string to_string(const Clock& ck);

enum class UnOp { Not, Neg };
enum class BinOp { Add, Sub, Mul, Div, Mod, And, Or, Xor, Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(UnOp op);
std::string_view to_string(BinOp op);

struct Expr {
  enum class Kind { Const, Var, Unop, Binop, When, Merge, Ite, Fby, Call };

  Kind kind = Kind::Const;
  Literal lit;
  std::string name;  // variable, sampling/merge variable, or callee
  bool k = true;
  UnOp unop = UnOp::Not;
  BinOp binop = BinOp::Add;
  std::vector<Expr> args;      // operands, when/call arguments, ite condition, fby initial flows
  std::vector<Expr> on_true;   // merge/ite
  std::vector<Expr> on_false;  // merge/ite
  std::vector<Expr> next;      // fby delayed flows

  // filled by infer_clocks, one entry per flattened component
  std::vector<Clock> clocks;
  std::vector<DataType> types;
  SourceSpan span;

  static Expr constant(Literal lit);
  static Expr var(std::string name);
  static Expr unary(UnOp op, Expr e);
  static Expr binary(BinOp op, Expr a, Expr b);
  static Expr when(std::vector<Expr> es, std::string x, bool k);
  static Expr merge(std::string x, std::vector<Expr> ts, std::vector<Expr> fs);
  static Expr ite(Expr c, std::vector<Expr> ts, std::vector<Expr> fs);
  static Expr fby(std::vector<Expr> e0s, std::vector<Expr> es);
  static Expr call(std::string f, std::vector<Expr> args);

  // Structural: spans and annotations are ignored.
  friend bool operator==(const Expr& a, const Expr& b);
};

struct Equation {
  enum class Kind { Def, NDef, NFby, NCall };

  Kind kind = Kind::Def;
  std::vector<std::string> lhs;
  Clock clock;
  std::vector<Expr> rhs;  // Def: flows; NDef: [ce]; NFby: [e]; NCall: arguments
  Literal init;           // NFby
  std::string callee;     // NCall
  SourceSpan span;

  static Equation def(std::vector<std::string> xs, std::vector<Expr> es);
  static Equation ndef(std::string x, Clock ck, Expr ce);
  static Equation nfby(std::string x, Clock ck, Literal c, Expr e);
  static Equation ncall(std::vector<std::string> xs, Clock ck, std::string f, std::vector<Expr> es);

  bool is_nlustre() const { return kind != Kind::Def; }

  friend bool operator==(const Equation& a, const Equation& b);
};

struct VarDecl {
  std::string name;
  DataType type = DataType::Int;
  Clock clock;
  SourceSpan span;

  friend bool operator==(const VarDecl& a, const VarDecl& b) {
    return a.name == b.name && a.type == b.type && a.clock == b.clock;
  }
};

struct Node {
  std::string name;
  std::vector<VarDecl> inputs;
  std::vector<VarDecl> outputs;
  std::vector<VarDecl> locals;
  std::vector<Equation> equations;
  SourceSpan span;

  const VarDecl* find(std::string_view var) const;
  bool is_input(std::string_view var) const;

  friend bool operator==(const Node& a, const Node& b);
};

struct Program {
  std::vector<Node> nodes;

  const Node* find(std::string_view name) const;
  Node* find(std::string_view name);

  friend bool operator==(const Program& a, const Program& b) = default;
};

inline constexpr std::string_view kBase = "base";

std::set<std::string> free_vars(const Expr& e);
std::set<std::string> free_vars(const std::vector<Expr>& es);
std::set<std::string> free_vars(const Clock& ck);
std::set<std::string> free_vars(const Equation& eq);
std::set<std::string> defined_vars(const Equation& eq);
std::set<std::string> free_vars(const std::vector<Equation>& eqs);
std::set<std::string> defined_vars(const std::vector<Equation>& eqs);

// Number of flattened components of an expression list; needs callee arities.
std::size_t arity(const Expr& e, const Program& prog);
std::size_t arity(const std::vector<Expr>& es, const Program& prog);

bool is_simple(const Expr& e);
bool is_control(const Expr& e);
bool is_nlustre(const Node& n);
bool is_nlustre(const Program& p);

}  // namespace luset
