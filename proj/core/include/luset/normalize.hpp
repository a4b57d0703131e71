#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "luset/ast.hpp"
#include "luset/secinfer.hpp"
#include "luset/sectypes.hpp"

namespace luset {

struct NewLocal {
  std::string name;
  DataType type = DataType::Int;
  Clock clock;
  TypeVar stvar;
};

struct NormResult {
  std::vector<std::pair<Expr, CanonType>> exprs;
  std::vector<Equation> new_equations;
  std::vector<NewLocal> new_locals;
  ConstraintSet constraints;

  void absorb(NormResult other);
};

// Fresh program variables v1, v2, ... avoiding the names already in use.
class NameSupply {
 public:
  explicit NameSupply(std::set<std::string> taken, int next = 1) : taken_(std::move(taken)), next_(next) {}
  std::string fresh();

 private:
  std::set<std::string> taken_;
  int next_;
};

struct NormContext {
  const Node& node;  // clock annotated
  TypeEnv env;       // grows with the fresh locals
  const SignatureTable& sigs;
  FreshTypes types;
  NameSupply names;
};

NormContext make_context(const Node& node, const SignatureTable& sigs);

// Flattens e into simple expressions. With control set, merge and if are
// kept at the top (their branches may hold further control expressions).
NormResult normalize_expr(const Expr& e, NormContext& ctx, bool control = false);
NormResult normalize_exprs(const std::vector<Expr>& es, NormContext& ctx, bool control = false);

// NLustre equations for one Lustre equation, including the defining ones.
NormResult normalize_equation(const Equation& eq, NormContext& ctx);

// x =ck e0 fby e with e0 not constant, as the xinit/px/x triple.
NormResult init_fby(const std::string& x, const Clock& ck, DataType type, const Expr& e0, const Expr& e,
                    NormContext& ctx);

struct NodeNormInfo {
  std::vector<NewLocal> new_locals;
  ConstraintSet constraints;
};

struct Normalized {
  Program program;
  std::map<std::string, NodeNormInfo> nodes;
};

// Expects a clock annotated program (see infer_clocks); annotates it otherwise.
Normalized normalize_program(const Program& prog);

}  // namespace luset
