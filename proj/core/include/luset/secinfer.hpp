#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "luset/ast.hpp"
#include "luset/sectypes.hpp"

namespace luset {

// Gamma: program variables (and the distinguished key "base") to security types.
struct TypeEnv {
  std::map<std::string, SecType> vars;

  const SecType& at(const std::string& x) const;
};

struct NodeSignature {
  std::string node;
  std::vector<TypeVar> inputs;   // alpha
  std::vector<TypeVar> outputs;  // beta
  TypeVar clock;                 // gamma
  ConstraintSet constraints;     // rho

  // f(α1,α2) ⇒γ β {| ... |}
  std::string render(bool ascii = false) const;
  // Maps signature variables back to the node's variable names (clock -> base).
  std::map<TypeVar, std::string> var_names(const Node& n) const;
};

using SignatureTable = std::map<std::string, NodeSignature>;

// Deterministic supply of fresh type variables named <prefix><n>.
class FreshTypes {
 public:
  explicit FreshTypes(std::string prefix = "δ", int next = 1) : prefix_(std::move(prefix)), next_(next) {}
  TypeVar fresh() { return prefix_ + std::to_string(next_++); }
  int peek() const { return next_; }

 private:
  std::string prefix_;
  int next_;
};

// One node instantiation inside a body, recorded for the internal call checks.
struct CallSite {
  std::string callee;
  std::vector<SecType> args;
  CanonType clock;
  std::vector<CanonType> outputs;
};

struct TypingContext {
  const SignatureTable& sigs;
  FreshTypes& fresh;
  std::vector<CallSite>* calls = nullptr;
  std::vector<TypeVar>* created = nullptr;  // fresh call-output variables in creation order
};

CanonType type_clock(const TypeEnv& env, const Clock& ck);
std::vector<SecType> type_expr(const TypeEnv& env, const Expr& e, TypingContext& ctx);
std::vector<SecType> type_exprs(const TypeEnv& env, const std::vector<Expr>& es, TypingContext& ctx);
ConstraintSet type_equation(const TypeEnv& env, const Node& node, const Equation& eq, TypingContext& ctx);

// Instantiates a callee signature: inputs by the argument types, outputs by
// the given types and the clock by the call's clock type.
ConstraintSet instantiate(const NodeSignature& sig, const std::vector<SecType>& args,
                          const std::vector<SecType>& outputs, const CanonType& clock, FreshTypes& fresh);

struct Simplified {
  std::vector<CanonType> types;
  ConstraintSet constraints;
};

Simplified simplify(std::vector<CanonType> types, ConstraintSet rho, const std::vector<TypeVar>& locals);

struct NodeTyping {
  NodeSignature signature;
  TypeEnv env;
  ConstraintSet full;             // before local elimination
  std::vector<TypeVar> locals;    // elimination order
  std::vector<CallSite> calls;
};

TypeEnv signature_env(const Node& node, NodeSignature& sig, FreshTypes& fresh,
                      std::vector<TypeVar>& locals);
NodeTyping type_node(const Program& prog, const Node& node, const SignatureTable& sigs);
NodeSignature infer_node_signature(const Program& prog, const Node& node, const SignatureTable& sigs);
SignatureTable infer_signatures(const Program& prog);

// Level assignment for a node interface; labels by variable name.
struct Assignment {
  std::string node;
  std::optional<std::string> base;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;
};

std::vector<Assignment> parse_assignments(std::string_view json_text);
std::vector<Assignment> load_assignments(const std::string& path);

struct CallVerdict {
  std::string caller;
  std::string callee;
  std::size_t site = 0;
  bool secure = true;
  Ground instantiation;  // over the callee's signature variables
  std::vector<Constraint> violated;
  std::vector<CallVerdict> nested;
};

struct NodeVerdict {
  std::string node;
  bool secure = true;
  NodeSignature signature;
  Ground instantiation;                      // over signature variables
  std::map<std::string, std::string> names;  // signature variable -> program variable
  std::vector<Constraint> violated;
  std::vector<CallVerdict> calls;
};

struct Report {
  std::vector<NodeVerdict> nodes;

  bool secure() const;
  std::string text(const Lattice& L, bool ascii = false) const;
  std::string json(const Lattice& L) const;
};

// Ground instantiation of a node's signature variables from an assignment;
// unassigned variables are completed by the least solution of rho.
Ground ground_interface(const Node& node, const NodeSignature& sig, const Assignment& a, const Lattice& L);

Report check_program(const Program& prog, const Lattice& L, const std::vector<Assignment>& assignments);

}  // namespace luset
