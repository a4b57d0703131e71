#include "luset/ast.hpp"

#include <algorithm>
#include <sstream>

namespace luset {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DuplicateNode: return "DuplicateNode";
    case ErrorKind::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrorKind::DuplicateDefinition: return "DuplicateDefinition";
    case ErrorKind::MissingDefinition: return "MissingDefinition";
    case ErrorKind::UndefinedVariable: return "UndefinedVariable";
    case ErrorKind::AssignToInput: return "AssignToInput";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::RecursiveCall: return "RecursiveCall";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::ClockMismatch: return "ClockMismatch";
    case ErrorKind::CausalityCycle: return "CausalityCycle";
    case ErrorKind::ClockedValueMismatch: return "ClockedValueMismatch";
    case ErrorKind::DivByZero: return "DivByZero";
    case ErrorKind::UnboundVar: return "UnboundVar";
    case ErrorKind::UnboundTypeVar: return "UnboundTypeVar";
    case ErrorKind::MultipleDefiningConstraints: return "MultipleDefiningConstraints";
    case ErrorKind::InvalidLattice: return "InvalidLattice";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Error";
}

std::string format(const Diagnostic& d) {
  std::ostringstream os;
  os << (d.span.file.empty() ? "<input>" : d.span.file) << ':' << d.span.line << ':'
     << d.span.col << ": " << d.message;
  return os.str();
}

std::string_view to_string(DataType t) { return t == DataType::Int ? "int" : "bool"; }

std::string to_string(const Literal& lit) {
  if (lit.type == DataType::Bool) return lit.value ? "true" : "false";
  return std::to_string(lit.value);
}

Clock Clock::on(std::string var, bool k) const {
  Clock c = *this;
  c.steps.push_back({std::move(var), k});
  return c;
}

Clock Clock::parent() const {
  Clock c = *this;
  if (!c.steps.empty()) c.steps.pop_back();
  return c;
}

std::string to_string(const Clock& ck) {
  std::string s = "base";
  for (const auto& st : ck.steps) s += (st.k ? " on " : " on not ") + st.var;
  return s;
}

std::string_view to_string(UnOp op) { return op == UnOp::Not ? "not" : "-"; }

std::string_view to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "div";
    case BinOp::Mod: return "mod";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
    case BinOp::Xor: return "xor";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "<>";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
  }
  return "?";
}

Expr Expr::constant(Literal lit) {
  Expr e;
  e.kind = Kind::Const;
  e.lit = lit;
  return e;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(name);
  return e;
}

Expr Expr::unary(UnOp op, Expr a) {
  Expr e;
  e.kind = Kind::Unop;
  e.unop = op;
  e.args.push_back(std::move(a));
  return e;
}

Expr Expr::binary(BinOp op, Expr a, Expr b) {
  Expr e;
  e.kind = Kind::Binop;
  e.binop = op;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

Expr Expr::when(std::vector<Expr> es, std::string x, bool k) {
  Expr e;
  e.kind = Kind::When;
  e.args = std::move(es);
  e.name = std::move(x);
  e.k = k;
  return e;
}

Expr Expr::merge(std::string x, std::vector<Expr> ts, std::vector<Expr> fs) {
  Expr e;
  e.kind = Kind::Merge;
  e.name = std::move(x);
  e.on_true = std::move(ts);
  e.on_false = std::move(fs);
  return e;
}

Expr Expr::ite(Expr c, std::vector<Expr> ts, std::vector<Expr> fs) {
  Expr e;
  e.kind = Kind::Ite;
  e.args.push_back(std::move(c));
  e.on_true = std::move(ts);
  e.on_false = std::move(fs);
  return e;
}

Expr Expr::fby(std::vector<Expr> e0s, std::vector<Expr> es) {
  Expr e;
  e.kind = Kind::Fby;
  e.args = std::move(e0s);
  e.next = std::move(es);
  return e;
}

Expr Expr::call(std::string f, std::vector<Expr> args) {
  Expr e;
  e.kind = Kind::Call;
  e.name = std::move(f);
  e.args = std::move(args);
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Const: return a.lit == b.lit;
    case Expr::Kind::Var: return a.name == b.name;
    case Expr::Kind::Unop: return a.unop == b.unop && a.args == b.args;
    case Expr::Kind::Binop: return a.binop == b.binop && a.args == b.args;
    case Expr::Kind::When: return a.name == b.name && a.k == b.k && a.args == b.args;
    case Expr::Kind::Merge:
      return a.name == b.name && a.on_true == b.on_true && a.on_false == b.on_false;
    case Expr::Kind::Ite:
      return a.args == b.args && a.on_true == b.on_true && a.on_false == b.on_false;
    case Expr::Kind::Fby: return a.args == b.args && a.next == b.next;
    case Expr::Kind::Call: return a.name == b.name && a.args == b.args;
  }
  return false;
}

Equation Equation::def(std::vector<std::string> xs, std::vector<Expr> es) {
  Equation eq;
  eq.kind = Kind::Def;
  eq.lhs = std::move(xs);
  eq.rhs = std::move(es);
  return eq;
}

Equation Equation::ndef(std::string x, Clock ck, Expr ce) {
  Equation eq;
  eq.kind = Kind::NDef;
  eq.lhs = {std::move(x)};
  eq.clock = std::move(ck);
  eq.rhs.push_back(std::move(ce));
  return eq;
}

Equation Equation::nfby(std::string x, Clock ck, Literal c, Expr e) {
  Equation eq;
  eq.kind = Kind::NFby;
  eq.lhs = {std::move(x)};
  eq.clock = std::move(ck);
  eq.init = c;
  eq.rhs.push_back(std::move(e));
  return eq;
}

Equation Equation::ncall(std::vector<std::string> xs, Clock ck, std::string f,
                         std::vector<Expr> es) {
  Equation eq;
  eq.kind = Kind::NCall;
  eq.lhs = std::move(xs);
  eq.clock = std::move(ck);
  eq.callee = std::move(f);
  eq.rhs = std::move(es);
  return eq;
}

bool operator==(const Equation& a, const Equation& b) {
  if (a.kind != b.kind || a.lhs != b.lhs || a.rhs != b.rhs) return false;
  if (a.kind == Equation::Kind::Def) return true;
  if (a.clock != b.clock) return false;
  if (a.kind == Equation::Kind::NFby) return a.init == b.init;
  if (a.kind == Equation::Kind::NCall) return a.callee == b.callee;
  return true;
}

const VarDecl* Node::find(std::string_view var) const {
  for (const auto* group : {&inputs, &outputs, &locals})
    for (const auto& d : *group)
      if (d.name == var) return &d;
  return nullptr;
}

bool Node::is_input(std::string_view var) const {
  return std::any_of(inputs.begin(), inputs.end(),
                     [&](const VarDecl& d) { return d.name == var; });
}

bool operator==(const Node& a, const Node& b) {
  return a.name == b.name && a.inputs == b.inputs && a.outputs == b.outputs &&
         a.locals == b.locals && a.equations == b.equations;
}

const Node* Program::find(std::string_view name) const {
  for (const auto& n : nodes)
    if (n.name == name) return &n;
  return nullptr;
}

Node* Program::find(std::string_view name) {
  for (auto& n : nodes)
    if (n.name == name) return &n;
  return nullptr;
}

namespace {

void collect(const Expr& e, std::set<std::string>& out);

void collect(const std::vector<Expr>& es, std::set<std::string>& out) {
  for (const auto& e : es) collect(e, out);
}

void collect(const Expr& e, std::set<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::Const: break;
    case Expr::Kind::Var: out.insert(e.name); break;
    case Expr::Kind::When:
    case Expr::Kind::Merge:
      out.insert(e.name);
      [[fallthrough]];
    default:
      collect(e.args, out);
      collect(e.on_true, out);
      collect(e.on_false, out);
      collect(e.next, out);
  }
}

}  // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

std::set<std::string> free_vars(const std::vector<Expr>& es) {
  std::set<std::string> out;
  collect(es, out);
  return out;
}

std::set<std::string> free_vars(const Clock& ck) {
  std::set<std::string> out{std::string(kBase)};
  for (const auto& st : ck.steps) out.insert(st.var);
  return out;
}

std::set<std::string> free_vars(const Equation& eq) {
  auto out = free_vars(eq.rhs);
  if (eq.kind != Equation::Kind::Def) out.merge(free_vars(eq.clock));
  for (const auto& x : eq.lhs) out.erase(x);
  return out;
}

std::set<std::string> defined_vars(const Equation& eq) {
  return {eq.lhs.begin(), eq.lhs.end()};
}

std::set<std::string> free_vars(const std::vector<Equation>& eqs) {
  std::set<std::string> out;
  for (const auto& eq : eqs) out.merge(free_vars(eq));
  for (const auto& x : defined_vars(eqs)) out.erase(x);
  return out;
}

std::set<std::string> defined_vars(const std::vector<Equation>& eqs) {
  std::set<std::string> out;
  for (const auto& eq : eqs) out.merge(defined_vars(eq));
  return out;
}

std::size_t arity(const Expr& e, const Program& prog) {
  switch (e.kind) {
    case Expr::Kind::When: return arity(e.args, prog);
    case Expr::Kind::Merge:
    case Expr::Kind::Ite: return arity(e.on_true, prog);
    case Expr::Kind::Fby: return arity(e.args, prog);
    case Expr::Kind::Call: {
      const Node* n = prog.find(e.name);
      return n ? n->outputs.size() : 1;
    }
    default: return 1;
  }
}

std::size_t arity(const std::vector<Expr>& es, const Program& prog) {
  std::size_t n = 0;
  for (const auto& e : es) n += arity(e, prog);
  return n;
}

bool is_simple(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
    case Expr::Kind::Var: return true;
    case Expr::Kind::Unop:
    case Expr::Kind::Binop:
      return std::all_of(e.args.begin(), e.args.end(), [](const Expr& a) { return is_simple(a); });
    case Expr::Kind::When: return e.args.size() == 1 && is_simple(e.args[0]);
    default: return false;
  }
}

bool is_control(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Merge:
      return e.on_true.size() == 1 && e.on_false.size() == 1 && is_control(e.on_true[0]) &&
             is_control(e.on_false[0]);
    case Expr::Kind::Ite:
      return is_simple(e.args[0]) && e.on_true.size() == 1 && e.on_false.size() == 1 &&
             is_control(e.on_true[0]) && is_control(e.on_false[0]);
    default: return is_simple(e);
  }
}

bool is_nlustre(const Node& n) {
  for (const auto& eq : n.equations) {
    switch (eq.kind) {
      case Equation::Kind::Def: return false;
      case Equation::Kind::NDef:
        if (eq.lhs.size() != 1 || eq.rhs.size() != 1 || !is_control(eq.rhs[0])) return false;
        break;
      case Equation::Kind::NFby:
        if (eq.lhs.size() != 1 || eq.rhs.size() != 1 || !is_simple(eq.rhs[0])) return false;
        break;
      case Equation::Kind::NCall:
        for (const auto& a : eq.rhs)
          if (!is_simple(a)) return false;
        break;
    }
  }
  return true;
}

bool is_nlustre(const Program& p) {
  return std::all_of(p.nodes.begin(), p.nodes.end(), [](const Node& n) { return is_nlustre(n); });
}

}  // namespace luset
