#include "luset/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <sstream>

namespace luset {

namespace {

Diagnostic diag(ErrorKind kind, const SourceSpan& span, const std::string& node, int eq,
                std::string msg) {
  return Diagnostic{kind, span, node, eq, std::move(msg)};
}

[[noreturn]] void fail(ErrorKind kind, const SourceSpan& span, const std::string& node, int eq,
                       std::string msg) {
  throw Error(diag(kind, span, node, eq, std::move(msg)));
}

void each_call(const Expr& e, const std::function<void(const Expr&)>& f) {
  if (e.kind == Expr::Kind::Call) f(e);
  for (const auto* list : {&e.args, &e.on_true, &e.on_false, &e.next})
    for (const auto& s : *list) each_call(s, f);
}

std::vector<std::string> callees(const Node& n) {
  std::vector<std::string> out;
  for (const auto& eq : n.equations) {
    if (eq.kind == Equation::Kind::NCall) out.push_back(eq.callee);
    for (const auto& e : eq.rhs) each_call(e, [&](const Expr& c) { out.push_back(c.name); });
  }
  return out;
}

std::string types_str(const std::vector<DataType>& ts) {
  std::string s = "(";
  for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? ", " : "") + std::string(to_string(ts[i]));
  return s + ")";
}

// Datatype and clock elaboration of one node; mutates expressions in place.
class Elaborator {
 public:
  Elaborator(const Program& prog, const Node& node) : prog_(prog), node_(node) {}

  int eq_index = -1;

  std::vector<DataType> types(Expr& e) {
    std::vector<DataType> out;
    switch (e.kind) {
      case Expr::Kind::Const: out = {e.lit.type}; break;
      case Expr::Kind::Var: out = {decl(e.name, e.span).type}; break;
      case Expr::Kind::Unop: {
        auto t = single(e.args[0]);
        DataType want = e.unop == UnOp::Not ? DataType::Bool : DataType::Int;
        if (t != want) mismatch(e.span, std::string("operand of '") + std::string(to_string(e.unop)) + "'", {want}, {t});
        out = {want};
        break;
      }
      case Expr::Kind::Binop: {
        auto a = single(e.args[0]);
        auto b = single(e.args[1]);
        switch (e.binop) {
          case BinOp::Add: case BinOp::Sub: case BinOp::Mul: case BinOp::Div: case BinOp::Mod:
            expect_both(e, a, b, DataType::Int);
            out = {DataType::Int};
            break;
          case BinOp::And: case BinOp::Or: case BinOp::Xor:
            expect_both(e, a, b, DataType::Bool);
            out = {DataType::Bool};
            break;
          case BinOp::Eq: case BinOp::Ne:
            if (a != b) mismatch(e.span, "operands of '" + std::string(to_string(e.binop)) + "'", {a}, {b});
            out = {DataType::Bool};
            break;
          default:
            expect_both(e, a, b, DataType::Int);
            out = {DataType::Bool};
        }
        break;
      }
      case Expr::Kind::When:
        expect_bool_var(e);
        out = list(e.args);
        break;
      case Expr::Kind::Merge: {
        expect_bool_var(e);
        out = list(e.on_true);
        auto f = list(e.on_false);
        if (out != f) mismatch(e.span, "merge branches", out, f);
        break;
      }
      case Expr::Kind::Ite: {
        auto c = single(e.args[0]);
        if (c != DataType::Bool) mismatch(e.args[0].span, "if condition", {DataType::Bool}, {c});
        out = list(e.on_true);
        auto f = list(e.on_false);
        if (out != f) mismatch(e.span, "if branches", out, f);
        break;
      }
      case Expr::Kind::Fby: {
        out = list(e.args);
        auto n = list(e.next);
        if (out != n) mismatch(e.span, "fby arguments", out, n);
        break;
      }
      case Expr::Kind::Call: {
        const Node& f = callee(e.name, e.span);
        check_args(f, list(e.args), e.span);
        for (const auto& d : f.outputs) out.push_back(d.type);
        break;
      }
    }
    e.types = out;
    return out;
  }

  std::vector<DataType> list(std::vector<Expr>& es) {
    std::vector<DataType> out;
    for (auto& e : es) {
      auto t = types(e);
      out.insert(out.end(), t.begin(), t.end());
    }
    return out;
  }

  void type_equation(Equation& eq) {
    std::vector<DataType> lhs;
    for (const auto& x : eq.lhs) lhs.push_back(decl(x, eq.span).type);
    switch (eq.kind) {
      case Equation::Kind::Def: {
        auto rhs = list(eq.rhs);
        if (rhs.size() != lhs.size())
          fail(ErrorKind::ArityMismatch, eq.span, node_.name, eq_index,
               "equation defines " + std::to_string(lhs.size()) + " flows but its right-hand side has " +
                   std::to_string(rhs.size()));
        if (rhs != lhs) mismatch(eq.span, "equation", lhs, rhs);
        break;
      }
      case Equation::Kind::NDef: {
        auto rhs = list(eq.rhs);
        if (rhs != lhs) mismatch(eq.span, "equation", lhs, rhs);
        break;
      }
      case Equation::Kind::NFby: {
        auto rhs = list(eq.rhs);
        if (rhs != lhs || eq.init.type != lhs.at(0)) mismatch(eq.span, "fby equation", lhs, rhs);
        break;
      }
      case Equation::Kind::NCall: {
        const Node& f = callee(eq.callee, eq.span);
        check_args(f, list(eq.rhs), eq.span);
        std::vector<DataType> outs;
        for (const auto& d : f.outputs) outs.push_back(d.type);
        if (outs.size() != lhs.size())
          fail(ErrorKind::ArityMismatch, eq.span, node_.name, eq_index, "call result arity mismatch");
        if (outs != lhs) mismatch(eq.span, "call results", lhs, outs);
        break;
      }
    }
  }

  void clocks(Expr& e, const std::vector<Clock>& expected) {
    e.clocks = expected;
    switch (e.kind) {
      case Expr::Kind::Const: break;
      case Expr::Kind::Var: {
        const Clock& ck = decl(e.name, e.span).clock;
        if (ck != expected[0]) clock_mismatch(e.span, "variable " + e.name, expected[0], ck);
        break;
      }
      case Expr::Kind::Unop:
      case Expr::Kind::Binop:
        for (auto& a : e.args) clocks(a, expected);
        break;
      case Expr::Kind::When: {
        Clock xck = decl(e.name, e.span).clock;
        Clock want = xck.on(e.name, e.k);
        for (const auto& ck : expected)
          if (ck != want) clock_mismatch(e.span, "when expression", ck, want);
        list_clocks(e.args, std::vector<Clock>(expected.size(), xck));
        break;
      }
      case Expr::Kind::Merge: {
        Clock xck = decl(e.name, e.span).clock;
        for (const auto& ck : expected)
          if (ck != xck) clock_mismatch(e.span, "merge expression", ck, xck);
        list_clocks(e.on_true, std::vector<Clock>(expected.size(), xck.on(e.name, true)));
        list_clocks(e.on_false, std::vector<Clock>(expected.size(), xck.on(e.name, false)));
        break;
      }
      case Expr::Kind::Ite: {
        const Clock& ck = uniform(e, expected, "if expression");
        clocks(e.args[0], {ck});
        list_clocks(e.on_true, expected);
        list_clocks(e.on_false, expected);
        break;
      }
      case Expr::Kind::Fby:
        list_clocks(e.args, expected);
        list_clocks(e.next, expected);
        break;
      case Expr::Kind::Call: {
        const Clock& ck = uniform(e, expected, "node call");
        list_clocks(e.args, std::vector<Clock>(e.args.empty() ? 0 : count(e.args), ck));
        break;
      }
    }
  }

  void list_clocks(std::vector<Expr>& es, const std::vector<Clock>& expected) {
    std::size_t pos = 0;
    for (auto& e : es) {
      std::size_t n = e.types.size();
      clocks(e, std::vector<Clock>(expected.begin() + pos, expected.begin() + pos + n));
      pos += n;
    }
  }

  void clock_equation(Equation& eq) {
    std::vector<Clock> lhs;
    for (const auto& x : eq.lhs) lhs.push_back(decl(x, eq.span).clock);
    if (eq.kind == Equation::Kind::Def) {
      list_clocks(eq.rhs, lhs);
      eq.clock = lhs.empty() ? Clock::base() : lhs[0];
      return;
    }
    for (std::size_t i = 0; i < lhs.size(); ++i)
      if (lhs[i] != eq.clock) clock_mismatch(eq.span, "defined variable " + eq.lhs[i], eq.clock, lhs[i]);
    list_clocks(eq.rhs, std::vector<Clock>(count(eq.rhs), eq.clock));
  }

 private:
  const Program& prog_;
  const Node& node_;

  std::size_t count(const std::vector<Expr>& es) const {
    std::size_t n = 0;
    for (const auto& e : es) n += e.types.size();
    return n;
  }

  const VarDecl& decl(const std::string& x, const SourceSpan& span) const {
    const VarDecl* d = node_.find(x);
    if (!d) fail(ErrorKind::UndefinedVariable, span, node_.name, eq_index, "undeclared variable '" + x + "'");
    return *d;
  }

  const Node& callee(const std::string& f, const SourceSpan& span) const {
    const Node* n = prog_.find(f);
    if (!n) fail(ErrorKind::UnknownNode, span, node_.name, eq_index, "unknown node '" + f + "'");
    return *n;
  }

  DataType single(Expr& e) {
    auto t = types(e);
    if (t.size() != 1)
      fail(ErrorKind::ArityMismatch, e.span, node_.name, eq_index, "expected a single flow");
    return t[0];
  }

  void check_args(const Node& f, const std::vector<DataType>& got, const SourceSpan& span) {
    std::vector<DataType> want;
    for (const auto& d : f.inputs) want.push_back(d.type);
    if (want.size() != got.size())
      fail(ErrorKind::ArityMismatch, span, node_.name, eq_index,
           "node '" + f.name + "' expects " + std::to_string(want.size()) + " arguments, got " +
               std::to_string(got.size()));
    if (want != got) mismatch(span, "arguments of '" + f.name + "'", want, got);
  }

  void expect_both(const Expr& e, DataType a, DataType b, DataType want) {
    if (a != want || b != want)
      mismatch(e.span, "operands of '" + std::string(to_string(e.binop)) + "'", {want, want}, {a, b});
  }

  void expect_bool_var(const Expr& e) {
    if (decl(e.name, e.span).type != DataType::Bool)
      fail(ErrorKind::TypeMismatch, e.span, node_.name, eq_index,
           "clock variable '" + e.name + "' must have type bool");
  }

  [[noreturn]] void mismatch(const SourceSpan& span, const std::string& what,
                             const std::vector<DataType>& want, const std::vector<DataType>& got) {
    fail(ErrorKind::TypeMismatch, span, node_.name, eq_index,
         "type mismatch in " + what + ": expected " + types_str(want) + ", found " + types_str(got));
  }

  [[noreturn]] void clock_mismatch(const SourceSpan& span, const std::string& what, const Clock& want,
                                   const Clock& got) {
    fail(ErrorKind::ClockMismatch, span, node_.name, eq_index,
         "clock mismatch for " + what + ": expected " + to_string(want) + ", found " + to_string(got));
  }

  const Clock& uniform(const Expr& e, const std::vector<Clock>& expected, const std::string& what) {
    for (const auto& ck : expected)
      if (ck != expected[0]) clock_mismatch(e.span, what, expected[0], ck);
    return expected[0];
  }
};

void check_decl_clocks(const Node& n, std::vector<Diagnostic>& out) {
  for (const auto* group : {&n.inputs, &n.outputs})
    for (const auto& d : *group)
      if (!d.clock.is_base())
        out.push_back(diag(ErrorKind::ClockMismatch, d.span, n.name, -1,
                           "interface variable '" + d.name + "' must be on the base clock"));
  for (const auto& d : n.locals) {
    Clock prefix;
    for (const auto& st : d.clock.steps) {
      const VarDecl* x = n.find(st.var);
      if (!x) {
        out.push_back(diag(ErrorKind::UndefinedVariable, d.span, n.name, -1,
                           "undeclared clock variable '" + st.var + "'"));
        break;
      }
      if (x->type != DataType::Bool)
        out.push_back(diag(ErrorKind::TypeMismatch, d.span, n.name, -1,
                           "clock variable '" + st.var + "' must have type bool"));
      if (x->clock != prefix)
        out.push_back(diag(ErrorKind::ClockMismatch, d.span, n.name, -1,
                           "clock variable '" + st.var + "' is on " + to_string(x->clock) +
                               ", expected " + to_string(prefix)));
      prefix = prefix.on(st.var, st.k);
    }
  }
}

void check_node_structure(const Program& prog, const Node& n, std::vector<Diagnostic>& out) {
  std::set<std::string> declared;
  for (const auto* group : {&n.inputs, &n.outputs, &n.locals})
    for (const auto& d : *group) {
      if (d.name == kBase)
        out.push_back(diag(ErrorKind::DuplicateDeclaration, d.span, n.name, -1,
                           "'base' is reserved and cannot be declared"));
      if (!declared.insert(d.name).second)
        out.push_back(diag(ErrorKind::DuplicateDeclaration, d.span, n.name, -1,
                           "variable '" + d.name + "' declared twice"));
    }
  check_decl_clocks(n, out);

  std::set<std::string> defined;
  for (std::size_t i = 0; i < n.equations.size(); ++i) {
    const auto& eq = n.equations[i];
    int idx = static_cast<int>(i);
    for (const auto& x : eq.lhs) {
      if (!n.find(x))
        out.push_back(diag(ErrorKind::UndefinedVariable, eq.span, n.name, idx,
                           "equation defines undeclared variable '" + x + "'"));
      else if (n.is_input(x))
        out.push_back(diag(ErrorKind::AssignToInput, eq.span, n.name, idx,
                           "equation defines input '" + x + "'"));
      if (!defined.insert(x).second)
        out.push_back(diag(ErrorKind::DuplicateDefinition, eq.span, n.name, idx,
                           "variable '" + x + "' defined more than once"));
    }
    for (const auto& x : free_vars(eq)) {
      if (x == kBase) continue;
      if (!n.find(x))
        out.push_back(diag(ErrorKind::UndefinedVariable, eq.span, n.name, idx,
                           "undeclared variable '" + x + "'"));
    }
    auto check_callee = [&](const std::string& f) {
      if (!prog.find(f))
        out.push_back(diag(ErrorKind::UnknownNode, eq.span, n.name, idx, "unknown node '" + f + "'"));
    };
    if (eq.kind == Equation::Kind::NCall) check_callee(eq.callee);
    for (const auto& e : eq.rhs) each_call(e, [&](const Expr& c) { check_callee(c.name); });
  }
  for (const auto* group : {&n.outputs, &n.locals})
    for (const auto& d : *group)
      if (!defined.count(d.name))
        out.push_back(diag(ErrorKind::MissingDefinition, d.span, n.name, -1,
                           "variable '" + d.name + "' has no defining equation"));
}

void instantaneous_reads(const Expr& e, std::set<std::string>& out) {
  for (const auto& ck : e.clocks)
    for (const auto& st : ck.steps) out.insert(st.var);
  switch (e.kind) {
    case Expr::Kind::Const: return;
    case Expr::Kind::Var: out.insert(e.name); return;
    case Expr::Kind::When:
    case Expr::Kind::Merge: out.insert(e.name); break;
    default: break;
  }
  for (const auto& a : e.args) instantaneous_reads(a, out);
  if (e.kind == Expr::Kind::Fby) return;
  for (const auto& a : e.on_true) instantaneous_reads(a, out);
  for (const auto& a : e.on_false) instantaneous_reads(a, out);
}

std::set<std::string> equation_reads(const Node& n, const Equation& eq) {
  std::set<std::string> out;
  for (const auto& st : eq.clock.steps) out.insert(st.var);
  for (const auto& x : eq.lhs)
    if (const VarDecl* d = n.find(x))
      for (const auto& st : d->clock.steps) out.insert(st.var);
  if (eq.kind != Equation::Kind::NFby)
    for (const auto& e : eq.rhs) instantaneous_reads(e, out);
  return out;
}

// Tarjan over the variable graph; returns the first cyclic component found.
std::vector<std::string> find_cycle(const std::map<std::string, std::set<std::string>>& reads) {
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::string> result;
  int counter = 0;

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    auto it = reads.find(v);
    if (it != reads.end())
      for (const auto& w : it->second) {
        if (!reads.count(w)) continue;
        if (!index.count(w)) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      bool self = it != reads.end() && it->second.count(v);
      if (result.empty() && (comp.size() > 1 || self)) {
        std::sort(comp.begin(), comp.end());
        result = comp;
      }
    }
  };
  for (const auto& [v, _] : reads)
    if (!index.count(v)) visit(v);
  return result;
}

}  // namespace

std::vector<Diagnostic> well_formed(const Program& prog) {
  std::vector<Diagnostic> out;
  std::set<std::string> names;
  for (const auto& n : prog.nodes)
    if (!names.insert(n.name).second)
      out.push_back(diag(ErrorKind::DuplicateNode, n.span, n.name, -1, "node '" + n.name + "' defined twice"));
  for (const auto& n : prog.nodes) check_node_structure(prog, n, out);
  if (!out.empty()) return out;

  try {
    call_order(prog);
  } catch (const Error& e) {
    out.push_back(e.diagnostic());
    return out;
  }

  Program copy = prog;
  for (auto& n : copy.nodes) {
    Elaborator el(copy, n);
    for (std::size_t i = 0; i < n.equations.size(); ++i) {
      el.eq_index = static_cast<int>(i);
      try {
        el.type_equation(n.equations[i]);
      } catch (const Error& e) {
        out.push_back(e.diagnostic());
      }
    }
  }
  return out;
}

Program infer_clocks(const Program& prog) {
  Program out = prog;
  for (auto& n : out.nodes) {
    Elaborator el(out, n);
    for (std::size_t i = 0; i < n.equations.size(); ++i) {
      el.eq_index = static_cast<int>(i);
      el.type_equation(n.equations[i]);
      el.clock_equation(n.equations[i]);
    }
  }
  return out;
}

DepGraph instantaneous_deps(const Node& node) {
  DepGraph g;
  std::map<std::string, std::size_t> def_of;
  for (std::size_t i = 0; i < node.equations.size(); ++i)
    for (const auto& x : node.equations[i].lhs) def_of[x] = i;

  std::vector<std::set<std::size_t>> preds(node.equations.size());
  for (std::size_t i = 0; i < node.equations.size(); ++i) {
    const auto& eq = node.equations[i];
    std::set<std::string> reads;
    for (const auto& y : equation_reads(node, eq))
      if (def_of.count(y)) reads.insert(y);
    for (const auto& x : eq.lhs) g.reads[x] = reads;
    for (const auto& y : reads) preds[i].insert(def_of[y]);
  }

  std::vector<std::size_t> pending(node.equations.size());
  std::vector<std::vector<std::size_t>> succs(node.equations.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    pending[i] = preds[i].size();
    for (auto p : preds[i]) succs[p].push_back(i);
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < pending.size(); ++i)
    if (pending[i] == 0) ready.push(i);
  while (!ready.empty()) {
    auto i = ready.top();
    ready.pop();
    g.order.push_back(i);
    for (auto s : succs[i])
      if (--pending[s] == 0) ready.push(s);
  }
  if (g.order.size() != node.equations.size()) {
    g.cycle = find_cycle(g.reads);
    g.order.clear();
  }
  return g;
}

std::vector<std::size_t> schedule(const Node& node) {
  auto g = instantaneous_deps(node);
  if (!g.acyclic()) {
    std::string vars;
    for (const auto& v : g.cycle) vars += (vars.empty() ? "" : ", ") + v;
    throw Error(diag(ErrorKind::CausalityCycle, node.span, node.name, -1,
                     "causality cycle in node '" + node.name + "' through [" + vars + "]"));
  }
  return g.order;
}

std::vector<std::string> call_order(const Program& prog) {
  std::vector<std::string> order;
  std::map<std::string, int> state;  // 1 visiting, 2 done
  std::function<void(const Node&)> visit = [&](const Node& n) {
    state[n.name] = 1;
    for (const auto& f : callees(n)) {
      const Node* c = prog.find(f);
      if (!c) fail(ErrorKind::UnknownNode, n.span, n.name, -1, "unknown node '" + f + "'");
      if (state[f] == 1)
        fail(ErrorKind::RecursiveCall, n.span, n.name, -1,
             "recursive call between '" + n.name + "' and '" + f + "'");
      if (state[f] == 0) visit(*c);
    }
    state[n.name] = 2;
    order.push_back(n.name);
  };
  for (const auto& n : prog.nodes)
    if (state[n.name] == 0) visit(n);
  return order;
}

}  // namespace luset
