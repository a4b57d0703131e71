#include "luset/interp.hpp"

#include <memory>
#include <optional>
#include <unordered_map>

#include "luset/analysis.hpp"

namespace luset {

namespace {

[[noreturn]] void mismatch(const std::string& what) {
  throw Error(ErrorKind::ClockedValueMismatch, "clocked value mismatch: " + what);
}

Error located(const Error& e, int tick, const std::string& var) {
  if (e.tick >= 0) return e;
  Error out(e.kind(), std::string(e.what()) + " (tick " + std::to_string(tick) +
                          (var.empty() ? "" : ", variable " + var) + ")");
  out.tick = tick;
  out.var = var;
  return out;
}

class Instance;

// Evaluation of expressions within one tick. Owns the delay state and the
// sub-instances of the node calls it meets, keyed by their AST address.
class Evaluator {
 public:
  Evaluator(const Interpreter* interp, const Program& prog) : interp_(interp), prog_(prog) {}
  virtual ~Evaluator();

  std::vector<Value> eval(const Expr& e);
  std::vector<Value> eval(const std::vector<Expr>& es) {
    std::vector<Value> out;
    for (const auto& e : es) {
      auto vs = eval(e);
      out.insert(out.end(), vs.begin(), vs.end());
    }
    return out;
  }

  bool clock_bit(const Clock& ck) {
    bool bit = base_bit();
    for (const auto& st : ck.steps) {
      Value x = lookup(st.var);
      if (bit) {
        if (!x.is_present()) mismatch("clock variable " + st.var + " absent on its clock");
        bit = x.as_bool() == st.k;
      } else if (x.is_present()) {
        mismatch("clock variable " + st.var + " present off its clock");
      }
    }
    return bit;
  }

  void flush();

 protected:
  virtual Value lookup(const std::string& x) = 0;
  virtual bool base_bit() = 0;

  struct Delayed {
    const Expr* fby = nullptr;
    const Equation* eq = nullptr;
    std::vector<bool> presence;
  };

  const Interpreter* interp_;
  const Program& prog_;
  std::unordered_map<const void*, std::vector<std::optional<Value>>> saved_;
  std::unordered_map<const void*, std::unique_ptr<Instance>> subs_;
  std::vector<Delayed> delayed_;

  std::vector<Value> call(const void* key, const std::string& f, const std::vector<Value>& args, bool bit);
};

class Instance : public Evaluator {
 public:
  Instance(const Interpreter* interp, const Program& prog, const Node& node)
      : Evaluator(interp, prog), node_(node), order_(order_for(interp, node)) {}

  std::vector<Value> step(const std::vector<Value>& inputs, bool base, History* record = nullptr);
  int tick() const { return tick_; }

 protected:
  Value lookup(const std::string& x) override {
    auto it = env_.find(x);
    if (it == env_.end()) throw Error(ErrorKind::UnboundVar, "variable '" + x + "' read before its definition");
    return it->second;
  }
  bool base_bit() override { return base_; }

 private:
  const Node& node_;
  std::vector<std::size_t> order_;
  std::unordered_map<std::string, Value> env_;
  bool base_ = true;
  int tick_ = 0;

  static std::vector<std::size_t> order_for(const Interpreter* interp, const Node& node) {
    return interp ? interp->order(node.name) : schedule(node);
  }

  void equation(const Equation& eq);
};

Evaluator::~Evaluator() = default;

std::vector<Value> Evaluator::call(const void* key, const std::string& f, const std::vector<Value>& args, bool bit) {
  const Node* callee = prog_.find(f);
  if (!callee) throw Error(ErrorKind::UnknownNode, "unknown node '" + f + "'");
  if (args.size() != callee->inputs.size())
    throw Error(ErrorKind::ArityMismatch, "node '" + f + "' called with " + std::to_string(args.size()) + " arguments");
  if (!bit) return std::vector<Value>(callee->outputs.size(), Value::absent());
  auto& sub = subs_[key];
  if (!sub) sub = std::make_unique<Instance>(interp_, prog_, *callee);
  return sub->step(args, true);
}

std::vector<Value> Evaluator::eval(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const: {
      bool bit = e.clocks.empty() ? base_bit() : clock_bit(e.clocks[0]);
      return {bit ? Value::present(e.lit) : Value::absent()};
    }
    case Expr::Kind::Var: return {lookup(e.name)};
    case Expr::Kind::Unop: return {apply_unop(e.unop, eval(e.args[0]).at(0))};
    case Expr::Kind::Binop: return {apply_binop(e.binop, eval(e.args[0]).at(0), eval(e.args[1]).at(0))};
    case Expr::Kind::When: {
      Value x = lookup(e.name);
      auto vs = eval(e.args);
      for (auto& v : vs) v = when_step(e.k, x, v);
      return vs;
    }
    case Expr::Kind::Merge: {
      Value x = lookup(e.name);
      auto ts = eval(e.on_true);
      auto fs = eval(e.on_false);
      if (ts.size() != fs.size()) throw Error(ErrorKind::ArityMismatch, "merge branches differ in arity");
      for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = merge_step(x, ts[i], fs[i]);
      return ts;
    }
    case Expr::Kind::Ite: {
      Value c = eval(e.args[0]).at(0);
      auto ts = eval(e.on_true);
      auto fs = eval(e.on_false);
      if (ts.size() != fs.size()) throw Error(ErrorKind::ArityMismatch, "if branches differ in arity");
      for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = ite_step(c, ts[i], fs[i]);
      return ts;
    }
    case Expr::Kind::Fby: {
      auto v0 = eval(e.args);
      auto& saved = saved_[&e];
      saved.resize(v0.size());
      Delayed d;
      d.fby = &e;
      std::vector<Value> out;
      for (std::size_t i = 0; i < v0.size(); ++i) {
        d.presence.push_back(v0[i].is_present());
        if (!v0[i].is_present())
          out.push_back(Value::absent());
        else
          out.push_back(saved[i] ? *saved[i] : v0[i]);
      }
      delayed_.push_back(std::move(d));
      return out;
    }
    case Expr::Kind::Call: {
      auto args = eval(e.args);
      bool bit = args.empty() ? (e.clocks.empty() ? base_bit() : clock_bit(e.clocks[0])) : base_step(args);
      return call(&e, e.name, args, bit);
    }
  }
  return {};
}

void Evaluator::flush() {
  for (std::size_t i = 0; i < delayed_.size(); ++i) {
    Delayed d = delayed_[i];
    std::vector<Value> ys;
    if (d.fby) {
      ys = eval(d.fby->next);
    } else {
      ys = eval(d.eq->rhs);
    }
    if (ys.size() != d.presence.size()) throw Error(ErrorKind::ArityMismatch, "fby arguments differ in arity");
    auto& saved = saved_[d.fby ? static_cast<const void*>(d.fby) : static_cast<const void*>(d.eq)];
    saved.resize(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) {
      if (ys[k].is_present() != d.presence[k]) mismatch("fby arguments on different clocks");
      if (ys[k].is_present()) saved[k] = ys[k];
    }
  }
  delayed_.clear();
}

void Instance::equation(const Equation& eq) {
  switch (eq.kind) {
    case Equation::Kind::Def: {
      auto vs = eval(eq.rhs);
      if (vs.size() != eq.lhs.size()) throw Error(ErrorKind::ArityMismatch, "equation arity mismatch");
      for (std::size_t i = 0; i < vs.size(); ++i) {
        const VarDecl* d = node_.find(eq.lhs[i]);
        if (vs[i].is_present() != clock_bit(d->clock)) mismatch("value of " + eq.lhs[i] + " off its clock");
        env_[eq.lhs[i]] = vs[i];
      }
      break;
    }
    case Equation::Kind::NDef: {
      Value v = eval(eq.rhs[0]).at(0);
      if (v.is_present() != clock_bit(eq.clock)) mismatch("value of " + eq.lhs[0] + " off its clock");
      env_[eq.lhs[0]] = v;
      break;
    }
    case Equation::Kind::NFby: {
      bool bit = clock_bit(eq.clock);
      auto& saved = saved_[&eq];
      saved.resize(1);
      env_[eq.lhs[0]] = bit ? (saved[0] ? *saved[0] : Value::present(eq.init)) : Value::absent();
      Delayed d;
      d.eq = &eq;
      d.presence = {bit};
      delayed_.push_back(std::move(d));
      break;
    }
    case Equation::Kind::NCall: {
      auto args = eval(eq.rhs);
      bool bit = clock_bit(eq.clock);
      if (!args.empty() && base_step(args) != bit) mismatch("call of " + eq.callee + " off its clock");
      auto outs = call(&eq, eq.callee, args, bit);
      if (outs.size() != eq.lhs.size()) throw Error(ErrorKind::ArityMismatch, "call result arity mismatch");
      for (std::size_t i = 0; i < outs.size(); ++i) env_[eq.lhs[i]] = outs[i];
      break;
    }
  }
}

std::vector<Value> Instance::step(const std::vector<Value>& inputs, bool base, History* record) {
  env_.clear();
  base_ = base;
  for (std::size_t i = 0; i < node_.inputs.size(); ++i) env_[node_.inputs[i].name] = inputs[i];
  if (!base) {
    for (const auto* group : {&node_.outputs, &node_.locals})
      for (const auto& d : *group) env_[d.name] = Value::absent();
  } else {
    for (auto idx : order_) {
      const Equation& eq = node_.equations[idx];
      try {
        equation(eq);
      } catch (const Error& e) {
        throw located(e, tick_, eq.lhs.empty() ? "" : eq.lhs[0]);
      }
    }
    try {
      flush();
    } catch (const Error& e) {
      throw located(e, tick_, "");
    }
  }
  if (record)
    for (const auto* group : {&node_.inputs, &node_.outputs, &node_.locals})
      for (const auto& d : *group) (*record)[d.name].push_back(env_[d.name]);
  ++tick_;
  std::vector<Value> outs;
  for (const auto& d : node_.outputs) outs.push_back(env_[d.name]);
  return outs;
}

// Expression evaluation against a fixed history.
class HistoryEvaluator : public Evaluator {
 public:
  HistoryEvaluator(const Program& prog, const History& H, const BStream& bs)
      : Evaluator(nullptr, prog), H_(H), bs_(bs) {}
  std::size_t t = 0;

 protected:
  Value lookup(const std::string& x) override {
    auto it = H_.find(x);
    if (it == H_.end()) throw Error(ErrorKind::UnboundVar, "no stream for '" + x + "'");
    return t < it->second.size() ? it->second[t] : Value::absent();
  }
  bool base_bit() override { return t < bs_.size() && bs_[t]; }

 private:
  const History& H_;
  const BStream& bs_;
};

}  // namespace

Interpreter::Interpreter(const Program& prog) : prog_(infer_clocks(prog)) {
  for (const auto& n : prog_.nodes) order_[n.name] = schedule(n);
}

const std::vector<std::size_t>& Interpreter::order(const std::string& node) const {
  auto it = order_.find(node);
  if (it == order_.end()) throw Error(ErrorKind::UnknownNode, "unknown node '" + node + "'");
  return it->second;
}

NodeRun Interpreter::run(const std::string& node, const std::vector<VStream>& inputs, std::size_t ticks) const {
  return run(node, inputs, BStream(ticks, true));
}

NodeRun Interpreter::run(const std::string& name, const std::vector<VStream>& inputs, const BStream& base) const {
  const Node* node = prog_.find(name);
  if (!node) throw Error(ErrorKind::UnknownNode, "unknown node '" + name + "'");
  if (inputs.size() != node->inputs.size())
    throw Error(ErrorKind::ArityMismatch, "node '" + name + "' expects " + std::to_string(node->inputs.size()) +
                                              " input streams, got " + std::to_string(inputs.size()));
  const std::size_t ticks = base.size();
  for (const auto& s : inputs)
    if (s.size() < ticks) throw Error(ErrorKind::ArityMismatch, "input stream shorter than the prefix length");

  Instance inst(this, prog_, *node);
  NodeRun r;
  r.outputs.assign(node->outputs.size(), {});
  for (std::size_t t = 0; t < ticks; ++t) {
    std::vector<Value> ins;
    for (const auto& s : inputs) ins.push_back(s[t]);
    bool bit = base[t];
    if (!ins.empty()) {
      try {
        bit = base_step(ins);
      } catch (const Error& e) {
        throw located(e, static_cast<int>(t), "");
      }
    }
    r.base.push_back(bit);
    auto outs = inst.step(ins, bit, &r.history);
    for (std::size_t i = 0; i < outs.size(); ++i) r.outputs[i].push_back(outs[i]);
  }
  if (is_nlustre(*node) && !respects_clock(r.history, r.base))
    throw Error(ErrorKind::ClockedValueMismatch, "history of '" + name + "' does not respect its base clock");
  return r;
}

NodeRun eval_node(const Program& prog, const std::string& f, const std::vector<VStream>& inputs, std::size_t ticks) {
  return Interpreter(prog).run(f, inputs, ticks);
}

std::vector<VStream> eval_expr(const Program& prog, const History& H, const BStream& bs, const Expr& e) {
  HistoryEvaluator ev(prog, H, bs);
  std::vector<VStream> out;
  for (std::size_t t = 0; t < bs.size(); ++t) {
    ev.t = t;
    std::vector<Value> vs;
    try {
      vs = ev.eval(e);
      ev.flush();
    } catch (const Error& err) {
      throw located(err, static_cast<int>(t), "");
    }
    if (out.empty()) out.assign(vs.size(), {});
    for (std::size_t i = 0; i < vs.size(); ++i) out[i].push_back(vs[i]);
  }
  return out;
}

}  // namespace luset
