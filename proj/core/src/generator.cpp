#include "luset/generator.hpp"

#include <algorithm>
#include <set>

#include "luset/analysis.hpp"

namespace luset {

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

DataType random_type(Rng& rng) { return coin(rng) ? DataType::Int : DataType::Bool; }

Literal random_literal(Rng& rng, DataType t) {
  return t == DataType::Bool ? Literal::boolean(coin(rng)) : Literal::integer(uniform(rng, -5, 5));
}

class NodeGen {
 public:
  NodeGen(Rng& rng, const GenConfig& cfg, const Program& prog) : rng_(rng), cfg_(cfg), prog_(prog) {}

  Node make(const std::string& name) {
    node_.name = name;
    int n_in = uniform(rng_, 1, cfg_.max_inputs);
    for (int i = 0; i < n_in; ++i) node_.inputs.push_back({"i" + std::to_string(i + 1), random_type(rng_), {}, {}});
    if (cfg_.subclocks && coin(rng_, 0.6)) node_.inputs[uniform(rng_, 0, n_in - 1)].type = DataType::Bool;
    for (const auto& d : node_.inputs) ready_.insert(d.name);

    int n_out = uniform(rng_, 1, cfg_.max_outputs);
    int n_loc = uniform(rng_, 0, cfg_.max_locals);
    for (int i = 0; i < n_out; ++i) node_.outputs.push_back({"o" + std::to_string(i + 1), random_type(rng_), {}, {}});
    for (int i = 0; i < n_loc; ++i) node_.locals.push_back({"l" + std::to_string(i + 1), random_type(rng_), {}, {}});
    std::vector<std::string> order;
    for (const auto& d : node_.outputs) order.push_back(d.name);
    for (const auto& d : node_.locals) order.push_back(d.name);
    std::shuffle(order.begin(), order.end(), rng_);

    // Local clocks may only use variables defined earlier in the order.
    std::set<std::string> before(ready_);
    for (const auto& x : order) {
      VarDecl* d = decl(x);
      if (cfg_.subclocks && !is_output(x) && coin(rng_, 0.4)) {
        std::vector<const VarDecl*> cands;
        for (const auto* v : all())
          if (before.count(v->name) && v->type == DataType::Bool && v->clock.steps.size() < 2) cands.push_back(v);
        if (!cands.empty()) {
          const VarDecl* c = pick(rng_, cands);
          d->clock = c->clock.on(c->name, coin(rng_));
        }
      }
      before.insert(x);
    }

    for (std::size_t i = 0; i < order.size();) {
      const VarDecl a = *decl(order[i]);
      if (cfg_.tuples && i + 1 < order.size() && decl(order[i + 1])->clock == a.clock && coin(rng_, 0.3)) {
        const VarDecl b = *decl(order[i + 1]);
        node_.equations.push_back(pair_equation(a, b));
        ready_.insert(a.name);
        ready_.insert(b.name);
        i += 2;
      } else {
        node_.equations.push_back(Equation::def({a.name}, {gen(a.type, a.clock, cfg_.max_depth, false)}));
        ready_.insert(a.name);
        i += 1;
      }
    }
    return node_;
  }

 private:
  Rng& rng_;
  const GenConfig& cfg_;
  const Program& prog_;
  Node node_;
  std::set<std::string> ready_;

  std::vector<const VarDecl*> all() const {
    std::vector<const VarDecl*> out;
    for (const auto* g : {&node_.inputs, &node_.outputs, &node_.locals})
      for (const auto& d : *g) out.push_back(&d);
    return out;
  }
  VarDecl* decl(const std::string& x) {
    for (auto* g : {&node_.inputs, &node_.outputs, &node_.locals})
      for (auto& d : *g)
        if (d.name == x) return &d;
    return nullptr;
  }
  bool is_output(const std::string& x) const {
    return std::any_of(node_.outputs.begin(), node_.outputs.end(), [&](const VarDecl& d) { return d.name == x; });
  }

  std::vector<const VarDecl*> readable(DataType t, const Clock& ck, bool delayed) const {
    std::vector<const VarDecl*> out;
    for (const auto* d : all())
      if (d->type == t && d->clock == ck && (delayed || ready_.count(d->name))) out.push_back(d);
    return out;
  }

  std::vector<const Node*> callees(const std::vector<DataType>& outs) const {
    std::vector<const Node*> out;
    if (!cfg_.calls) return out;
    for (const auto& n : prog_.nodes) {
      if (n.outputs.size() != outs.size()) continue;
      bool ok = true;
      for (std::size_t i = 0; i < outs.size(); ++i) ok = ok && n.outputs[i].type == outs[i];
      if (ok) out.push_back(&n);
    }
    return out;
  }

  Expr call(const Node& f, const Clock& ck, int depth, bool delayed) {
    std::vector<Expr> args;
    for (const auto& d : f.inputs) args.push_back(gen(d.type, ck, depth - 1, delayed));
    return Expr::call(f.name, std::move(args));
  }

  Expr leaf(DataType t, const Clock& ck, bool delayed) {
    auto vars = readable(t, ck, delayed);
    if (!vars.empty() && coin(rng_, 0.7)) return Expr::var(pick(rng_, vars)->name);
    if (!ck.is_base() && coin(rng_, 0.5)) {
      const ClockStep& st = ck.last();
      return Expr::when({leaf(t, ck.parent(), delayed)}, st.var, st.k);
    }
    return Expr::constant(random_literal(rng_, t));
  }

  Expr gen(DataType t, const Clock& ck, int depth, bool delayed) {
    if (depth <= 0) return leaf(t, ck, delayed);
    switch (uniform(rng_, 0, 9)) {
      case 0:
      case 1: return leaf(t, ck, delayed);
      case 2:
        return Expr::unary(t == DataType::Bool ? UnOp::Not : UnOp::Neg, gen(t, ck, depth - 1, delayed));
      case 3: {
        if (t == DataType::Int) {
          static const std::vector<BinOp> ops{BinOp::Add, BinOp::Sub, BinOp::Mul};
          return Expr::binary(pick(rng_, ops), gen(t, ck, depth - 1, delayed), gen(t, ck, depth - 1, delayed));
        }
        if (coin(rng_)) {
          static const std::vector<BinOp> ops{BinOp::And, BinOp::Or, BinOp::Xor};
          return Expr::binary(pick(rng_, ops), gen(t, ck, depth - 1, delayed), gen(t, ck, depth - 1, delayed));
        }
        static const std::vector<BinOp> cmp{BinOp::Eq, BinOp::Ne, BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge};
        DataType u = coin(rng_, 0.8) ? DataType::Int : DataType::Bool;
        BinOp op = u == DataType::Int ? pick(rng_, cmp) : (coin(rng_) ? BinOp::Eq : BinOp::Ne);
        return Expr::binary(op, gen(u, ck, depth - 1, delayed), gen(u, ck, depth - 1, delayed));
      }
      case 4: {
        if (ck.is_base()) return gen(t, ck, depth - 1, delayed);
        const ClockStep& st = ck.last();
        return Expr::when({gen(t, ck.parent(), depth - 1, delayed)}, st.var, st.k);
      }
      case 5: {
        if (!cfg_.subclocks) return gen(t, ck, depth - 1, delayed);
        auto conds = readable(DataType::Bool, ck, delayed);
        if (conds.empty() || ck.steps.size() >= 3) return gen(t, ck, depth - 1, delayed);
        const std::string& x = pick(rng_, conds)->name;
        return Expr::merge(x, {gen(t, ck.on(x, true), depth - 1, delayed)},
                           {gen(t, ck.on(x, false), depth - 1, delayed)});
      }
      case 6:
        return Expr::ite(gen(DataType::Bool, ck, depth - 1, delayed), {gen(t, ck, depth - 1, delayed)},
                         {gen(t, ck, depth - 1, delayed)});
      case 7:
      case 8: {
        Expr head = coin(rng_) ? Expr::constant(random_literal(rng_, t)) : gen(t, ck, depth - 1, delayed);
        return Expr::fby({std::move(head)}, {gen(t, ck, depth - 1, true)});
      }
      default: {
        auto fs = callees({t});
        if (fs.empty()) return gen(t, ck, depth - 1, delayed);
        return call(*pick(rng_, fs), ck, depth, delayed);
      }
    }
  }

  Equation pair_equation(const VarDecl& a, const VarDecl& b) {
    const Clock& ck = a.clock;
    const int depth = std::max(1, cfg_.max_depth - 1);
    auto two = [&](bool delayed) {
      return std::vector<Expr>{gen(a.type, ck, depth, delayed), gen(b.type, ck, depth, delayed)};
    };
    switch (uniform(rng_, 0, 4)) {
      case 0: return Equation::def({a.name, b.name}, {Expr::fby(two(false), two(true))});
      case 1: return Equation::def({a.name, b.name}, {Expr::ite(gen(DataType::Bool, ck, depth, false), two(false), two(false))});
      case 2: {
        auto fs = callees({a.type, b.type});
        if (!fs.empty()) return Equation::def({a.name, b.name}, {call(*pick(rng_, fs), ck, depth + 1, false)});
        break;
      }
      case 3: {
        if (ck.is_base()) break;
        const ClockStep& st = ck.last();
        return Equation::def({a.name, b.name},
                             {Expr::when({gen(a.type, ck.parent(), depth, false), gen(b.type, ck.parent(), depth, false)},
                                         st.var, st.k)});
      }
      default: break;
    }
    return Equation::def({a.name, b.name}, two(false));
  }
};

}  // namespace

Program random_program(Rng& rng, const GenConfig& cfg) {
  Program prog;
  for (int i = 0; i < cfg.nodes; ++i) {
    NodeGen g(rng, cfg, prog);
    prog.nodes.push_back(g.make("n" + std::to_string(i)));
  }
  auto diags = well_formed(prog);
  if (!diags.empty()) throw std::logic_error("generated an ill-formed program: " + diags[0].message);
  Program annotated = infer_clocks(prog);
  for (const auto& n : annotated.nodes) schedule(n);
  return prog;
}

Expr random_expr(Rng& rng, const std::vector<VarDecl>& vars, DataType t, int depth) {
  auto of_type = [&](DataType u) {
    std::vector<const VarDecl*> out;
    for (const auto& v : vars)
      if (v.type == u) out.push_back(&v);
    return out;
  };
  auto leaf = [&](DataType u) {
    auto cands = of_type(u);
    if (!cands.empty() && coin(rng, 0.75)) return Expr::var(pick(rng, cands)->name);
    return Expr::constant(random_literal(rng, u));
  };
  if (depth <= 0) return leaf(t);
  auto bools = of_type(DataType::Bool);
  switch (uniform(rng, 0, 7)) {
    case 0: return leaf(t);
    case 1: return Expr::unary(t == DataType::Bool ? UnOp::Not : UnOp::Neg, random_expr(rng, vars, t, depth - 1));
    case 2:
      if (t == DataType::Int)
        return Expr::binary(coin(rng) ? BinOp::Add : BinOp::Mul, random_expr(rng, vars, t, depth - 1),
                            random_expr(rng, vars, t, depth - 1));
      return Expr::binary(BinOp::Lt, random_expr(rng, vars, DataType::Int, depth - 1),
                          random_expr(rng, vars, DataType::Int, depth - 1));
    case 3:
      if (bools.empty()) return leaf(t);
      return Expr::when({random_expr(rng, vars, t, depth - 1)}, pick(rng, bools)->name, coin(rng));
    case 4:
      if (bools.empty()) return leaf(t);
      return Expr::merge(pick(rng, bools)->name, {random_expr(rng, vars, t, depth - 1)},
                         {random_expr(rng, vars, t, depth - 1)});
    case 5:
      return Expr::ite(random_expr(rng, vars, DataType::Bool, depth - 1), {random_expr(rng, vars, t, depth - 1)},
                       {random_expr(rng, vars, t, depth - 1)});
    default:
      return Expr::fby({random_expr(rng, vars, t, depth - 1)}, {random_expr(rng, vars, t, depth - 1)});
  }
}

Value random_value(Rng& rng, DataType t) { return Value::present(random_literal(rng, t)); }

std::vector<VStream> random_inputs(Rng& rng, const Node& n, const BStream& base) {
  std::vector<VStream> out;
  for (const auto& d : n.inputs) {
    VStream s;
    for (bool b : base) s.push_back(b ? random_value(rng, d.type) : Value::absent());
    out.push_back(std::move(s));
  }
  return out;
}

BStream random_base(Rng& rng, std::size_t ticks, double present) {
  BStream out;
  for (std::size_t t = 0; t < ticks; ++t) out.push_back(coin(rng, present));
  return out;
}

Lattice random_lattice(Rng& rng, std::size_t max_size) {
  max_size = std::max<std::size_t>(max_size, 2);
  if (coin(rng, 0.3)) return Lattice::chain(static_cast<std::size_t>(uniform(rng, 2, static_cast<int>(max_size))));
  // union-closed families over {0,1,2} containing the empty set
  std::set<unsigned> family{0};
  int wanted = uniform(rng, 1, 4);
  for (int i = 0; i < wanted; ++i) family.insert(static_cast<unsigned>(uniform(rng, 1, 7)));
  for (bool grown = true; grown;) {
    grown = false;
    for (unsigned a : std::vector<unsigned>(family.begin(), family.end()))
      for (unsigned b : std::vector<unsigned>(family.begin(), family.end()))
        if (family.insert(a | b).second) grown = true;
  }
  if (family.size() > max_size) return Lattice::chain(max_size);
  auto label = [](unsigned s) {
    std::string l = "{";
    for (unsigned i = 0; i < 3; ++i)
      if (s & (1u << i)) l += (l.size() > 1 ? "," : "") + std::to_string(i);
    return l + "}";
  };
  std::vector<std::string> elems;
  for (unsigned s : family) elems.push_back(label(s));
  std::vector<std::pair<std::string, std::string>> covers;
  auto below = [](unsigned a, unsigned b) { return a != b && (a & b) == a; };
  for (unsigned a : family)
    for (unsigned b : family) {
      if (!below(a, b)) continue;
      bool direct = std::none_of(family.begin(), family.end(), [&](unsigned c) { return below(a, c) && below(c, b); });
      if (direct) covers.push_back({label(a), label(b)});
    }
  return Lattice(elems, label(0), covers);
}

}  // namespace luset
