#include "luset/normalize.hpp"

#include "luset/analysis.hpp"

namespace luset {

void NormResult::absorb(NormResult other) {
  for (auto& e : other.new_equations) new_equations.push_back(std::move(e));
  for (auto& l : other.new_locals) new_locals.push_back(std::move(l));
  constraints.add(other.constraints);
}

std::string NameSupply::fresh() {
  for (;;) {
    std::string name = "v" + std::to_string(next_++);
    if (taken_.insert(name).second) return name;
  }
}

NormContext make_context(const Node& node, const SignatureTable& sigs) {
  NodeSignature sig;
  FreshTypes types;
  std::vector<TypeVar> locals;
  TypeEnv env = signature_env(node, sig, types, locals);
  std::set<std::string> taken;
  for (const auto* group : {&node.inputs, &node.outputs, &node.locals})
    for (const auto& d : *group) taken.insert(d.name);
  return NormContext{node, std::move(env), sigs, types, NameSupply(std::move(taken))};
}

namespace {

Expr annotated(Expr e, const Clock& ck, DataType t) {
  e.clocks = {ck};
  e.types = {t};
  return e;
}

const Clock& clock_at(const Expr& e, std::size_t i) {
  static const Clock base;
  return i < e.clocks.size() ? e.clocks[i] : base;
}

DataType type_at(const Expr& e, std::size_t i) { return i < e.types.size() ? e.types[i] : DataType::Int; }

const Expr& single(const NormResult& r) {
  if (r.exprs.size() != 1) throw Error(ErrorKind::ArityMismatch, "expected a single flow");
  return r.exprs[0].first;
}

// A fresh local x^δ declared on ck.
std::pair<std::string, TypeVar> fresh_local(NormContext& ctx, NormResult& r, const Clock& ck, DataType t) {
  std::string x = ctx.names.fresh();
  TypeVar d = ctx.types.fresh();
  ctx.env.vars[x] = SecType::var(d);
  r.new_locals.push_back({x, t, ck, d});
  return {x, d};
}

const NodeSignature& signature_of(const NormContext& ctx, const std::string& f) {
  auto it = ctx.sigs.find(f);
  if (it == ctx.sigs.end()) throw Error(ErrorKind::UnknownNode, "no signature for node '" + f + "'");
  return it->second;
}

// Binds x to e0 fby e on ck: a plain NLustre fby when e0 is a constant,
// the explicit initialisation otherwise.
void bind_fby(const std::string& x, const Clock& ck, DataType t, const std::pair<Expr, CanonType>& e0,
              const std::pair<Expr, CanonType>& e, NormContext& ctx, NormResult& r, bool with_clock) {
  if (e0.first.kind == Expr::Kind::Const) {
    Equation eq = Equation::nfby(x, ck, e0.first.lit, e.first);
    r.new_equations.push_back(std::move(eq));
    CanonType lhs = e0.second.join(e.second);
    if (with_clock) lhs = lhs.join(type_clock(ctx.env, ck));
    r.constraints.add(Constraint{lhs, ctx.env.at(x).type});
    return;
  }
  r.absorb(init_fby(x, ck, t, e0.first, e.first, ctx));
}

CanonType simple_type(const Expr& e, const TypeEnv& env) {
  switch (e.kind) {
    case Expr::Kind::Const: return {};
    case Expr::Kind::Var: return env.at(e.name).type;
    case Expr::Kind::Unop: return simple_type(e.args[0], env);
    case Expr::Kind::Binop: return simple_type(e.args[0], env).join(simple_type(e.args[1], env));
    case Expr::Kind::When: return simple_type(e.args[0], env).join(env.at(e.name).type);
    default: throw Error(ErrorKind::TypeMismatch, "not a simple expression");
  }
}

}  // namespace

NormResult normalize_exprs(const std::vector<Expr>& es, NormContext& ctx, bool control) {
  NormResult r;
  for (const auto& e : es) {
    NormResult ri = normalize_expr(e, ctx, control);
    for (auto& p : ri.exprs) r.exprs.push_back(std::move(p));
    ri.exprs.clear();
    r.absorb(std::move(ri));
  }
  return r;
}

NormResult normalize_expr(const Expr& e, NormContext& ctx, bool control) {
  NormResult r;
  switch (e.kind) {
    case Expr::Kind::Const: r.exprs.push_back({e, CanonType{}}); break;
    case Expr::Kind::Var: r.exprs.push_back({e, ctx.env.at(e.name).type}); break;
    case Expr::Kind::Unop: {
      r = normalize_expr(e.args[0], ctx);
      Expr a = single(r);
      r.exprs[0].first = annotated(Expr::unary(e.unop, std::move(a)), clock_at(e, 0), type_at(e, 0));
      break;
    }
    case Expr::Kind::Binop: {
      r = normalize_expr(e.args[0], ctx);
      NormResult rb = normalize_expr(e.args[1], ctx);
      Expr a = single(r);
      Expr b = single(rb);
      CanonType t = r.exprs[0].second.join(rb.exprs[0].second);
      rb.exprs.clear();
      r.absorb(std::move(rb));
      r.exprs = {{annotated(Expr::binary(e.binop, std::move(a), std::move(b)), clock_at(e, 0), type_at(e, 0)), t}};
      break;
    }
    case Expr::Kind::When: {
      r = normalize_exprs(e.args, ctx);
      const CanonType& gx = ctx.env.at(e.name).type;
      for (std::size_t i = 0; i < r.exprs.size(); ++i) {
        auto& [ei, ti] = r.exprs[i];
        ei = annotated(Expr::when({std::move(ei)}, e.name, e.k), clock_at(e, i), type_at(e, i));
        ti = ti.join(gx);
      }
      break;
    }
    case Expr::Kind::Merge:
    case Expr::Kind::Ite: {
      const bool is_merge = e.kind == Expr::Kind::Merge;
      NormResult rc;
      CanonType kappa;
      if (is_merge) {
        kappa = ctx.env.at(e.name).type;
      } else {
        rc = normalize_expr(e.args[0], ctx);
        single(rc);
        kappa = rc.exprs[0].second;
      }
      NormResult rt = normalize_exprs(e.on_true, ctx, true);
      NormResult rf = normalize_exprs(e.on_false, ctx, true);
      if (rt.exprs.size() != rf.exprs.size()) throw Error(ErrorKind::ArityMismatch, "branches have different arities");
      std::vector<std::pair<Expr, CanonType>> parts;
      for (std::size_t i = 0; i < rt.exprs.size(); ++i) {
        Expr t = rt.exprs[i].first;
        Expr f = rf.exprs[i].first;
        Expr m = is_merge ? Expr::merge(e.name, {std::move(t)}, {std::move(f)})
                          : Expr::ite(rc.exprs[0].first, {std::move(t)}, {std::move(f)});
        parts.push_back({annotated(std::move(m), clock_at(e, i), type_at(e, i)),
                         kappa.join(rt.exprs[i].second).join(rf.exprs[i].second)});
      }
      rc.exprs.clear();
      rt.exprs.clear();
      rf.exprs.clear();
      r.absorb(std::move(rc));
      r.absorb(std::move(rt));
      r.absorb(std::move(rf));
      if (control) {
        r.exprs = std::move(parts);
        break;
      }
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const Clock& ck = clock_at(e, i);
        auto [x, d] = fresh_local(ctx, r, ck, type_at(e, i));
        r.new_equations.push_back(Equation::ndef(x, ck, parts[i].first));
        r.constraints.add(Constraint{parts[i].second, CanonType::var(d)});
        r.exprs.push_back({annotated(Expr::var(x), ck, type_at(e, i)), CanonType::var(d)});
      }
      break;
    }
    case Expr::Kind::Fby: {
      NormResult r0 = normalize_exprs(e.args, ctx);
      NormResult r1 = normalize_exprs(e.next, ctx);
      if (r0.exprs.size() != r1.exprs.size()) throw Error(ErrorKind::ArityMismatch, "fby arguments differ in arity");
      auto heads = std::move(r0.exprs);
      auto tails = std::move(r1.exprs);
      r0.exprs.clear();
      r1.exprs.clear();
      r.absorb(std::move(r0));
      r.absorb(std::move(r1));
      for (std::size_t i = 0; i < heads.size(); ++i) {
        const Clock& ck = clock_at(e, i);
        auto [x, d] = fresh_local(ctx, r, ck, type_at(e, i));
        bind_fby(x, ck, type_at(e, i), heads[i], tails[i], ctx, r, false);
        r.exprs.push_back({annotated(Expr::var(x), ck, type_at(e, i)), CanonType::var(d)});
      }
      break;
    }
    case Expr::Kind::Call: {
      r = normalize_exprs(e.args, ctx);
      const NodeSignature& sig = signature_of(ctx, e.name);
      std::vector<Expr> args;
      std::vector<SecType> arg_types;
      for (auto& [a, t] : r.exprs) {
        args.push_back(std::move(a));
        arg_types.push_back(SecType{t, {}});
      }
      r.exprs.clear();
      const Clock ck = clock_at(e, 0);
      std::vector<std::string> xs;
      std::vector<SecType> outs;
      for (std::size_t i = 0; i < sig.outputs.size(); ++i) {
        auto [x, d] = fresh_local(ctx, r, ck, type_at(e, i));
        xs.push_back(x);
        outs.push_back(SecType::var(d));
        r.exprs.push_back({annotated(Expr::var(x), ck, type_at(e, i)), CanonType::var(d)});
      }
      r.constraints.add(instantiate(sig, arg_types, outs, type_clock(ctx.env, ck), ctx.types));
      r.new_equations.push_back(Equation::ncall(std::move(xs), ck, e.name, std::move(args)));
      break;
    }
  }
  return r;
}

NormResult init_fby(const std::string& x, const Clock& ck, DataType type, const Expr& e0, const Expr& e,
                    NormContext& ctx) {
  NormResult r;
  const CanonType gamma = type_clock(ctx.env, ck);
  const CanonType alpha = simple_type(e0, ctx.env);
  const CanonType beta = simple_type(e, ctx.env);
  const CanonType theta = ctx.env.at(x).type;

  auto [xinit, d1] = fresh_local(ctx, r, ck, DataType::Bool);
  auto [px, d2] = fresh_local(ctx, r, ck, type);
  r.new_equations.push_back(Equation::nfby(xinit, ck, Literal::boolean(true),
                                           annotated(Expr::constant(Literal::boolean(false)), ck, DataType::Bool)));
  r.constraints.add(Constraint{gamma, CanonType::var(d1)});
  r.new_equations.push_back(Equation::nfby(px, ck, Literal::default_of(type), e));
  r.constraints.add(Constraint{gamma.join(beta), CanonType::var(d2)});
  Expr sel = Expr::ite(annotated(Expr::var(xinit), ck, DataType::Bool), {e0},
                       {annotated(Expr::var(px), ck, type)});
  r.new_equations.push_back(Equation::ndef(x, ck, annotated(std::move(sel), ck, type)));
  r.constraints.add(Constraint{gamma.join(CanonType::var(d1)).join(alpha).join(CanonType::var(d2)), theta});
  return r;
}

NormResult normalize_equation(const Equation& eq, NormContext& ctx) {
  NormResult r;
  if (eq.kind != Equation::Kind::Def) {
    r.new_equations.push_back(eq);
    TypingContext tctx{ctx.sigs, ctx.types};
    r.constraints.add(type_equation(ctx.env, ctx.node, eq, tctx));
    return r;
  }
  auto decl_clock = [&](const std::string& x) {
    const VarDecl* d = ctx.node.find(x);
    if (!d) throw Error(ErrorKind::UndefinedVariable, "undeclared variable '" + x + "'");
    return d->clock;
  };
  auto take = [&](std::size_t j, std::size_t n) {
    if (j + n > eq.lhs.size())
      throw Error(ErrorKind::ArityMismatch, "equation defines " + std::to_string(eq.lhs.size()) + " flows, more given");
  };

  std::size_t j = 0;
  for (const auto& e : eq.rhs) {
    if (e.kind == Expr::Kind::Fby) {
      NormResult r0 = normalize_exprs(e.args, ctx);
      NormResult r1 = normalize_exprs(e.next, ctx);
      if (r0.exprs.size() != r1.exprs.size()) throw Error(ErrorKind::ArityMismatch, "fby arguments differ in arity");
      take(j, r0.exprs.size());
      auto heads = std::move(r0.exprs);
      auto tails = std::move(r1.exprs);
      r0.exprs.clear();
      r1.exprs.clear();
      r.absorb(std::move(r0));
      r.absorb(std::move(r1));
      for (std::size_t i = 0; i < heads.size(); ++i, ++j) {
        const std::string& x = eq.lhs[j];
        bind_fby(x, decl_clock(x), type_at(e, i), heads[i], tails[i], ctx, r, true);
      }
    } else if (e.kind == Expr::Kind::Call) {
      NormResult ra = normalize_exprs(e.args, ctx);
      const NodeSignature& sig = signature_of(ctx, e.name);
      take(j, sig.outputs.size());
      std::vector<Expr> args;
      std::vector<SecType> arg_types;
      for (auto& [a, t] : ra.exprs) {
        args.push_back(std::move(a));
        arg_types.push_back(SecType{t, {}});
      }
      ra.exprs.clear();
      r.absorb(std::move(ra));
      std::vector<std::string> xs(eq.lhs.begin() + j, eq.lhs.begin() + j + sig.outputs.size());
      std::vector<SecType> outs;
      for (const auto& x : xs) outs.push_back(ctx.env.at(x));
      const Clock ck = e.clocks.empty() ? decl_clock(xs[0]) : e.clocks[0];
      r.constraints.add(instantiate(sig, arg_types, outs, type_clock(ctx.env, ck), ctx.types));
      r.new_equations.push_back(Equation::ncall(std::move(xs), ck, e.name, std::move(args)));
      j += sig.outputs.size();
    } else {
      NormResult re = normalize_expr(e, ctx, true);
      take(j, re.exprs.size());
      auto parts = std::move(re.exprs);
      re.exprs.clear();
      r.absorb(std::move(re));
      for (auto& [ei, ti] : parts) {
        const std::string& x = eq.lhs[j++];
        const Clock ck = decl_clock(x);
        r.constraints.add(Constraint{type_clock(ctx.env, ck).join(ti), ctx.env.at(x).type});
        r.new_equations.push_back(Equation::ndef(x, ck, std::move(ei)));
      }
    }
  }
  if (j != eq.lhs.size())
    throw Error(ErrorKind::ArityMismatch, "equation defines " + std::to_string(eq.lhs.size()) + " flows but only " +
                                              std::to_string(j) + " are given");
  return r;
}

Normalized normalize_program(const Program& prog) {
  Normalized out;
  Program src = infer_clocks(prog);
  SignatureTable sigs = infer_signatures(src);
  for (const auto& node : src.nodes) {
    NormContext ctx = make_context(node, sigs);
    Node n;
    n.name = node.name;
    n.inputs = node.inputs;
    n.outputs = node.outputs;
    n.locals = node.locals;
    n.span = node.span;
    NodeNormInfo info;
    std::vector<Equation> eqs;
    for (const auto& eq : node.equations) {
      NormResult r = normalize_equation(eq, ctx);
      for (auto& e : r.new_equations) eqs.push_back(std::move(e));
      for (auto& l : r.new_locals) {
        n.locals.push_back(VarDecl{l.name, l.type, l.clock, {}});
        info.new_locals.push_back(std::move(l));
      }
      info.constraints.add(r.constraints);
    }
    n.equations = std::move(eqs);
    std::vector<Equation> ordered;
    for (auto i : schedule(n)) ordered.push_back(std::move(n.equations[i]));
    n.equations = std::move(ordered);
    out.nodes[n.name] = std::move(info);
    out.program.nodes.push_back(std::move(n));
  }
  out.program = infer_clocks(out.program);
  return out;
}

}  // namespace luset
