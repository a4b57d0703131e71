#include "luset/secinfer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "luset/analysis.hpp"

namespace luset {

const SecType& TypeEnv::at(const std::string& x) const {
  auto it = vars.find(x);
  if (it == vars.end()) throw Error(ErrorKind::UnboundVar, "no security type for '" + x + "'");
  return it->second;
}

std::string NodeSignature::render(bool ascii) const {
  auto name = [&](const TypeVar& v) { return luset::render(CanonType::var(v), ascii); };
  std::string s = node + "(";
  for (std::size_t i = 0; i < inputs.size(); ++i) s += (i ? "," : "") + name(inputs[i]);
  s += ascii ? ") =>" : ") ⇒";
  s += name(clock) + " ";
  if (outputs.size() == 1) {
    s += name(outputs[0]);
  } else {
    s += "(";
    for (std::size_t i = 0; i < outputs.size(); ++i) s += (i ? "," : "") + name(outputs[i]);
    s += ")";
  }
  s += " {| " + luset::render(constraints, ascii) + " |}";
  return s;
}

std::map<TypeVar, std::string> NodeSignature::var_names(const Node& n) const {
  std::map<TypeVar, std::string> out;
  out[clock] = std::string(kBase);
  for (std::size_t i = 0; i < inputs.size() && i < n.inputs.size(); ++i) out[inputs[i]] = n.inputs[i].name;
  for (std::size_t i = 0; i < outputs.size() && i < n.outputs.size(); ++i) out[outputs[i]] = n.outputs[i].name;
  return out;
}

CanonType type_clock(const TypeEnv& env, const Clock& ck) {
  CanonType t = env.at(std::string(kBase)).type;
  for (const auto& st : ck.steps) t = t.join(env.at(st.var).type);
  return t;
}

ConstraintSet instantiate(const NodeSignature& sig, const std::vector<SecType>& args,
                          const std::vector<SecType>& outputs, const CanonType& clock, FreshTypes& fresh) {
  if (args.size() != sig.inputs.size())
    throw Error(ErrorKind::ArityMismatch, "node '" + sig.node + "' expects " + std::to_string(sig.inputs.size()) +
                                              " arguments, got " + std::to_string(args.size()));
  if (outputs.size() != sig.outputs.size())
    throw Error(ErrorKind::ArityMismatch, "node '" + sig.node + "' returns " + std::to_string(sig.outputs.size()) +
                                              " flows, " + std::to_string(outputs.size()) + " expected");
  Substitution sub;
  for (std::size_t i = 0; i < args.size(); ++i) sub[sig.inputs[i]] = args[i];
  for (std::size_t i = 0; i < outputs.size(); ++i) sub[sig.outputs[i]] = outputs[i];
  sub[sig.clock] = SecType{clock, {}};
  for (const auto& v : sig.constraints.vars())
    if (!sub.count(v)) sub[v] = SecType::var(fresh.fresh());
  ConstraintSet rho = substitute(sig.constraints, sub);
  for (const auto& a : args) rho.add(a.refinement);
  return rho;
}

namespace {

const NodeSignature& signature_of(const SignatureTable& sigs, const std::string& f) {
  auto it = sigs.find(f);
  if (it == sigs.end()) throw Error(ErrorKind::UnknownNode, "no signature for node '" + f + "'");
  return it->second;
}

SecType single(std::vector<SecType> ts) {
  if (ts.size() != 1) throw Error(ErrorKind::ArityMismatch, "expected a single flow");
  return std::move(ts[0]);
}

std::vector<SecType> zip_join(const std::vector<SecType>& a, const std::vector<SecType>& b, const SecType& extra) {
  if (a.size() != b.size()) throw Error(ErrorKind::ArityMismatch, "branches have different arities");
  std::vector<SecType> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(join(join(extra, a[i]), b[i]));
  return out;
}

}  // namespace

std::vector<SecType> type_exprs(const TypeEnv& env, const std::vector<Expr>& es, TypingContext& ctx) {
  std::vector<SecType> out;
  for (const auto& e : es) {
    auto ts = type_expr(env, e, ctx);
    out.insert(out.end(), ts.begin(), ts.end());
  }
  return out;
}

std::vector<SecType> type_expr(const TypeEnv& env, const Expr& e, TypingContext& ctx) {
  switch (e.kind) {
    case Expr::Kind::Const: return {SecType::bottom()};
    case Expr::Kind::Var: return {env.at(e.name)};
    case Expr::Kind::Unop: return {single(type_expr(env, e.args[0], ctx))};
    case Expr::Kind::Binop:
      return {join(single(type_expr(env, e.args[0], ctx)), single(type_expr(env, e.args[1], ctx)))};
    case Expr::Kind::When: {
      auto ts = type_exprs(env, e.args, ctx);
      const SecType& x = env.at(e.name);
      for (auto& t : ts) t = join(t, x);
      return ts;
    }
    case Expr::Kind::Merge:
      return zip_join(type_exprs(env, e.on_true, ctx), type_exprs(env, e.on_false, ctx), env.at(e.name));
    case Expr::Kind::Ite: {
      SecType theta = single(type_expr(env, e.args[0], ctx));
      return zip_join(type_exprs(env, e.on_true, ctx), type_exprs(env, e.on_false, ctx), theta);
    }
    case Expr::Kind::Fby:
      return zip_join(type_exprs(env, e.args, ctx), type_exprs(env, e.next, ctx), SecType::bottom());
    case Expr::Kind::Call: {
      const NodeSignature& sig = signature_of(ctx.sigs, e.name);
      auto args = type_exprs(env, e.args, ctx);
      CanonType ck = type_clock(env, e.clocks.empty() ? Clock::base() : e.clocks[0]);
      std::vector<SecType> outs;
      for (std::size_t i = 0; i < sig.outputs.size(); ++i) {
        TypeVar d = ctx.fresh.fresh();
        if (ctx.created) ctx.created->push_back(d);
        outs.push_back(SecType::var(d));
      }
      ConstraintSet rho = instantiate(sig, args, outs, ck, ctx.fresh);
      if (ctx.calls) {
        CallSite site{e.name, args, ck, {}};
        for (const auto& o : outs) site.outputs.push_back(o.type);
        ctx.calls->push_back(std::move(site));
      }
      for (auto& o : outs) o.refinement = rho;
      return outs;
    }
  }
  return {};
}

ConstraintSet type_equation(const TypeEnv& env, const Node& node, const Equation& eq, TypingContext& ctx) {
  ConstraintSet out;
  auto lhs_clock = [&](std::size_t i) {
    if (eq.kind != Equation::Kind::Def) return eq.clock;
    const VarDecl* d = node.find(eq.lhs[i]);
    if (!d) throw Error(ErrorKind::UnboundVar, "undeclared variable '" + eq.lhs[i] + "'");
    return d->clock;
  };
  auto define = [&](const std::vector<SecType>& rhs) {
    if (rhs.size() != eq.lhs.size())
      throw Error(ErrorKind::ArityMismatch, "equation defines " + std::to_string(eq.lhs.size()) +
                                                " flows but its right-hand side has " + std::to_string(rhs.size()));
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      const SecType& target = env.at(eq.lhs[i]);
      out.add(rhs[i].refinement);
      out.add(target.refinement);
      out.add(Constraint{type_clock(env, lhs_clock(i)).join(rhs[i].type), target.type});
    }
  };
  switch (eq.kind) {
    case Equation::Kind::Def:
    case Equation::Kind::NDef: define(type_exprs(env, eq.rhs, ctx)); break;
    case Equation::Kind::NFby: define(type_exprs(env, eq.rhs, ctx)); break;
    case Equation::Kind::NCall: {
      const NodeSignature& sig = signature_of(ctx.sigs, eq.callee);
      auto args = type_exprs(env, eq.rhs, ctx);
      std::vector<SecType> outs;
      for (const auto& x : eq.lhs) outs.push_back(env.at(x));
      CanonType ck = type_clock(env, eq.clock);
      out.add(instantiate(sig, args, outs, ck, ctx.fresh));
      if (ctx.calls) {
        CallSite site{eq.callee, args, ck, {}};
        for (const auto& o : outs) site.outputs.push_back(o.type);
        ctx.calls->push_back(std::move(site));
      }
      break;
    }
  }
  return out;
}

Simplified simplify(std::vector<CanonType> types, ConstraintSet rho, const std::vector<TypeVar>& locals) {
  for (const auto& d : locals) {
    const CanonType target = CanonType::var(d);
    std::optional<Constraint> def;
    for (const auto& c : rho) {
      if (c.rhs != target) continue;
      if (def) throw Error(ErrorKind::MultipleDefiningConstraints, "more than one constraint defines '" + d + "'");
      def = c;
    }
    if (!def) continue;
    rho.erase(*def);
    Substitution sub{{d, SecType{def->lhs.without(target), {}}}};
    rho = substitute(rho, sub);
    for (auto& t : types) t = substitute(t, sub).type;
  }
  return {std::move(types), std::move(rho)};
}

TypeEnv signature_env(const Node& node, NodeSignature& sig, FreshTypes& fresh, std::vector<TypeVar>& locals) {
  TypeEnv env;
  sig.node = node.name;
  sig.clock = "γ";
  env.vars[std::string(kBase)] = SecType::var(sig.clock);
  for (std::size_t i = 0; i < node.inputs.size(); ++i) {
    sig.inputs.push_back("α" + std::to_string(i + 1));
    env.vars[node.inputs[i].name] = SecType::var(sig.inputs.back());
  }
  for (std::size_t i = 0; i < node.outputs.size(); ++i) {
    sig.outputs.push_back(node.outputs.size() == 1 ? "β" : "β" + std::to_string(i + 1));
    env.vars[node.outputs[i].name] = SecType::var(sig.outputs.back());
  }
  for (const auto& d : node.locals) {
    locals.push_back(fresh.fresh());
    env.vars[d.name] = SecType::var(locals.back());
  }
  return env;
}

NodeTyping type_node(const Program&, const Node& node, const SignatureTable& sigs) {
  NodeTyping r;
  FreshTypes fresh;
  r.env = signature_env(node, r.signature, fresh, r.locals);
  std::vector<TypeVar> created;
  TypingContext ctx{sigs, fresh, &r.calls, &created};
  for (const auto& eq : node.equations) r.full.add(type_equation(r.env, node, eq, ctx));
  r.locals.insert(r.locals.end(), created.begin(), created.end());
  for (const auto& v : r.full.vars())
    if (std::find(r.locals.begin(), r.locals.end(), v) == r.locals.end() && v.rfind("δ", 0) == 0)
      r.locals.push_back(v);

  std::vector<CanonType> outs;
  for (const auto& b : r.signature.outputs) outs.push_back(CanonType::var(b));
  r.signature.constraints = simplify(outs, r.full, r.locals).constraints;
  return r;
}

NodeSignature infer_node_signature(const Program& prog, const Node& node, const SignatureTable& sigs) {
  return type_node(prog, node, sigs).signature;
}

SignatureTable infer_signatures(const Program& prog) {
  SignatureTable sigs;
  for (const auto& name : call_order(prog)) sigs[name] = infer_node_signature(prog, *prog.find(name), sigs);
  return sigs;
}

namespace {

Assignment assignment_from(const nlohmann::json& j) {
  Assignment a;
  a.node = j.at("node").get<std::string>();
  if (j.contains("base")) a.base = j.at("base").get<std::string>();
  if (j.contains("inputs")) a.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
  if (j.contains("outputs")) a.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
  return a;
}

}  // namespace

std::vector<Assignment> parse_assignments(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    std::vector<Assignment> out;
    if (j.is_array()) {
      for (const auto& item : j) out.push_back(assignment_from(item));
    } else {
      out.push_back(assignment_from(j));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed assignment: ") + e.what());
  }
}

std::vector<Assignment> load_assignments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_assignments(ss.str());
}

Ground ground_interface(const Node& node, const NodeSignature& sig, const Assignment& a, const Lattice& L) {
  Ground fixed;
  if (a.base) fixed[sig.clock] = L.level(*a.base);
  auto assign = [&](const std::vector<VarDecl>& decls, const std::vector<TypeVar>& vars,
                    const std::map<std::string, std::string>& levels, const char* what) {
    for (const auto& [name, label] : levels) {
      auto it = std::find_if(decls.begin(), decls.end(), [&](const VarDecl& d) { return d.name == name; });
      if (it == decls.end())
        throw Error(ErrorKind::InvalidInput,
                    "node '" + node.name + "' has no " + what + " named '" + name + "'");
      fixed[vars[static_cast<std::size_t>(it - decls.begin())]] = L.level(label);
    }
  };
  assign(node.inputs, sig.inputs, a.inputs, "input");
  assign(node.outputs, sig.outputs, a.outputs, "output");
  Ground s = least_solution(sig.constraints, fixed, L).assignment;
  for (const auto* vs : {&sig.inputs, &sig.outputs})
    for (const auto& v : *vs) s.emplace(v, L.bottom());
  s.emplace(sig.clock, L.bottom());
  return s;
}

namespace {

struct Checker {
  const Program& prog;
  const Lattice& L;
  const SignatureTable& sigs;
  std::map<std::string, NodeTyping> typings;

  const NodeTyping& typing(const std::string& name) {
    auto it = typings.find(name);
    if (it == typings.end()) it = typings.emplace(name, type_node(prog, *prog.find(name), sigs)).first;
    return it->second;
  }

  // Internal node calls of `name` under an interface instantiation.
  std::vector<CallVerdict> calls(const std::string& name, const Ground& interface, int depth) {
    std::vector<CallVerdict> out;
    if (depth > 64) return out;
    const NodeTyping& t = typing(name);
    Ground s = least_solution(t.full, interface, L).assignment;
    for (std::size_t i = 0; i < t.calls.size(); ++i) {
      const CallSite& site = t.calls[i];
      const NodeSignature& sig = sigs.at(site.callee);
      CallVerdict v;
      v.caller = name;
      v.callee = site.callee;
      v.site = i;
      Ground fixed;
      for (std::size_t k = 0; k < sig.inputs.size(); ++k) fixed[sig.inputs[k]] = eval_ground(site.args[k].type, s, L);
      fixed[sig.clock] = eval_ground(site.clock, s, L);
      LeastSolution u = least_solution(sig.constraints, fixed, L);
      v.instantiation = u.assignment;
      for (const auto& b : sig.outputs) v.instantiation.emplace(b, L.bottom());
      v.violated = u.violated;
      for (std::size_t k = 0; k < sig.outputs.size(); ++k) {
        Level have = eval_ground(site.outputs[k], s, L);
        if (!L.leq(v.instantiation[sig.outputs[k]], have))
          v.violated.push_back(Constraint{CanonType::var(sig.outputs[k]), site.outputs[k]});
      }
      v.secure = v.violated.empty();
      v.nested = calls(site.callee, v.instantiation, depth + 1);
      for (const auto& n : v.nested) v.secure = v.secure && n.secure;
      out.push_back(std::move(v));
    }
    return out;
  }
};

nlohmann::json levels_json(const Ground& g, const std::map<std::string, std::string>& names, const Lattice& L) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [v, l] : g) {
    auto it = names.find(v);
    j[it == names.end() ? v : it->second] = L.label(l);
  }
  return j;
}

std::string rename(const Constraint& c, const std::map<std::string, std::string>& names, bool ascii) {
  auto side = [&](const CanonType& t) {
    std::string s;
    for (const auto& v : t.vars) {
      if (!s.empty()) s += ascii ? " lub " : " ⊔ ";
      auto it = names.find(v);
      s += it == names.end() ? v : it->second;
    }
    return s;
  };
  return side(c.lhs) + (ascii ? " <= " : " ⊑ ") + side(c.rhs);
}

nlohmann::json call_json(const CallVerdict& v, const Lattice& L) {
  nlohmann::json j;
  j["caller"] = v.caller;
  j["callee"] = v.callee;
  j["site"] = v.site;
  j["verdict"] = v.secure ? "Secure" : "Insecure";
  nlohmann::json inst = nlohmann::json::object();
  for (const auto& [var, l] : v.instantiation) inst[var] = L.label(l);
  j["instantiation"] = inst;
  j["violated"] = nlohmann::json::array();
  for (const auto& c : v.violated) j["violated"].push_back(render(c));
  j["calls"] = nlohmann::json::array();
  for (const auto& n : v.nested) j["calls"].push_back(call_json(n, L));
  return j;
}

void call_text(std::ostringstream& os, const CallVerdict& v, const Lattice& L, bool ascii, int indent) {
  os << std::string(static_cast<std::size_t>(indent), ' ') << "call " << v.callee << " #" << v.site << " in "
     << v.caller << ": " << (v.secure ? "secure" : "insecure");
  for (const auto& c : v.violated) os << "\n" << std::string(static_cast<std::size_t>(indent + 2), ' ') << "violated " << render(c, ascii);
  os << '\n';
  for (const auto& n : v.nested) call_text(os, n, L, ascii, indent + 2);
}

}  // namespace

bool Report::secure() const {
  return std::all_of(nodes.begin(), nodes.end(), [](const NodeVerdict& n) { return n.secure; });
}

std::string Report::text(const Lattice& L, bool ascii) const {
  std::ostringstream os;
  for (const auto& n : nodes) {
    os << n.node << ": " << (n.secure ? "Secure" : "Insecure") << '\n';
    os << "  signature " << n.signature.render(ascii) << '\n';
    os << "  levels";
    for (const auto& [v, l] : n.instantiation) {
      auto it = n.names.find(v);
      os << ' ' << (it == n.names.end() ? v : it->second) << '=' << L.label(l);
    }
    os << '\n';
    for (const auto& c : n.violated)
      os << "  violated " << render(c, ascii) << "   [" << rename(c, n.names, ascii) << "]\n";
    for (const auto& c : n.calls) call_text(os, c, L, ascii, 2);
  }
  return os.str();
}

std::string Report::json(const Lattice& L) const {
  nlohmann::json j;
  j["check"] = "security";
  j["verdict"] = secure() ? "Secure" : "Insecure";
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : nodes) {
    nlohmann::json nj;
    nj["node"] = n.node;
    nj["verdict"] = n.secure ? "Secure" : "Insecure";
    nj["signature"] = n.signature.render();
    nj["constraints"] = nlohmann::json::array();
    for (const auto& c : n.signature.constraints) nj["constraints"].push_back(render(c));
    nj["levels"] = levels_json(n.instantiation, n.names, L);
    nj["violated"] = nlohmann::json::array();
    for (const auto& c : n.violated)
      nj["violated"].push_back({{"constraint", render(c)}, {"variables", rename(c, n.names, false)}});
    nj["calls"] = nlohmann::json::array();
    for (const auto& c : n.calls) nj["calls"].push_back(call_json(c, L));
    j["nodes"].push_back(nj);
  }
  return j.dump(2);
}

Report check_program(const Program& prog, const Lattice& L, const std::vector<Assignment>& assignments) {
  SignatureTable sigs = infer_signatures(prog);
  Checker checker{prog, L, sigs, {}};
  Report r;
  for (const auto& a : assignments) {
    const Node* node = prog.find(a.node);
    if (!node) throw Error(ErrorKind::UnknownNode, "assignment names unknown node '" + a.node + "'");
    NodeVerdict v;
    v.node = node->name;
    v.signature = sigs.at(node->name);
    v.names = v.signature.var_names(*node);
    v.instantiation = ground_interface(*node, v.signature, a, L);
    v.violated = violations(v.signature.constraints, v.instantiation, L);
    v.calls = checker.calls(node->name, v.instantiation, 0);
    v.secure = v.violated.empty() &&
               std::all_of(v.calls.begin(), v.calls.end(), [](const CallVerdict& c) { return c.secure; });
    r.nodes.push_back(std::move(v));
  }
  return r;
}

}  // namespace luset
