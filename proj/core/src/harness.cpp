#include "luset/harness.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "luset/analysis.hpp"
#include "luset/generator.hpp"
#include "luset/interp.hpp"
#include "luset/normalize.hpp"

namespace luset {

using nlohmann::json;

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Skipped: return "skipped";
  }
  return "?";
}

namespace {

json report_json(const CheckReport& r) {
  json j;
  j["check"] = r.check;
  j["node"] = r.node;
  j["verdict"] = std::string(to_string(r.verdict));
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  if (!r.message.empty()) j["message"] = r.message;
  if (r.check == "type-preservation") j["identical"] = r.identical;
  if (!r.counterexample.empty()) j["counterexample"] = json::parse(r.counterexample);
  return j;
}

json stream_json(const VStream& s) {
  json j = json::array();
  for (const auto& v : s) j.push_back(to_string(v));
  return j;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (std::uint64_t x : {a, b}) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 31;
  }
  return h;
}

}  // namespace

std::string CheckReport::json() const { return report_json(*this).dump(2); }

std::string CheckReport::text() const {
  std::ostringstream os;
  os << check;
  if (!node.empty()) os << ' ' << node;
  os << ": " << to_string(verdict) << " (" << trials << " trials, seed " << seed << ")";
  if (check == "type-preservation") os << (identical ? ", signatures identical" : ", signatures differ");
  if (!message.empty()) os << "\n  " << message;
  if (!counterexample.empty()) os << "\n  counterexample: " << nlohmann::json::parse(counterexample).dump();
  return os.str();
}

std::string json_array(const std::vector<CheckReport>& reports) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(report_json(r));
  return j.dump(2);
}

History project_history(const History& H, const std::map<std::string, Level>& levels, Level t, const Lattice& L) {
  History out;
  for (const auto& [x, s] : H) {
    auto it = levels.find(x);
    if (it != levels.end() && L.leq(it->second, t)) out[x] = s;
  }
  return out;
}

NodeLevels node_levels(const Program& prog, const std::string& name, const Assignment& a, const Lattice& L) {
  const Node* node = prog.find(name);
  if (!node) throw Error(ErrorKind::UnknownNode, "unknown node '" + name + "'");
  SignatureTable sigs = infer_signatures(prog);
  NodeTyping typing = type_node(prog, *node, sigs);
  Assignment as = a;
  as.node = name;
  Ground interface = ground_interface(*node, typing.signature, as, L);
  Ground s = least_solution(typing.full, interface, L).assignment;
  for (const auto& v : typing.full.vars()) s.emplace(v, L.bottom());
  auto level = [&](const CanonType& t) {
    Level l = L.bottom();
    for (const auto& v : t.vars) l = L.join(l, s.count(v) ? s.at(v) : L.bottom());
    return l;
  };
  NodeLevels out;
  for (const auto& [x, t] : typing.env.vars) out.vars[x] = level(t.type);
  Report r = check_program(prog, L, {as});
  out.secure = r.secure();
  for (const auto& v : r.nodes)
    for (const auto& c : v.violated) out.violated.push_back(render(c));
  return out;
}

CheckReport check_non_interference(const Program& source, const NIConfig& cfg) {
  CheckReport rep;
  rep.check = "non-interference";
  rep.node = cfg.node;
  rep.seed = cfg.seed;
  const Program prog = infer_clocks(source);
  const Node* node = prog.find(cfg.node);
  if (!node) throw Error(ErrorKind::UnknownNode, "unknown node '" + cfg.node + "'");
  const Lattice& L = cfg.lattice;
  NodeLevels levels = node_levels(prog, cfg.node, cfg.assignment, L);
  if (!levels.secure && !cfg.force) {
    rep.verdict = Verdict::Skipped;
    rep.message = "assignment rejected by the security check; use --force to run anyway";
    return rep;
  }
  if (!levels.secure) rep.message = "forced run on an insecure assignment";

  std::vector<Level> targets;
  if (cfg.level) {
    targets.push_back(L.level(*cfg.level));
  } else {
    for (Level l = 0; l < L.size(); ++l) targets.push_back(l);
  }

  Interpreter interp(prog);
  const Level base_level = levels.vars.at(std::string(kBase));
  for (Level t : targets) {
    bool share_base = L.leq(base_level, t);
    std::vector<bool> low;
    for (const auto& d : node->inputs) {
      low.push_back(L.leq(levels.vars.at(d.name), t));
      share_base = share_base || low.back();
    }
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      Rng rng(mix(cfg.seed, t, trial));
      BStream b1 = random_base(rng, cfg.ticks);
      BStream b2 = share_base ? b1 : random_base(rng, cfg.ticks);
      auto in1 = random_inputs(rng, *node, b1);
      auto in2 = random_inputs(rng, *node, b2);
      for (std::size_t i = 0; i < low.size(); ++i) {
        if (low[i]) {
          in2[i] = in1[i];
        } else if (trial == 0) {
          // first trial: secrets differ wherever both runs are present
          for (std::size_t k = 0; k < cfg.ticks; ++k)
            while (in1[i][k].is_present() && in2[i][k] == in1[i][k])
              in2[i][k] = random_value(rng, node->inputs[i].type);
        }
      }
      ++rep.trials;
      NodeRun r1, r2;
      try {
        r1 = interp.run(cfg.node, in1, b1);
        r2 = interp.run(cfg.node, in2, b2);
      } catch (const Error& e) {
        rep.verdict = Verdict::Inconclusive;
        rep.message = std::string("run failed: ") + e.what();
        return rep;
      }
      History p1 = project_history(r1.history, levels.vars, t, L);
      History p2 = project_history(r2.history, levels.vars, t, L);
      if (p1 == p2) continue;
      std::size_t tick = cfg.ticks;
      std::string var;
      for (const auto& [x, s1] : p1) {
        const auto& s2 = p2.at(x);
        for (std::size_t k = 0; k < s1.size() && k < s2.size(); ++k)
          if (s1[k] != s2[k] && k < tick) {
            tick = k;
            var = x;
          }
      }
      nlohmann::json ce;
      ce["level"] = L.label(t);
      ce["trial"] = trial;
      ce["tick"] = tick;
      ce["variable"] = var;
      for (int run = 0; run < 2; ++run) {
        const auto& ins = run == 0 ? in1 : in2;
        const auto& h = run == 0 ? r1.history : r2.history;
        nlohmann::json rj;
        for (std::size_t i = 0; i < node->inputs.size(); ++i) {
          VStream prefix(ins[i].begin(), ins[i].begin() + static_cast<std::ptrdiff_t>(tick + 1));
          rj["inputs"][node->inputs[i].name] = stream_json(prefix);
        }
        const VStream& s = h.at(var);
        rj[var] = stream_json(VStream(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(tick + 1)));
        ce[run == 0 ? "run1" : "run2"] = rj;
      }
      rep.counterexample = ce.dump();
      rep.verdict = Verdict::Fail;
      rep.message = "projections at level " + L.label(t) + " differ on '" + var + "' at tick " + std::to_string(tick);
      return rep;
    }
  }
  return rep;
}

CheckReport check_semantics_preservation(const Program& source, const std::string& f, std::size_t trials,
                                         std::size_t ticks, std::uint64_t seed) {
  CheckReport rep;
  rep.check = "semantics-preservation";
  rep.node = f;
  rep.seed = seed;
  const Program prog = infer_clocks(source);
  const Node* node = prog.find(f);
  if (!node) throw Error(ErrorKind::UnknownNode, "unknown node '" + f + "'");
  Interpreter src(prog);
  Interpreter dst(normalize_program(prog).program);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(mix(seed, trial));
    BStream base = random_base(rng, ticks);
    auto ins = random_inputs(rng, *node, base);
    ++rep.trials;
    NodeRun a;
    try {
      a = src.run(f, ins, base);
    } catch (const Error& e) {
      rep.verdict = Verdict::Inconclusive;
      rep.message = std::string("source run failed: ") + e.what();
      return rep;
    }
    NodeRun b;
    try {
      b = dst.run(f, ins, base);
    } catch (const Error& e) {
      rep.verdict = Verdict::Fail;
      rep.message = std::string("normalized run failed: ") + e.what();
      return rep;
    }
    if (a.outputs == b.outputs) continue;
    nlohmann::json ce;
    ce["trial"] = trial;
    for (std::size_t i = 0; i < node->inputs.size(); ++i) ce["inputs"][node->inputs[i].name] = stream_json(ins[i]);
    for (std::size_t i = 0; i < node->outputs.size(); ++i) {
      ce["source"][node->outputs[i].name] = stream_json(a.outputs[i]);
      ce["normalized"][node->outputs[i].name] = stream_json(b.outputs[i]);
    }
    rep.counterexample = ce.dump();
    rep.verdict = Verdict::Fail;
    rep.message = "output streams differ";
    return rep;
  }
  return rep;
}

namespace {

Level random_level(Rng& rng, const Lattice& L) {
  return std::uniform_int_distribution<Level>(0, L.size() - 1)(rng);
}

nlohmann::json ground_json(const Ground& s, const Lattice& L) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [v, l] : s) j[v] = L.label(l);
  return j;
}

}  // namespace

CheckReport check_type_preservation(const Program& source, const std::string& f, std::size_t lattices,
                                    std::size_t samples, std::uint64_t seed) {
  CheckReport rep;
  rep.check = "type-preservation";
  rep.node = f;
  rep.seed = seed;
  const Program prog = infer_clocks(source);
  if (!prog.find(f)) throw Error(ErrorKind::UnknownNode, "unknown node '" + f + "'");
  const NodeSignature before = infer_signatures(prog).at(f);
  const NodeSignature after = infer_signatures(normalize_program(prog).program).at(f);
  rep.identical = before.constraints == after.constraints;

  std::set<TypeVar> vars = before.constraints.vars();
  for (const auto& v : after.constraints.vars()) vars.insert(v);
  for (const auto* g : {&before.inputs, &before.outputs}) vars.insert(g->begin(), g->end());
  vars.insert(before.clock);

  Rng rng(seed);
  for (std::size_t l = 0; l < lattices; ++l) {
    Lattice L = random_lattice(rng);
    for (std::size_t k = 0; k < samples; ++k) {
      Ground s;
      for (const auto& v : vars) s[v] = random_level(rng, L);
      if (k % 2 == 1) {
        // lift the outputs so that the source constraints are likely to hold
        Ground fixed;
        for (const auto& v : vars)
          if (std::find(before.outputs.begin(), before.outputs.end(), v) == before.outputs.end()) fixed[v] = s[v];
        Ground least = least_solution(before.constraints, fixed, L).assignment;
        for (const auto& b : before.outputs) s[b] = L.join(s[b], least.count(b) ? least[b] : L.bottom());
      }
      ++rep.trials;
      if (!satisfies(before.constraints, s, L) || satisfies(after.constraints, s, L)) continue;
      nlohmann::json ce;
      ce["lattice"] = nlohmann::json::parse(L.to_json());
      ce["instantiation"] = ground_json(s, L);
      ce["before"] = render(before.constraints);
      ce["after"] = render(after.constraints);
      rep.counterexample = ce.dump();
      rep.verdict = Verdict::Fail;
      rep.message = "instantiation satisfies the source signature but not the normalized one";
      return rep;
    }
  }
  if (!rep.identical)
    rep.message = "before: " + render(before.constraints) + "  after: " + render(after.constraints);
  return rep;
}

namespace {

// Direct meaning of raw types: undefined when a refinement does not hold.
std::optional<Level> eval_raw(const SecTypeRaw& t, const Ground& s, const Lattice& L);

bool holds_raw(const std::vector<std::pair<SecTypeRaw, SecTypeRaw>>& rho, const Ground& s, const Lattice& L) {
  for (const auto& [a, b] : rho) {
    auto x = eval_raw(a, s, L);
    auto y = eval_raw(b, s, L);
    if (!x || !y || !L.leq(*x, *y)) return false;
  }
  return true;
}

std::optional<Level> eval_raw(const SecTypeRaw& t, const Ground& s, const Lattice& L) {
  switch (t.kind) {
    case SecTypeRaw::Kind::Bot: return L.bottom();
    case SecTypeRaw::Kind::Var: return s.at(t.name);
    case SecTypeRaw::Kind::Lub: {
      auto a = eval_raw(t.children[0], s, L);
      auto b = eval_raw(t.children[1], s, L);
      if (!a || !b) return std::nullopt;
      return L.join(*a, *b);
    }
    case SecTypeRaw::Kind::Refine: {
      auto a = eval_raw(t.children[0], s, L);
      if (!a || !holds_raw(t.constraints, s, L)) return std::nullopt;
      return a;
    }
  }
  return std::nullopt;
}

std::optional<Level> eval_canon(const SecType& t, const Ground& s, const Lattice& L) {
  if (!satisfies(t.refinement, s, L)) return std::nullopt;
  return eval_ground(t.type, s, L);
}

const std::vector<TypeVar> kAlphabet{"α1", "α2", "β", "γ", "δ1"};

SecTypeRaw random_raw(Rng& rng, int depth, bool refinements) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : (refinements ? 4 : 3));
  switch (pick(rng)) {
    case 0: return SecTypeRaw::bot();
    case 1:
      return SecTypeRaw::var(kAlphabet[std::uniform_int_distribution<std::size_t>(0, kAlphabet.size() - 1)(rng)]);
    case 2:
    case 3: return SecTypeRaw::lub(random_raw(rng, depth - 1, refinements), random_raw(rng, depth - 1, refinements));
    default: {
      std::vector<std::pair<SecTypeRaw, SecTypeRaw>> rho;
      int n = std::uniform_int_distribution<int>(0, 2)(rng);
      for (int i = 0; i < n; ++i) rho.push_back({random_raw(rng, 1, false), random_raw(rng, 1, false)});
      return SecTypeRaw::refine(random_raw(rng, depth - 1, refinements), std::move(rho));
    }
  }
}

// One equation of the theory applied at the root of t, when applicable.
std::optional<SecTypeRaw> rewrite_root(const SecTypeRaw& t, int rule, Rng& rng) {
  using K = SecTypeRaw::Kind;
  switch (rule) {
    case 0:  // associativity, both directions
      if (t.kind == K::Lub && t.children[0].kind == K::Lub)
        return SecTypeRaw::lub(t.children[0].children[0], SecTypeRaw::lub(t.children[0].children[1], t.children[1]));
      if (t.kind == K::Lub && t.children[1].kind == K::Lub)
        return SecTypeRaw::lub(SecTypeRaw::lub(t.children[0], t.children[1].children[0]), t.children[1].children[1]);
      return std::nullopt;
    case 1:  // commutativity
      if (t.kind == K::Lub) return SecTypeRaw::lub(t.children[1], t.children[0]);
      return std::nullopt;
    case 2: return SecTypeRaw::lub(t, t);  // idempotence
    case 3:                                // unit
      return std::bernoulli_distribution(0.5)(rng) ? SecTypeRaw::lub(t, SecTypeRaw::bot())
                                                   : SecTypeRaw::lub(SecTypeRaw::bot(), t);
    case 4: return SecTypeRaw::refine(t, {});  // empty refinement
    case 5:                                     // joining refinements
      if (t.kind == K::Lub && t.children[0].kind == K::Refine && t.children[1].kind == K::Refine) {
        auto rho = t.children[0].constraints;
        rho.insert(rho.end(), t.children[1].constraints.begin(), t.children[1].constraints.end());
        return SecTypeRaw::refine(SecTypeRaw::lub(t.children[0].children[0], t.children[1].children[0]), rho);
      }
      if (t.kind == K::Lub && t.children[0].kind == K::Refine)  // completion rule
        return SecTypeRaw::refine(SecTypeRaw::lub(t.children[0].children[0], t.children[1]), t.children[0].constraints);
      return std::nullopt;
    case 6:  // nested refinements
      if (t.kind == K::Refine && t.children[0].kind == K::Refine) {
        auto rho = t.children[0].constraints;
        rho.insert(rho.end(), t.constraints.begin(), t.constraints.end());
        return SecTypeRaw::refine(t.children[0].children[0], rho);
      }
      return std::nullopt;
    default: return std::nullopt;
  }
}

// Applies a random equation at a random position; false when none applied.
bool rewrite_somewhere(SecTypeRaw& t, Rng& rng) {
  std::vector<SecTypeRaw*> positions;
  std::function<void(SecTypeRaw&)> collect = [&](SecTypeRaw& u) {
    positions.push_back(&u);
    for (auto& c : u.children) collect(c);
  };
  collect(t);
  std::shuffle(positions.begin(), positions.end(), rng);
  std::vector<int> rules{0, 1, 2, 3, 4, 5, 6};
  std::shuffle(rules.begin(), rules.end(), rng);
  for (auto* p : positions)
    for (int rule : rules)
      if (auto r = rewrite_root(*p, rule, rng)) {
        *p = std::move(*r);
        return true;
      }
  return false;
}

void leaves(const SecTypeRaw& t, std::vector<SecTypeRaw>& out) {
  if (t.kind == SecTypeRaw::Kind::Lub) {
    for (const auto& c : t.children) leaves(c, out);
  } else {
    out.push_back(t);
  }
}

SecTypeRaw random_tree(std::vector<SecTypeRaw> ls, Rng& rng) {
  while (ls.size() > 1) {
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, ls.size() - 2)(rng);
    ls[i] = SecTypeRaw::lub(ls[i], ls[i + 1]);
    ls.erase(ls.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  }
  return ls.empty() ? SecTypeRaw::bot() : ls[0];
}

Ground random_ground(Rng& rng, const Lattice& L) {
  Ground s;
  for (const auto& v : kAlphabet) s[v] = random_level(rng, L);
  return s;
}

}  // namespace

CheckReport check_equational_soundness(std::size_t samples, std::size_t instantiations, std::size_t permutations,
                                       std::uint64_t seed) {
  CheckReport rep;
  rep.check = "equational-soundness";
  rep.seed = seed;
  Rng rng(seed);
  auto fail = [&](const std::string& why, const SecTypeRaw& a, const SecTypeRaw& b) {
    nlohmann::json ce;
    ce["left"] = render(a);
    ce["right"] = render(b);
    rep.counterexample = ce.dump();
    rep.verdict = Verdict::Fail;
    rep.message = why;
    return rep;
  };
  for (std::size_t i = 0; i < samples; ++i) {
    SecTypeRaw a = random_raw(rng, 4, true);
    SecTypeRaw b = a;
    int steps = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int k = 0; k < steps; ++k) rewrite_somewhere(b, rng);
    ++rep.trials;
    SecType ca = canon(a);
    SecType cb = canon(b);
    if (!(ca == cb)) return fail("related types have different canonical forms", a, b);
    for (std::size_t k = 0; k < instantiations; ++k) {
      Lattice L = random_lattice(rng);
      Ground s = random_ground(rng, L);
      auto ra = eval_raw(a, s, L);
      auto rb = eval_raw(b, s, L);
      if (ra != rb) return fail("related types evaluate differently", a, b);
      if (eval_canon(ca, s, L) != ra) return fail("canonical form evaluates differently", a, b);
      // constraints built from related types are equisatisfiable
      SecTypeRaw other = random_raw(rng, 2, true);
      bool raw_ok = holds_raw({{a, other}}, s, L);
      if (satisfies(canon_constraint(a, other), s, L) != raw_ok ||
          satisfies(canon_constraint(b, other), s, L) != raw_ok)
        return fail("related constraints are not equisatisfiable", a, b);
    }
  }
  for (std::size_t i = 0; i < permutations; ++i) {
    std::vector<SecTypeRaw> ls;
    leaves(random_raw(rng, 5, true), ls);
    SecTypeRaw a = random_tree(ls, rng);
    std::shuffle(ls.begin(), ls.end(), rng);
    SecTypeRaw b = random_tree(ls, rng);
    ++rep.trials;
    if (!(canon(a) == canon(b))) return fail("canonical form depends on the order of joins", a, b);
  }
  return rep;
}

CheckReport check_simple_security(std::size_t samples, std::uint64_t seed) {
  CheckReport rep;
  rep.check = "simple-security";
  rep.seed = seed;
  Rng rng(seed);
  std::vector<VarDecl> vars;
  TypeEnv env;
  env.vars[std::string(kBase)] = SecType::var("γ");
  for (int i = 0; i < 6; ++i) {
    std::string x = "x" + std::to_string(i);
    vars.push_back({x, i % 2 ? DataType::Bool : DataType::Int, {}, {}});
    env.vars[x] = SecType::var("α" + std::to_string(i + 1));
  }
  SignatureTable sigs;
  for (std::size_t i = 0; i < samples; ++i) {
    Expr e = random_expr(rng, vars, std::bernoulli_distribution(0.5)(rng) ? DataType::Int : DataType::Bool, 4);
    FreshTypes fresh;
    TypingContext ctx{sigs, fresh};
    auto ts = type_expr(env, e, ctx);
    CanonType all;
    for (const auto& t : ts) all = all.join(t.type);
    ++rep.trials;
    for (const auto& x : free_vars(e)) {
      if (x == kBase) continue;
      if (env.at(x).type.subset_of(all)) continue;
      nlohmann::json ce;
      ce["expression"] = render(all);
      ce["variable"] = x;
      rep.counterexample = ce.dump();
      rep.verdict = Verdict::Fail;
      rep.message = "a free variable is not bounded by the expression type";
      return rep;
    }
  }
  return rep;
}

CheckReport check_simplify(std::size_t samples, std::uint64_t seed) {
  CheckReport rep;
  rep.check = "simplify";
  rep.seed = seed;
  Rng rng(seed);
  const std::vector<TypeVar> interface{"α1", "α2", "α3", "β1", "β2", "γ"};
  for (std::size_t i = 0; i < samples; ++i) {
    Lattice L = random_lattice(rng);
    int k = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<TypeVar> locals;
    for (int j = 1; j <= k; ++j) locals.push_back("δ" + std::to_string(j));
    std::vector<TypeVar> pool = interface;
    pool.insert(pool.end(), locals.begin(), locals.end());
    auto random_join = [&](const std::vector<TypeVar>& from, std::size_t max) {
      std::vector<TypeVar> vs;
      std::size_t n = std::uniform_int_distribution<std::size_t>(1, max)(rng);
      for (std::size_t j = 0; j < n; ++j) vs.push_back(from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)]);
      return CanonType::of(vs);
    };
    // locals occur on a right-hand side only in their own definition
    ConstraintSet rho;
    for (const auto& d : locals)
      if (std::bernoulli_distribution(0.85)(rng)) rho.add(Constraint{random_join(pool, 4), CanonType::var(d)});
    int others = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int j = 0; j < others; ++j) rho.add(Constraint{random_join(pool, 4), random_join(interface, 2)});
    // a satisfying instantiation: raise right-hand sides until stable
    Ground s;
    for (const auto& v : pool) s[v] = random_level(rng, L);
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& c : rho) {
        Level need = eval_ground(c.lhs, s, L);
        if (L.leq(need, eval_ground(c.rhs, s, L))) continue;
        const TypeVar& v = c.rhs.vars[std::uniform_int_distribution<std::size_t>(0, c.rhs.vars.size() - 1)(rng)];
        s[v] = L.join(s[v], need);
        changed = true;
      }
    }
    ++rep.trials;
    Simplified out;
    try {
      out = simplify({}, rho, locals);
    } catch (const Error& e) {
      rep.verdict = Verdict::Fail;
      rep.message = std::string("simplify rejected a system with unique definitions: ") + e.what();
      return rep;
    }
    if (satisfies(out.constraints, s, L)) continue;
    nlohmann::json ce;
    ce["constraints"] = render(rho);
    ce["simplified"] = render(out.constraints);
    ce["instantiation"] = ground_json(s, L);
    rep.counterexample = ce.dump();
    rep.verdict = Verdict::Fail;
    rep.message = "simplified system is not satisfied";
    return rep;
  }
  return rep;
}

std::vector<CheckReport> run_suite(const Program* prog, const SuiteConfig& cfg) {
  std::vector<CheckReport> out;
  out.push_back(check_equational_soundness(cfg.samples, 10, 100, cfg.seed));
  out.push_back(check_simple_security(cfg.samples, cfg.seed));
  out.push_back(check_simplify(cfg.samples, cfg.seed));

  auto per_program = [&](const Program& p, const std::string& tag) {
    for (const auto& n : p.nodes) {
      auto sem = check_semantics_preservation(p, n.name, cfg.trials, cfg.ticks, cfg.seed);
      auto typ = check_type_preservation(p, n.name, 2, 10, cfg.seed);
      NIConfig ni;
      ni.node = n.name;
      ni.trials = cfg.trials;
      ni.ticks = cfg.ticks;
      ni.seed = cfg.seed;
      ni.assignment.node = n.name;
      Rng rng(mix(cfg.seed, std::hash<std::string>{}(tag + n.name)));
      for (const auto& d : n.inputs) ni.assignment.inputs[d.name] = ni.lattice.label(random_level(rng, ni.lattice));
      auto nir = check_non_interference(p, ni);
      for (auto* r : {&sem, &typ, &nir}) {
        if (!tag.empty()) r->node = tag + ":" + r->node;
        out.push_back(std::move(*r));
      }
    }
  };
  if (prog) per_program(*prog, "");
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < cfg.programs; ++i) per_program(random_program(rng), "random" + std::to_string(i));
  return out;
}

}  // namespace luset
