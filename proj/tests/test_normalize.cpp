#include <gtest/gtest.h>

#include "common.hpp"
#include "luset/analysis.hpp"
#include "luset/generator.hpp"
#include "luset/interp.hpp"
#include "luset/normalize.hpp"
#include "luset/secinfer.hpp"

using namespace luset;
using namespace luset::test;

namespace {

Constraint le(CanonType a, CanonType b) { return Constraint{std::move(a), std::move(b)}; }

std::vector<std::string> local_names(const NodeNormInfo& info) {
  std::vector<std::string> out;
  for (const auto& l : info.new_locals) out.push_back(l.name);
  return out;
}

const Equation* defining(const Node& n, const std::string& x) {
  for (const auto& eq : n.equations)
    for (const auto& y : eq.lhs)
      if (y == x) return &eq;
  return nullptr;
}

}  // namespace

TEST(NormalizeExpr, Constant) {
  Program p = load_program("node f(a: int) returns (x: int); let x = a; tel");
  SignatureTable sigs = infer_signatures(p);
  NormContext ctx = make_context(p.nodes[0], sigs);
  Expr c = Expr::constant(Literal::integer(4));
  c.clocks = {Clock::base()};
  c.types = {DataType::Int};
  NormResult r = normalize_expr(c, ctx);
  ASSERT_EQ(r.exprs.size(), 1u);
  EXPECT_EQ(r.exprs[0].first, Expr::constant(Literal::integer(4)));
  EXPECT_TRUE(r.exprs[0].second.is_bottom());
  EXPECT_TRUE(r.new_equations.empty());
  EXPECT_TRUE(r.constraints.empty());
}

TEST(NormalizeExpr, WhenDistributesOverTuples) {
  Program p = load_program("node f(c: bool; a, b: int) returns (o: int); var x, y: int when c;\n"
      "let (x, y) = (a, b) when c; o = merge c (x + y) (0 when not c); tel");
  SignatureTable sigs = infer_signatures(p);
  NormContext ctx = make_context(p.nodes[0], sigs);
  NormResult r = normalize_exprs(p.nodes[0].equations[0].rhs, ctx);
  ASSERT_EQ(r.exprs.size(), 2u);
  EXPECT_EQ(r.exprs[0].first, Expr::when({Expr::var("a")}, "c", true));
  EXPECT_EQ(r.exprs[1].first, Expr::when({Expr::var("b")}, "c", true));
  // αi ⊔ type of c
  EXPECT_EQ(r.exprs[0].second, (CanonType{"α1", "α2"}));
  EXPECT_EQ(r.exprs[1].second, (CanonType{"α1", "α3"}));
}

TEST(Normalize, CntDn) {
  Normalized out = normalize_program(load_data("cnt_dn.lus"));
  const Node& n = *out.program.find("cnt_dn");
  EXPECT_TRUE(is_nlustre(n));
  const NodeNormInfo& info = out.nodes.at("cnt_dn");
  EXPECT_EQ(local_names(info), (std::vector<std::string>{"v1", "v2", "v3"}));
  // v1 = if v2 then n else v3; v2 = true fby false; v3 = 0 fby (cpt - 1)
  ConstraintSet want{le({"γ", "α1", "α2", "δ1"}, {"β"}), le({"γ", "δ2", "α2", "δ3"}, {"δ1"}), le({"γ"}, {"δ2"}),
                     le({"γ", "β"}, {"δ3"})};
  EXPECT_EQ(info.constraints, want);
  const Equation* v2 = defining(n, "v2");
  ASSERT_NE(v2, nullptr);
  EXPECT_EQ(v2->kind, Equation::Kind::NFby);
  EXPECT_EQ(v2->init, Literal::boolean(true));
  const Equation* v3 = defining(n, "v3");
  ASSERT_NE(v3, nullptr);
  EXPECT_EQ(v3->kind, Equation::Kind::NFby);
  EXPECT_EQ(v3->init, Literal::integer(0));
  // simplifying the normalization constraints gives the source signature
  Simplified s = simplify({CanonType{"β"}}, info.constraints, {"δ1", "δ2", "δ3"});
  EXPECT_EQ(s.constraints, (ConstraintSet{le({"γ", "α1", "α2"}, {"β"})}));
}

TEST(Normalize, ReTrig) {
  Normalized out = normalize_program(load_data("re_trig.lus"));
  const Node& n = *out.program.find("re_trig");
  EXPECT_TRUE(is_nlustre(out.program));
  const NodeNormInfo& info = out.nodes.at("re_trig");
  ASSERT_EQ(info.new_locals.size(), 3u);
  const NewLocal& call_out = info.new_locals[2];
  EXPECT_EQ(call_out.clock, Clock::base().on("ck", true));
  const Equation* call = defining(n, call_out.name);
  ASSERT_NE(call, nullptr);
  EXPECT_EQ(call->kind, Equation::Kind::NCall);
  EXPECT_EQ(call->callee, "cnt_dn");
  EXPECT_EQ(call->clock, Clock::base().on("ck", true));
  SignatureTable before = infer_signatures(load_data("re_trig.lus"));
  SignatureTable after = infer_signatures(out.program);
  EXPECT_EQ(before.at("re_trig").constraints, after.at("re_trig").constraints);
}

TEST(Normalize, FlatEquationUntouched) {
  Program p = load_program("node f(y: int) returns (x: int); let x = y + 1; tel");
  Normalized out = normalize_program(p);
  EXPECT_TRUE(out.nodes.at("f").new_locals.empty());
  const Equation& eq = out.program.nodes[0].equations[0];
  EXPECT_EQ(eq.kind, Equation::Kind::NDef);
  EXPECT_EQ(eq.rhs[0], Expr::binary(BinOp::Add, Expr::var("y"), Expr::constant(Literal::integer(1))));
}

TEST(Normalize, ConstantFbyKept) {
  Normalized out = normalize_program(load_data("ctr.lus"));
  const Node& ctr = *out.program.find("Ctr");
  EXPECT_TRUE(out.nodes.at("Ctr").new_locals.empty());
  const Equation* fst = defining(ctr, "fst");
  ASSERT_NE(fst, nullptr);
  EXPECT_EQ(fst->kind, Equation::Kind::NFby);
  EXPECT_EQ(fst->init, Literal::boolean(true));
  EXPECT_EQ(fst->rhs[0], Expr::constant(Literal::boolean(false)));
}

TEST(Normalize, TupleEquationSplits) {
  Program p = load_program("node f(a, b: int) returns (x, y: int); let (x, y) = (a + 1, b); tel");
  Normalized out = normalize_program(p);
  const Node& n = out.program.nodes[0];
  ASSERT_EQ(n.equations.size(), 2u);
  EXPECT_EQ(defining(n, "x")->rhs[0], Expr::binary(BinOp::Add, Expr::var("a"), Expr::constant(Literal::integer(1))));
  EXPECT_EQ(defining(n, "y")->rhs[0], Expr::var("b"));
}

TEST(Normalize, InitFbyTriple) {
  Program p = load_program("node f(a, b: int) returns (x: int); let x = a fby b; tel");
  Normalized out = normalize_program(p);
  const Node& n = out.program.nodes[0];
  EXPECT_EQ(n.equations.size(), 3u);
  EXPECT_EQ(out.nodes.at("f").new_locals.size(), 2u);
  EXPECT_TRUE(is_nlustre(n));
  // same streams before and after
  std::vector<VStream> ins{{Value::of_int(3), Value::of_int(4), Value::of_int(5)},
                           {Value::of_int(7), Value::of_int(8), Value::of_int(9)}};
  EXPECT_EQ(eval_node(p, "f", ins, 3).outputs, eval_node(out.program, "f", ins, 3).outputs);
  EXPECT_EQ(eval_node(out.program, "f", ins, 3).outputs[0],
            (VStream{Value::of_int(3), Value::of_int(7), Value::of_int(8)}));
}

TEST(Normalize, AlreadyNormalIsIdentity) {
  Normalized once = normalize_program(load_data("re_trig.lus"));
  Normalized twice = normalize_program(once.program);
  EXPECT_EQ(once.program, twice.program);
  for (const auto& [name, info] : twice.nodes) EXPECT_TRUE(info.new_locals.empty()) << name;
}

TEST(Normalize, CtrTableSameStreams) {
  Program src = load_data("ctr.lus");
  Normalized out = normalize_program(src);
  std::vector<VStream> ins(3);
  for (int k = 0; k < 7; ++k) {
    ins[0].push_back(Value::of_int(kInit[k]));
    ins[1].push_back(Value::of_int(kIncr[k]));
    ins[2].push_back(Value::of_bool(kRst[k]));
  }
  EXPECT_EQ(eval_node(src, "Ctr", ins, 7).outputs, eval_node(out.program, "Ctr", ins, 7).outputs);
}

TEST(Normalize, FreshNamesAvoidExisting) {
  Program p = load_program(
      "node f(v1: int) returns (v2: int); var v3: int; let v3 = v1; v2 = v3 + (v1 fby v3); tel");
  Normalized out = normalize_program(p);
  std::set<std::string> seen;
  const Node& n = out.program.nodes[0];
  for (const auto* g : {&n.inputs, &n.outputs, &n.locals})
    for (const auto& d : *g) EXPECT_TRUE(seen.insert(d.name).second) << d.name;
}

TEST(Normalize, PrintedOutputReparses) {
  Rng rng(13);
  std::vector<Program> progs{load_data("re_trig.lus"), load_data("ctr.lus")};
  for (int i = 0; i < 50; ++i) progs.push_back(random_program(rng));
  for (const auto& p : progs) {
    Program once = normalize_program(p).program;
    ParseResult back = parse_program(pretty_print(once));
    ASSERT_TRUE(back.ok()) << pretty_print(once);
    EXPECT_EQ(normalize_program(*back.program).program, once) << pretty_print(once);
  }
}
