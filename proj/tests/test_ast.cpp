#include <gtest/gtest.h>

#include <algorithm>

#include "common.hpp"
#include "luset/analysis.hpp"
#include "luset/error.hpp"

using namespace luset;
using namespace luset::test;

namespace {

using Names = std::set<std::string>;

Program parse_ok(std::string_view text) {
  ParseResult r = parse_program(text);
  EXPECT_TRUE(r.ok()) << (r.diagnostics.empty() ? "" : format(r.diagnostics[0]));
  return r.ok() ? *r.program : Program{};
}

bool has_kind(const std::vector<Diagnostic>& ds, ErrorKind k) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.kind == k; });
}

}  // namespace

TEST(FreeVars, Constant) { EXPECT_TRUE(free_vars(Expr::constant(Literal::integer(3))).empty()); }

TEST(FreeVars, WhenAddsSamplingVariable) {
  Expr e = Expr::when({Expr::var("y")}, "x", true);
  EXPECT_EQ(free_vars(e), (Names{"y", "x"}));
}

TEST(FreeVars, MergeAndIte) {
  Expr m = Expr::merge("c", {Expr::var("a")}, {Expr::var("b")});
  EXPECT_EQ(free_vars(m), (Names{"a", "b", "c"}));
  Expr i = Expr::ite(Expr::var("c"), {Expr::var("a")}, {Expr::constant(Literal::integer(0))});
  EXPECT_EQ(free_vars(i), (Names{"a", "c"}));
}

TEST(FreeVars, FbyEquationReadsDelayedFlow) {
  Equation eq = Equation::def({"pre_n"}, {Expr::fby({Expr::constant(Literal::integer(0))}, {Expr::var("n")})});
  EXPECT_EQ(free_vars(eq), (Names{"n"}));
  EXPECT_EQ(defined_vars(eq), (Names{"pre_n"}));
}

TEST(FreeVars, ClockIncludesBase) {
  Clock ck = Clock::base().on("x", true).on("y", false);
  EXPECT_EQ(free_vars(ck), (Names{std::string(kBase), "x", "y"}));
}

TEST(DefinedVars, TupleLhs) {
  Equation eq = Equation::def({"a", "b"}, {Expr::call("f", {Expr::var("e")})});
  EXPECT_EQ(defined_vars(eq), (Names{"a", "b"}));
}

TEST(DefinedVars, SingletonCall) {
  Equation eq = Equation::def({"spd"}, {Expr::call("Ctr", {Expr::var("acc")})});
  EXPECT_EQ(defined_vars(eq), (Names{"spd"}));
}

TEST(FreeVars, EquationsSubtractDefinitions) {
  Program p = load_data("ctr.lus");
  const Node& ctr = *p.find("Ctr");
  EXPECT_EQ(defined_vars(ctr.equations), (Names{"n", "fst", "pre_n"}));
  for (const auto& x : free_vars(ctr.equations)) EXPECT_TRUE(ctr.is_input(x) || x == kBase) << x;
}

TEST(WellFormed, CtrProgram) { EXPECT_TRUE(well_formed(load_data("ctr.lus")).empty()); }

TEST(WellFormed, DuplicateDefinition) {
  Program p = parse_ok("node f(a: int) returns (n: int); let n = a; n = 1; tel");
  EXPECT_TRUE(has_kind(well_formed(p), ErrorKind::DuplicateDefinition));
}

TEST(WellFormed, RecursiveCall) {
  Program p = parse_ok(
      "node f(a: int) returns (x: int); let x = g(a); tel\n"
      "node g(a: int) returns (x: int); let x = f(a); tel");
  EXPECT_TRUE(has_kind(well_formed(p), ErrorKind::RecursiveCall));
}

TEST(WellFormed, MissingAndUndefined) {
  EXPECT_TRUE(has_kind(well_formed(parse_ok("node f(a: int) returns (x, y: int); let x = a; tel")),
                       ErrorKind::MissingDefinition));
  EXPECT_TRUE(has_kind(well_formed(parse_ok("node f(a: int) returns (x: int); let x = z; tel")),
                       ErrorKind::UndefinedVariable));
  EXPECT_TRUE(has_kind(well_formed(parse_ok("node f(a: int) returns (x: int); let x = a; a = 1; tel")),
                       ErrorKind::AssignToInput));
}

TEST(WellFormed, TypeMismatch) {
  EXPECT_TRUE(has_kind(well_formed(parse_ok("node f(a: int) returns (x: bool); let x = a + 1; tel")),
                       ErrorKind::TypeMismatch));
}

TEST(Clocks, CtrAllBase) {
  Program p = infer_clocks(load_data("ctr.lus"));
  for (const auto& eq : p.find("Ctr")->equations) EXPECT_TRUE(eq.clock.is_base());
}

TEST(Clocks, NestedCallUnderWhen) {
  Program p = infer_clocks(load_data("re_trig.lus"));
  const Node& n = *p.find("re_trig");
  const Equation& v = n.equations[2];
  ASSERT_EQ(v.lhs, std::vector<std::string>{"v"});
  const Expr& call = v.rhs[0].on_true[0];
  ASSERT_EQ(call.kind, Expr::Kind::Call);
  EXPECT_EQ(call.clocks[0], Clock::base().on("ck", true));
}

TEST(Clocks, BinopOverDifferentClocks) {
  Program p = parse_ok("node f(x: bool; a: int) returns (y: int); let y = a + (a when x); tel");
  try {
    infer_clocks(p);
    FAIL() << "expected a clock error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ClockMismatch);
  }
}

TEST(Causality, FbyBreaksCycle) {
  Program p = infer_clocks(load_data("ctr.lus"));
  const Node& ctr = *p.find("Ctr");
  DepGraph g = instantaneous_deps(ctr);
  EXPECT_TRUE(g.acyclic());
  // every equation reads only variables defined earlier (or inputs)
  std::set<std::string> known;
  for (const auto& d : ctr.inputs) known.insert(d.name);
  for (std::size_t i : g.order) {
    const Equation& eq = ctr.equations[i];
    for (const auto& x : eq.lhs)
      for (const auto& y : g.reads.at(x)) EXPECT_TRUE(known.count(y)) << x << " reads " << y;
    for (const auto& x : eq.lhs) known.insert(x);
  }
}

TEST(Causality, SelfLoop) {
  Program p = infer_clocks(parse_ok("node f(a: int) returns (x: int); let x = x + 1; tel"));
  DepGraph g = instantaneous_deps(p.nodes[0]);
  EXPECT_EQ(g.cycle, std::vector<std::string>{"x"});
  try {
    schedule(p.nodes[0]);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CausalityCycle);
  }
}

TEST(Causality, TwoCycle) {
  Program p = infer_clocks(parse_ok("node f(c: int) returns (a: int); var b: int; let a = b; b = a; tel"));
  std::vector<std::string> cyc = instantaneous_deps(p.nodes[0]).cycle;
  std::sort(cyc.begin(), cyc.end());
  EXPECT_EQ(cyc, (std::vector<std::string>{"a", "b"}));
}

TEST(CallOrder, CalleesFirst) {
  std::vector<std::string> order = call_order(load_data("re_trig.lus"));
  EXPECT_EQ(order, (std::vector<std::string>{"cnt_dn", "re_trig"}));
}

TEST(Parser, CtrShape) {
  Program p = load_data("ctr.lus");
  const Node& ctr = *p.find("Ctr");
  EXPECT_EQ(ctr.inputs.size(), 3u);
  EXPECT_EQ(ctr.outputs.size(), 1u);
  EXPECT_EQ(ctr.locals.size(), 2u);
  EXPECT_EQ(ctr.equations.size(), 3u);
}

TEST(Parser, ReTrigShape) {
  const Node& n = *load_data("re_trig.lus").find("re_trig");
  EXPECT_EQ(n.inputs.size(), 2u);
  EXPECT_EQ(n.outputs.size(), 1u);
  EXPECT_EQ(n.locals.size(), 3u);
}

TEST(Parser, SyntaxError) {
  ParseResult r = parse_program("node f() returns (x:int); let x = 1 + ; tel");
  ASSERT_FALSE(r.ok());
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].kind, ErrorKind::SyntaxError);
  EXPECT_EQ(r.diagnostics[0].span.line, 1);
}

TEST(Parser, EmptyProgram) {
  ParseResult r = parse_program("");
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.program->nodes.empty());
  EXPECT_EQ(pretty_print(*r.program), "");
}

TEST(Parser, Precedence) {
  Program p = parse_ok("node f(a, b, c: int) returns (x: int); let x = a + b * c - -a; tel");
  Expr want = Expr::binary(BinOp::Sub,
                           Expr::binary(BinOp::Add, Expr::var("a"), Expr::binary(BinOp::Mul, Expr::var("b"), Expr::var("c"))),
                           Expr::unary(UnOp::Neg, Expr::var("a")));
  EXPECT_EQ(p.nodes[0].equations[0].rhs[0], want);
}

TEST(Parser, RoundTrip) {
  for (const char* f : {"ctr.lus", "cnt_dn.lus", "re_trig.lus", "leak_ite.lus", "leak_merge.lus"}) {
    Program p = load_data(f);
    Program q = parse_ok(pretty_print(p));
    EXPECT_EQ(p, q) << f;
  }
}

TEST(Parser, RoundTripNLustre) {
  Program p = parse_ok(
      "node f(x: bool; a: int) returns (y: int);\n"
      "var s: int when x; t: int;\n"
      "let\n"
      "  s = 1 fby (a when x); (* base on x *)\n"
      "  t = merge x (s) (0 when not x);\n"
      "  y = t;\n"
      "tel\n");
  EXPECT_EQ(p, parse_ok(pretty_print(p)));
}
