#include <gtest/gtest.h>

#include <json.hpp>

#include "common.hpp"
#include "luset/analysis.hpp"
#include "luset/generator.hpp"
#include "luset/harness.hpp"
#include "luset/interp.hpp"
#include "luset/normalize.hpp"

using namespace luset;
using namespace luset::test;

TEST(Generator, Postcondition) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    Program p = random_program(rng);
    ASSERT_TRUE(well_formed(p).empty()) << pretty_print(p);
    Program q = infer_clocks(p);
    for (const auto& n : q.nodes) {
      EXPECT_TRUE(instantaneous_deps(n).acyclic()) << pretty_print(n);
      for (const auto* g : {&n.inputs, &n.outputs})
        for (const auto& d : *g) EXPECT_TRUE(d.clock.is_base());
    }
    EXPECT_EQ(parse_program(pretty_print(p)).program, p);
  }
}

TEST(Generator, InputsFollowBase) {
  Rng rng(5);
  Program p = load_data("ctr.lus");
  BStream base = random_base(rng, 50);
  auto ins = random_inputs(rng, *p.find("Ctr"), base);
  ASSERT_EQ(ins.size(), 3u);
  for (const auto& s : ins) EXPECT_EQ(base_of({s}), base);
  for (std::size_t k = 0; k < 50; ++k)
    if (base[k]) EXPECT_EQ(ins[2][k].lit().type, DataType::Bool);
}

TEST(Generator, Lattices) {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    Lattice L = random_lattice(rng);
    EXPECT_LE(L.size(), 8u);
    for (Level a = 0; a < L.size(); ++a) {
      EXPECT_TRUE(L.leq(L.bottom(), a));
      for (Level b = 0; b < L.size(); ++b) {
        Level j = L.join(a, b);
        EXPECT_TRUE(L.leq(a, j) && L.leq(b, j));
      }
    }
  }
}

TEST(Projection, Examples) {
  const Lattice L = Lattice::two_point();
  Level lo = L.level("L"), hi = L.level("H");
  History H{{"a", {Value::of_int(1)}}, {"b", {Value::of_int(2)}}};
  std::map<std::string, Level> lv{{"a", lo}, {"b", hi}};
  EXPECT_EQ(project_history(H, lv, L.top(), L), H);
  EXPECT_EQ(project_history(H, lv, lo, L), (History{{"a", H.at("a")}}));
  std::map<std::string, Level> high{{"a", hi}, {"b", hi}};
  EXPECT_TRUE(project_history(H, high, L.bottom(), L).empty());
}

TEST(NodeLevels, Ctr) {
  const Lattice L = Lattice::two_point();
  Assignment a{"Ctr", "L", {{"init", "L"}, {"incr", "L"}, {"rst", "H"}}, {{"n", "H"}}};
  NodeLevels lv = node_levels(load_data("ctr.lus"), "Ctr", a, L);
  EXPECT_TRUE(lv.secure);
  EXPECT_EQ(L.label(lv.vars.at("rst")), "H");
  EXPECT_EQ(L.label(lv.vars.at("n")), "H");
  EXPECT_EQ(L.label(lv.vars.at("fst")), "L");    // γ ⊑ δ1
  EXPECT_EQ(L.label(lv.vars.at("pre_n")), "H");  // γ ⊔ β ⊑ δ2
}

TEST(NonInterference, CtrLow) {
  NIConfig cfg;
  cfg.node = "Ctr";
  cfg.assignment = load_assignments(data("ctr_low.json"))[0];
  CheckReport r = check_non_interference(load_data("ctr.lus"), cfg);
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.text();
  EXPECT_EQ(r.trials, 200u);
}

TEST(NonInterference, CtrMixed) {
  NIConfig cfg;
  cfg.node = "Ctr";
  cfg.assignment = Assignment{"Ctr", "L", {{"init", "L"}, {"incr", "H"}, {"rst", "L"}}, {{"n", "H"}}};
  EXPECT_EQ(check_non_interference(load_data("ctr.lus"), cfg).verdict, Verdict::Pass);
}

TEST(NonInterference, NoInputs) {
  NIConfig cfg;
  cfg.node = "nat";
  cfg.trials = 10;
  Program p = load_program("node nat() returns (n: int); let n = 0 fby (n + 1); tel");
  EXPECT_EQ(check_non_interference(p, cfg).verdict, Verdict::Pass);
}

TEST(NonInterference, LeakSkippedUnlessForced) {
  Program p = load_data("leak_ite.lus");
  NIConfig cfg;
  cfg.node = "leak_ite";
  cfg.assignment = load_assignments(data("leak_ite.json"))[0];
  EXPECT_EQ(check_non_interference(p, cfg).verdict, Verdict::Skipped);
  cfg.force = true;
  CheckReport r = check_non_interference(p, cfg);
  ASSERT_EQ(r.verdict, Verdict::Fail);
  auto ce = nlohmann::json::parse(r.counterexample);
  EXPECT_EQ(ce["tick"], 0);
  EXPECT_EQ(ce["variable"], "c");
  // c = if b then 1 else 0 on the first tick of each run
  auto out = [&](const char* run) {
    bool b = ce[run]["inputs"]["b"][0] == "true";
    EXPECT_EQ(ce[run]["c"][0], b ? "1" : "0");
    return b;
  };
  EXPECT_NE(out("run1"), out("run2"));
}

TEST(NonInterference, LeakMerge) {
  NIConfig cfg;
  cfg.node = "leak_merge";
  cfg.assignment = load_assignments(data("leak_merge.json"))[0];
  cfg.force = true;
  cfg.trials = 10;
  EXPECT_EQ(check_non_interference(load_data("leak_merge.lus"), cfg).verdict, Verdict::Fail);
}

TEST(Preservation, Examples) {
  for (const char* f : {"cnt_dn.lus", "re_trig.lus", "ctr.lus"}) {
    Program p = load_data(f);
    for (const auto& n : p.nodes) {
      CheckReport s = check_semantics_preservation(p, n.name, 20, 64, 3);
      EXPECT_EQ(s.verdict, Verdict::Pass) << s.text();
      CheckReport t = check_type_preservation(p, n.name, 5, 20, 3);
      EXPECT_EQ(t.verdict, Verdict::Pass) << t.text();
      EXPECT_TRUE(t.identical) << n.name;
    }
  }
}

TEST(Preservation, AlreadyNormal) {
  Program p = normalize_program(load_data("re_trig.lus")).program;
  EXPECT_EQ(check_semantics_preservation(p, "re_trig", 10, 32, 1).verdict, Verdict::Pass);
}

TEST(Preservation, RandomPrograms) {
  Rng rng(21);
  for (int i = 0; i < 10; ++i) {
    Program p = random_program(rng);
    const std::string& f = p.nodes.back().name;
    EXPECT_EQ(check_semantics_preservation(p, f, 5, 32, i).verdict, Verdict::Pass) << pretty_print(p);
    EXPECT_EQ(check_type_preservation(p, f, 3, 10, i).verdict, Verdict::Pass) << pretty_print(p);
  }
}

TEST(TypeLevelChecks, SmallRuns) {
  EXPECT_EQ(check_equational_soundness(100, 5, 20, 4).verdict, Verdict::Pass);
  EXPECT_EQ(check_simple_security(100, 4).verdict, Verdict::Pass);
  EXPECT_EQ(check_simplify(100, 4).verdict, Verdict::Pass);
}

TEST(Report, JsonSchema) {
  NIConfig cfg;
  cfg.node = "leak_ite";
  cfg.assignment = load_assignments(data("leak_ite.json"))[0];
  cfg.force = true;
  cfg.seed = 17;
  auto j = nlohmann::json::parse(check_non_interference(load_data("leak_ite.lus"), cfg).json());
  for (const char* k : {"check", "node", "verdict", "trials", "seed", "counterexample"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["check"], "non-interference");
  EXPECT_EQ(j["verdict"], "fail");
  EXPECT_EQ(j["seed"], 17);
  auto arr = nlohmann::json::parse(json_array({CheckReport{}, CheckReport{}}));
  EXPECT_EQ(arr.size(), 2u);
}

TEST(Suite, Deterministic) {
  SuiteConfig cfg;
  cfg.programs = 3;
  cfg.trials = 3;
  cfg.ticks = 16;
  cfg.samples = 50;
  Program p = load_data("ctr.lus");
  auto a = run_suite(&p, cfg);
  auto b = run_suite(&p, cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].json(), b[i].json());
    EXPECT_TRUE(a[i].ok()) << a[i].text();
  }
}
