// One PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "common.hpp"
#include "luset/analysis.hpp"
#include "luset/generator.hpp"
#include "luset/harness.hpp"
#include "luset/interp.hpp"
#include "luset/secinfer.hpp"

using namespace luset;
using namespace luset::test;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Constraint le(CanonType a, CanonType b) { return Constraint{std::move(a), std::move(b)}; }

Outcome golden_signatures() {
  SignatureTable a = infer_signatures(load_data("ctr.lus"));
  SignatureTable b = infer_signatures(load_data("re_trig.lus"));
  struct Want {
    const SignatureTable* table;
    const char* node;
    ConstraintSet rho;
  };
  const Want wants[] = {
      {&a, "Ctr", {le({"γ", "α1", "α2", "α3"}, {"β"})}},
      {&b, "cnt_dn", {le({"γ", "α1", "α2"}, {"β"})}},
      {&b, "re_trig", {le({"γ", "α1", "α2"}, {"β"})}},
      {&a, "SpdMtr", {le({"γ", "α1"}, {"β1"}), le({"γ", "β1"}, {"β2"})}},
  };
  Outcome o;
  for (const auto& w : wants) {
    const NodeSignature& s = w.table->at(w.node);
    if (s.constraints != w.rho) {
      o.ok = false;
      o.detail += std::string(w.node) + " got " + render(s.constraints) + "; ";
    }
  }
  if (o.ok) o.detail = "Ctr, cnt_dn, re_trig, SpdMtr exact";
  return o;
}

Outcome golden_execution() {
  Program p = load_data("ctr.lus");
  std::vector<VStream> ins(3);
  for (int k = 0; k < 7; ++k) {
    ins[0].push_back(Value::of_int(kInit[k]));
    ins[1].push_back(Value::of_int(kIncr[k]));
    ins[2].push_back(Value::of_bool(kRst[k]));
  }
  NodeRun r = eval_node(p, "Ctr", ins, 7);
  Outcome o;
  int wrong = 0;
  for (int k = 0; k < 7; ++k) {
    wrong += r.history.at("n")[k] != Value::of_int(kN[k]);
    wrong += r.history.at("fst")[k] != Value::of_bool(kFst[k]);
    wrong += r.history.at("pre_n")[k] != Value::of_int(kPreN[k]);
  }
  o.ok = wrong == 0;
  o.detail = std::to_string(21 - wrong) + "/21 values match (n, fst, pre_n over 7 ticks)";
  return o;
}

Outcome type_preservation() {
  Outcome o;
  Program ex = load_data("re_trig.lus");
  for (const char* f : {"cnt_dn", "re_trig"}) {
    CheckReport r = check_type_preservation(ex, f, 5, 2, 1);
    if (!r.identical || r.verdict != Verdict::Pass) {
      o.ok = false;
      o.detail += std::string(f) + ": " + r.message + "; ";
    }
  }
  Rng rng(2024);
  std::size_t checked = 0, failures = 0;
  for (int i = 0; i < 200; ++i) {
    Program p = random_program(rng);
    for (const auto& n : p.nodes) {
      // 5 random lattices, 2 instantiations each
      CheckReport r = check_type_preservation(p, n.name, 5, 2, rng());
      checked += r.trials;
      if (r.verdict != Verdict::Pass) {
        ++failures;
        if (o.ok) o.detail += r.text() + "; ";
        o.ok = false;
      }
    }
  }
  o.detail += "cnt_dn and re_trig identical; " + std::to_string(checked) + " instantiations over 200 programs, " +
              std::to_string(failures) + " violations";
  return o;
}

Outcome semantics_preservation() {
  Outcome o;
  Rng rng(77);
  std::size_t runs = 0, mismatches = 0, inconclusive = 0;
  for (int i = 0; i < 100; ++i) {
    Program p = random_program(rng);
    CheckReport r = check_semantics_preservation(p, p.nodes.back().name, 20, 64, rng());
    runs += r.trials;
    if (r.verdict == Verdict::Fail) {
      ++mismatches;
      if (o.ok) o.detail += r.text() + "; ";
      o.ok = false;
    } else if (r.verdict == Verdict::Inconclusive) {
      ++inconclusive;
      o.ok = false;
    }
  }
  o.detail += std::to_string(runs) + " prefixes of 64 ticks over 100 programs, " + std::to_string(mismatches) +
              " mismatches, " + std::to_string(inconclusive) + " inconclusive";
  return o;
}

Outcome non_interference() {
  Outcome o;
  Rng rng(99);
  std::size_t programs = 0, trials = 0, violations = 0;
  for (int i = 0; i < 40; ++i) {
    Program p = random_program(rng);
    const Node& top = p.nodes.back();
    NIConfig cfg;
    cfg.node = top.name;
    cfg.lattice = (i % 2 == 0) ? Lattice::two_point() : random_lattice(rng, 4);
    cfg.assignment.node = top.name;
    auto pick = [&] { return cfg.lattice.label(std::uniform_int_distribution<Level>(0, cfg.lattice.size() - 1)(rng)); };
    cfg.assignment.base = pick();
    for (const auto& d : top.inputs) cfg.assignment.inputs[d.name] = pick();
    cfg.trials = 100;
    cfg.ticks = 64;
    cfg.seed = rng();
    if (!node_levels(p, top.name, cfg.assignment, cfg.lattice).secure) continue;
    ++programs;
    CheckReport r = check_non_interference(p, cfg);
    trials += r.trials;
    if (r.verdict != Verdict::Pass) {
      ++violations;
      if (o.ok) o.detail += r.text() + "; ";
      o.ok = false;
    }
  }
  if (programs == 0) o.ok = false;
  const Lattice two = Lattice::two_point();
  for (const char* leak : {"leak_ite", "leak_merge"}) {
    Program p = load_data(std::string(leak) + ".lus");
    auto as = load_assignments(data(std::string(leak) + ".json"));
    bool rejected = !check_program(p, two, as).secure();
    NIConfig cfg;
    cfg.node = leak;
    cfg.assignment = as[0];
    cfg.trials = 10;
    cfg.force = true;
    CheckReport r = check_non_interference(p, cfg);
    bool witnessed = r.verdict == Verdict::Fail && r.trials <= 10;
    if (!rejected || !witnessed) {
      o.ok = false;
      o.detail += std::string(leak) + (rejected ? "" : " accepted") + (witnessed ? "" : " without counterexample") + "; ";
    } else {
      o.detail += std::string(leak) + " rejected, counterexample in trial " + std::to_string(r.trials) + "; ";
    }
  }
  o.detail += std::to_string(programs) + " secure programs, " + std::to_string(trials) + " paired runs, " +
              std::to_string(violations) + " violations";
  return o;
}

Outcome from_report(const CheckReport& r) {
  Outcome o;
  o.ok = r.verdict == Verdict::Pass;
  o.detail = r.text();
  for (auto& c : o.detail)
    if (c == '\n') c = ' ';
  return o;
}

Outcome equational_theory() { return from_report(check_equational_soundness(1000, 10, 100, 5)); }
Outcome simplify_correctness() { return from_report(check_simplify(500, 6)); }

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"golden signatures", 1, golden_signatures},
      {"golden execution", 1, golden_execution},
      {"type preservation", 30, type_preservation},
      {"semantics preservation", 60, semantics_preservation},
      {"non-interference", 60, non_interference},
      {"equational theory", 10, equational_theory},
      {"simplify correctness", 10, simplify_correctness},
  };
  int failed = 0;
  int i = 0;
  for (const auto& c : criteria) {
    ++i;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("error: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.ok && secs < c.limit;
    failed += !pass;
    std::printf("%s %d %s (%.2fs < %.0fs) %s\n", pass ? "PASS" : "FAIL", i, c.name, secs, c.limit, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
