#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "luset/analysis.hpp"
#include "luset/generator.hpp"
#include "luset/harness.hpp"
#include "luset/interp.hpp"
#include "luset/normalize.hpp"
#include "luset/parser.hpp"
#include "luset/secinfer.hpp"
#include "luset/trace.hpp"

using namespace luset;

namespace {

struct Options {
  std::string program;
  std::string lattice = "two-point";
  std::string assign;
  std::string node;
  std::string inputs;
  std::string emit = "nlustre";
  std::string level;
  std::size_t ticks = 64;
  std::size_t trials = 100;
  std::size_t samples = 1000;
  std::size_t programs = 20;
  std::uint64_t seed = 1;
  bool force = false;
  bool json = false;
  bool ascii = false;
  bool by_var = false;
};

// Failures while reading the command's inputs map to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Program load(const std::string& path) {
  try {
    return load_program_file(path);
  } catch (const Error& e) {
    throw InputError(e.diagnostic().span.file.empty() ? e.what() : format(e.diagnostic()));
  }
}

const Node& node_of(const Program& p, const Options& o) {
  if (o.node.empty()) {
    if (p.nodes.empty()) throw InputError("program has no nodes");
    return p.nodes.back();
  }
  const Node* n = p.find(o.node);
  if (!n) throw InputError("unknown node '" + o.node + "'");
  return *n;
}

Lattice lattice_of(const Options& o) {
  try {
    return Lattice::named(o.lattice);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

std::vector<Assignment> assignments_of(const Options& o) {
  if (o.assign.empty()) return {};
  try {
    return load_assignments(o.assign);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

int cmd_check(const Options& o) {
  Program p = load(o.program);
  Lattice L = lattice_of(o);
  auto as = assignments_of(o);
  if (as.empty())
    for (const auto& n : p.nodes) {
      if (!o.node.empty() && n.name != o.node) continue;
      as.push_back(Assignment{n.name, std::nullopt, {}, {}});
    }
  Report r = check_program(p, L, as);
  std::cout << (o.json ? r.json(L) + "\n" : r.text(L, o.ascii));
  return r.secure() ? 0 : 1;
}

int cmd_signature(const Options& o) {
  Program p = load(o.program);
  SignatureTable sigs = infer_signatures(p);
  nlohmann::json j = nlohmann::json::array();
  for (const auto& n : p.nodes) {
    if (!o.node.empty() && n.name != o.node) continue;
    const NodeSignature& s = sigs.at(n.name);
    if (o.json) {
      nlohmann::json c = nlohmann::json::array();
      for (const auto& k : s.constraints) c.push_back(render(k, o.ascii));
      j.push_back({{"node", n.name}, {"signature", s.render(o.ascii)}, {"constraints", c}});
    } else {
      std::cout << s.render(o.ascii) << '\n';
    }
  }
  if (!o.node.empty() && !p.find(o.node)) throw InputError("unknown node '" + o.node + "'");
  if (o.json) std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_normalize(const Options& o) {
  if (o.emit != "nlustre") throw InputError("unsupported --emit target '" + o.emit + "'");
  Program p = load(o.program);
  Normalized out = normalize_program(p);
  if (!o.json) {
    std::cout << pretty_print(out.program);
    return 0;
  }
  nlohmann::json j;
  j["program"] = pretty_print(out.program);
  for (const auto& [name, info] : out.nodes) {
    nlohmann::json nj;
    nj["new_locals"] = nlohmann::json::array();
    for (const auto& l : info.new_locals)
      nj["new_locals"].push_back({{"name", l.name},
                                  {"type", std::string(to_string(l.type))},
                                  {"clock", to_string(l.clock)},
                                  {"stvar", l.stvar}});
    nj["constraints"] = nlohmann::json::array();
    for (const auto& c : info.constraints) nj["constraints"].push_back(render(c, o.ascii));
    j["nodes"][name] = nj;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_run(const Options& o) {
  Program p = load(o.program);
  const Node& n = node_of(p, o);
  std::vector<VStream> ins;
  BStream base;
  if (!o.inputs.empty()) {
    Trace t;
    try {
      t = load_trace(o.inputs);
      std::size_t ticks = std::min(o.ticks, t.ticks());
      ins = trace_inputs(t, n, ticks);
      base = t.base.empty() ? BStream(ticks, true) : BStream(t.base.begin(), t.base.begin() + static_cast<std::ptrdiff_t>(ticks));
    } catch (const Error& e) {
      throw InputError(e.what());
    }
  } else {
    Rng rng(o.seed);
    base = random_base(rng, o.ticks, 1.0);
    ins = random_inputs(rng, n, base);
  }
  NodeRun r = Interpreter(p).run(n.name, ins, base);
  std::vector<std::string> names;
  for (const auto* g : {&n.inputs, &n.outputs, &n.locals})
    for (const auto& d : *g) names.push_back(d.name);
  if (o.json) {
    nlohmann::json j;
    j["node"] = n.name;
    j["ticks"] = r.base.size();
    for (const auto& x : names) {
      nlohmann::json s = nlohmann::json::array();
      for (const auto& v : r.history.at(x)) s.push_back(to_string(v));
      j["streams"][x] = s;
    }
    std::cout << j.dump(2) << '\n';
  } else if (o.by_var) {
    std::cout << format_rows(names, r.history);
  } else {
    std::cout << format_trace(names, r.history);
  }
  return 0;
}

int finish(const std::vector<CheckReport>& reports, const Options& o) {
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.verdict == Verdict::Pass;
  if (o.json) {
    std::cout << (reports.size() == 1 ? reports[0].json() : json_array(reports)) << '\n';
  } else {
    for (const auto& r : reports) std::cout << r.text() << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_ni(const Options& o) {
  Program p = load(o.program);
  const Node& n = node_of(p, o);
  NIConfig cfg;
  cfg.node = n.name;
  cfg.lattice = lattice_of(o);
  cfg.assignment.node = n.name;
  for (const auto& a : assignments_of(o))
    if (a.node == n.name) cfg.assignment = a;
  if (!o.level.empty()) {
    if (!cfg.lattice.has(o.level)) throw InputError("unknown level '" + o.level + "'");
    cfg.level = o.level;
  }
  cfg.trials = o.trials;
  cfg.ticks = o.ticks;
  cfg.seed = o.seed;
  cfg.force = o.force;
  return finish({check_non_interference(p, cfg)}, o);
}

int cmd_preserve(const Options& o) {
  Program p = load(o.program);
  std::vector<CheckReport> out;
  for (const auto& n : p.nodes) {
    if (!o.node.empty() && n.name != o.node) continue;
    out.push_back(check_semantics_preservation(p, n.name, o.trials, o.ticks, o.seed));
    out.push_back(check_type_preservation(p, n.name, 10, o.samples / 10 + 1, o.seed));
  }
  if (out.empty()) throw InputError("unknown node '" + o.node + "'");
  return finish(out, o);
}

int cmd_suite(const Options& o) {
  std::optional<Program> p;
  if (!o.program.empty()) p = load(o.program);
  SuiteConfig cfg;
  cfg.programs = o.programs;
  cfg.trials = o.trials;
  cfg.ticks = o.ticks;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  return finish(run_suite(p ? &*p : nullptr, cfg), o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"luset: security types and stream semantics for Lustre"};
  app.require_subcommand(1);
  Options o;

  auto program = [&](CLI::App* c, bool required = true) {
    auto* opt = c->add_option("program", o.program, "Lustre source file");
    if (required) opt->required();
  };
  auto common = [&](CLI::App* c) {
    c->add_flag("--json", o.json, "Machine readable output");
    c->add_flag("--ascii", o.ascii, "ASCII rendering of types");
  };

  auto* check = app.add_subcommand("check", "Check a program against level assignments");
  program(check);
  common(check);
  check->add_option("--lattice", o.lattice, "two-point, powerset:<n>, chain:<n> or a JSON file");
  check->add_option("--assign", o.assign, "JSON level assignment");
  check->add_option("--node", o.node, "Only this node (without --assign)");

  auto* sig = app.add_subcommand("signature", "Print inferred node signatures");
  program(sig);
  common(sig);
  sig->add_option("--node", o.node, "Only this node");

  auto* norm = app.add_subcommand("normalize", "Translate to NLustre");
  program(norm);
  common(norm);
  norm->add_option("--emit", o.emit, "Output language")->check(CLI::IsMember({"nlustre"}));

  auto* run = app.add_subcommand("run", "Execute a node");
  program(run);
  common(run);
  run->add_option("--node", o.node, "Node to run (default: last)");
  run->add_option("--inputs", o.inputs, "CSV trace with the input streams");
  run->add_option("--ticks", o.ticks, "Number of ticks");
  run->add_option("--seed", o.seed, "Seed for random inputs");
  run->add_flag("--by-var", o.by_var, "One line per variable");

  auto* ni = app.add_subcommand("ni", "Non-interference test by paired runs");
  program(ni);
  common(ni);
  ni->add_option("--node", o.node, "Node under test (default: last)");
  ni->add_option("--lattice", o.lattice, "Security lattice");
  ni->add_option("--assign", o.assign, "JSON level assignment");
  ni->add_option("--level", o.level, "Observer level (default: every level)");
  ni->add_option("--trials", o.trials, "Paired runs per level");
  ni->add_option("--ticks", o.ticks, "Ticks per run");
  ni->add_option("--seed", o.seed, "Random seed");
  ni->add_flag("--force", o.force, "Run even if the assignment is insecure");

  auto* pres = app.add_subcommand("preserve", "Semantics and type preservation of normalization");
  program(pres);
  common(pres);
  pres->add_option("--node", o.node, "Only this node");
  pres->add_option("--trials", o.trials, "Random input prefixes");
  pres->add_option("--ticks", o.ticks, "Ticks per run");
  pres->add_option("--samples", o.samples, "Sampled instantiations");
  pres->add_option("--seed", o.seed, "Random seed");

  auto* suite = app.add_subcommand("suite", "Property suite");
  program(suite, false);
  common(suite);
  suite->add_option("--programs", o.programs, "Random programs");
  suite->add_option("--trials", o.trials, "Trials per check");
  suite->add_option("--ticks", o.ticks, "Ticks per run");
  suite->add_option("--samples", o.samples, "Samples for the type level checks");
  suite->add_option("--seed", o.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(o);
    if (*sig) return cmd_signature(o);
    if (*norm) return cmd_normalize(o);
    if (*run) return cmd_run(o);
    if (*ni) return cmd_ni(o);
    if (*pres) return cmd_preserve(o);
    if (*suite) return cmd_suite(o);
  } catch (const InputError& e) {
    std::cerr << "luset: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "luset: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
