#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "luset/ast.hpp"
#include "luset/lattice.hpp"
#include "luset/secinfer.hpp"
#include "luset/streams.hpp"

namespace luset {

enum class Verdict { Pass, Fail, Inconclusive, Skipped };
std::string_view to_string(Verdict v);

struct CheckReport {
  std::string check;
  std::string node;
  Verdict verdict = Verdict::Pass;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string message;
  std::string counterexample;  // JSON text, empty when there is none
  bool identical = false;      // type preservation: signatures canonically equal

  bool ok() const { return verdict == Verdict::Pass || verdict == Verdict::Skipped; }
  // {check, node, verdict, trials, seed, counterexample?}
  std::string json() const;
  std::string text() const;
};

std::string json_array(const std::vector<CheckReport>& reports);

// Restriction of H to the variables whose level is below t.
History project_history(const History& H, const std::map<std::string, Level>& levels, Level t, const Lattice& L);

// Levels of every variable of a node (base included) under an assignment:
// the interface as assigned, locals from the least solution of the full
// constraint set.
struct NodeLevels {
  std::map<std::string, Level> vars;
  bool secure = true;  // the program check accepted the assignment
  std::vector<std::string> violated;
};
NodeLevels node_levels(const Program& prog, const std::string& node, const Assignment& a, const Lattice& L);

struct NIConfig {
  std::string node;
  Lattice lattice = Lattice::two_point();
  Assignment assignment;
  std::optional<std::string> level;  // every lattice level when unset
  std::size_t trials = 100;
  std::size_t ticks = 64;
  std::uint64_t seed = 1;
  bool force = false;
};

CheckReport check_non_interference(const Program& prog, const NIConfig& cfg);
CheckReport check_semantics_preservation(const Program& prog, const std::string& f, std::size_t trials,
                                         std::size_t ticks, std::uint64_t seed);
CheckReport check_type_preservation(const Program& prog, const std::string& f, std::size_t lattices,
                                    std::size_t samples, std::uint64_t seed);
CheckReport check_equational_soundness(std::size_t samples, std::size_t instantiations, std::size_t permutations,
                                       std::uint64_t seed);
CheckReport check_simple_security(std::size_t samples, std::uint64_t seed);
CheckReport check_simplify(std::size_t samples, std::uint64_t seed);

struct SuiteConfig {
  std::size_t programs = 20;  // random programs
  std::size_t trials = 20;
  std::size_t ticks = 64;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
};

// Property suite: the expression and type level checks, then preservation
// and non-interference on the given program (if any) and on random programs.
std::vector<CheckReport> run_suite(const Program* prog, const SuiteConfig& cfg);

}  // namespace luset
