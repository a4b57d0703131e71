#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "luset/ast.hpp"

namespace luset {

// Structural invariants plus datatype and arity checking. Empty iff the
// program is well formed.
std::vector<Diagnostic> well_formed(const Program& prog);

// Annotates every expression with per-component clocks and datatypes and
// every equation with its clock. Throws Error(ClockMismatch) on failure.
Program infer_clocks(const Program& prog);

struct DepGraph {
  std::map<std::string, std::set<std::string>> reads;  // x -> variables read instantaneously
  std::vector<std::size_t> order;                      // equation indices, definitions first
  std::vector<std::string> cycle;                      // empty when acyclic

  bool acyclic() const { return cycle.empty(); }
};

DepGraph instantaneous_deps(const Node& node);

// instantaneous_deps, throwing Error(CausalityCycle) when a cycle exists.
std::vector<std::size_t> schedule(const Node& node);

// Nodes ordered so that callees come before callers.
std::vector<std::string> call_order(const Program& prog);

}  // namespace luset
