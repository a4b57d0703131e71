#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "luset/ast.hpp"
#include "luset/lattice.hpp"
#include "luset/streams.hpp"

namespace luset {

using Rng = std::mt19937_64;

struct GenConfig {
  int nodes = 3;
  int max_inputs = 3;
  int max_outputs = 2;
  int max_locals = 4;
  int max_depth = 3;
  bool calls = true;
  bool subclocks = true;
  bool tuples = true;
};

// Random well-typed, well-clocked and causal program; callees precede callers.
// No division, so runs cannot fail on arithmetic.
Program random_program(Rng& rng, const GenConfig& cfg = {});

// Random expression of the given datatype over the variables of vars
// (all on the base clock), for expression-level properties.
Expr random_expr(Rng& rng, const std::vector<VarDecl>& vars, DataType t, int depth);

Value random_value(Rng& rng, DataType t);

// Inputs for a node whose interface is on the base clock: all present at
// ticks where base is true.
std::vector<VStream> random_inputs(Rng& rng, const Node& n, const BStream& base);
BStream random_base(Rng& rng, std::size_t ticks, double present = 0.85);

// Lattices of at most max_size elements: chains and union-closed families of
// subsets of a three element set.
Lattice random_lattice(Rng& rng, std::size_t max_size = 8);

}  // namespace luset
