#pragma once

#include <map>
#include <string>
#include <vector>

#include "luset/ast.hpp"
#include "luset/streams.hpp"

namespace luset {

struct NodeRun {
  std::vector<VStream> outputs;
  History history;  // inputs, outputs and locals of the executed node
  BStream base;
};

// Executes nodes of a program on finite prefixes. The program is elaborated
// (clocks annotated) and every node scheduled once at construction.
class Interpreter {
 public:
  explicit Interpreter(const Program& prog);

  NodeRun run(const std::string& node, const std::vector<VStream>& inputs, std::size_t ticks) const;
  // Variant for nodes without inputs, driven by an explicit base clock.
  NodeRun run(const std::string& node, const std::vector<VStream>& inputs, const BStream& base) const;

  const Program& program() const { return prog_; }
  const std::vector<std::size_t>& order(const std::string& node) const;

 private:
  Program prog_;
  std::map<std::string, std::vector<std::size_t>> order_;
};

NodeRun eval_node(const Program& prog, const std::string& f, const std::vector<VStream>& inputs, std::size_t ticks);

// Streams of an expression over a history. Constants follow their clock
// annotation when present, bs otherwise.
std::vector<VStream> eval_expr(const Program& prog, const History& H, const BStream& bs, const Expr& e);

}  // namespace luset
