#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "luset/ast.hpp"
#include "luset/streams.hpp"

namespace luset {

// CSV traces: a header of variable names (optionally a `base` column), then
// one row per tick with integers, true/false or `_` for absent.
struct Trace {
  std::vector<std::string> names;
  std::vector<VStream> columns;
  BStream base;  // empty unless a base column was given

  std::size_t ticks() const { return columns.empty() ? base.size() : columns[0].size(); }
  const VStream* column(std::string_view name) const;
};

Value parse_value(std::string_view cell);
Trace parse_trace(std::string_view text);
Trace load_trace(const std::string& path);

// Input streams of node n in declaration order, truncated to ticks.
std::vector<VStream> trace_inputs(const Trace& t, const Node& n, std::size_t ticks);

std::string format_trace(const std::vector<std::string>& names, const History& H, const BStream* base = nullptr);
// One line per variable: name,v0,v1,...
std::string format_rows(const std::vector<std::string>& names, const History& H);

}  // namespace luset
