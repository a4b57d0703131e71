#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "luset/ast.hpp"

namespace luset {

struct ParseResult {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

ParseResult parse_program(std::string_view text, std::string file = "");

// Parses, checks well-formedness and annotates clocks; throws Error on the
// first problem.
Program load_program(std::string_view text, std::string file = "");
Program load_program_file(const std::string& path);

std::string pretty_print(const Program& prog);
std::string pretty_print(const Node& node);
std::string pretty_print(const Expr& e);

}  // namespace luset
